#include <set>

#include "doctest.h"
#include "r2sf/error.hpp"
#include "r2sf/presemifield.hpp"

using namespace r2sf;

namespace {

// Exhaustive zero-divisor search on the multiplication itself.
bool has_zero_divisor(const SpreadMap& S) {
  const Field& F = S.field();
  const auto all = F.elements();
  for (Elem x : all)
    for (Elem y : all) {
      if (x.is_zero() && y.is_zero()) continue;
      for (Elem u : all)
        for (Elem v : all) {
          if (u.is_zero() && v.is_zero()) continue;
          const auto [a, b] = S.multiply(u, v, x, y);
          if (a.is_zero() && b.is_zero()) return true;
        }
    }
  return false;
}

FamilySpec spec(std::string fam, unsigned p, unsigned n) {
  FamilySpec s;
  s.family = std::move(fam);
  s.p = p;
  s.n = n;
  return s;
}

}  // namespace

TEST_CASE("Dempwolff shape rows") {
  auto s = spec("dA", 3, 3);
  s.a = "g";
  const auto S = build_family(s);
  const Field& F = S.field();
  const Elem xi = default_xi(F);
  CHECK(xi == F.from_int(2));
  const auto& d = *S.dempwolff();
  for (Elem x : F.elements())
    for (Elem y : {F.zero(), F.one(), F.gen()}) {
      CHECK(S.multiply(F.one(), F.zero(), x, y) == std::pair{x, y});
      CHECK(S.multiply(F.zero(), F.one(), x, y) == std::pair{d.F1.eval(y), F.mul(xi, d.F2.eval(x))});
      CHECK(S.multiply(F.gen(), F.one(), F.zero(), F.zero()) == std::pair{F.zero(), F.zero()});
    }
  const Mat2 M0 = S.at(F.one(), F.zero());
  CHECK(M0 == Mat2{F.one(), F.zero(), F.zero(), F.mul(xi, d.F2.eval(F.one()))});
}

TEST_CASE("family constraints") {
  auto s = spec("dB", 3, 3);
  s.b = "g";
  CHECK_THROWS_WITH_AS(build_family(s), "N_q(b) ∈ {±1} for all b when q=3", ConstraintViolation);
  auto a = spec("dA", 3, 3);
  a.a = "1";
  CHECK_THROWS_AS(build_family(a), ConstraintViolation);
  a.a = "g";
  a.r = 3;
  CHECK_THROWS_AS(build_family(a), ConstraintViolation);
  auto e = spec("dA", 3, 4);
  e.a = "g";
  CHECK_THROWS_AS(build_family(e), ConstraintViolation);
  auto b = spec("dB", 5, 3);
  b.b = "g";
  CHECK_NOTHROW(build_family(b));
  auto F5 = Field::make(5, 1, 3);
  CHECK(F5->norm(F5->gen()) == F5->exp_g(31));
  b.b = "g^31";  // norm g^{31*31 mod 124} = g^93... still order 4
  b.b = "2";     // N(2) = 8 = 3 in F_5, not +-1
  CHECK_NOTHROW(build_family(b));
  b.b = "1";
  CHECK_THROWS_AS(build_family(b), ConstraintViolation);
  auto u = spec("zz", 3, 3);
  CHECK_THROWS_AS(build_family(u), InvalidArgument);
}

TEST_CASE("dA q=3 n=3: all valid a have norm -1 and satisfy condition (1)") {
  auto F = Field::make(3, 1, 3);
  unsigned valid = 0;
  for (Elem a : F->elements()) {
    if (a.is_zero() || F->norm(a) == F->one()) continue;
    CHECK(F->norm(a) == F->from_int(-1));
    ++valid;
  }
  CHECK(valid == 13);
  const auto A = family_A(F, F->gen(), 1);
  const auto chk = dempwolff_condition(A, A, default_xi(*F));
  CHECK(chk.image1 == 13);
  CHECK(chk.image2 == 13);
  CHECK(chk.holds());
}

TEST_CASE("condition (1) with identities") {
  auto F = Field::make(5, 1, 3);
  const auto id = LinPoly::identity(F);
  const auto chk = dempwolff_condition(id, id, default_xi(*F));
  CHECK(chk.image1 == 62);
  CHECK(chk.holds());
  CHECK(zero_divisor_check(dempwolff_map(F, id, id, default_xi(*F))));
  CHECK(!zero_divisor_check(dempwolff_map(F, id, id, F->one())));
  CHECK(!dempwolff_condition(id, id, F->one()).holds());
}

TEST_CASE("det criterion agrees with exhaustive zero-divisor search") {
  auto F = Field::make(3, 1, 3);
  const auto id = LinPoly::identity(F);
  const Elem xi = default_xi(*F);
  std::vector<SpreadMap> maps{dempwolff_map(F, id, id, xi), dempwolff_map(F, id, id, F->one()),
                              dempwolff_map(F, family_A(F, F->gen(), 1), family_A(F, F->gen(), 1), xi),
                              dempwolff_map(F, family_A(F, F->gen(), 1), id, xi)};
  for (const auto& S : maps) {
    const bool ok = zero_divisor_check(S);
    CHECK(ok == !has_zero_divisor(S));
    if (S.dempwolff()) CHECK(ok == dempwolff_condition(S.dempwolff()->F1, S.dempwolff()->F2, S.dempwolff()->xi).holds());
  }
}

TEST_CASE("normalization") {
  auto s = spec("dB", 5, 3);
  s.b = "g";
  const auto S = build_family(s);
  CHECK(!contains_identity(S));
  const auto N = normalize_spread(S);
  CHECK(contains_identity(N));
  CHECK(N.at(S.field().one(), S.field().zero()) == mat_identity(S.field()));
  // |S'| = q^{2n}
  std::set<std::array<std::uint32_t, 4>> seen;
  for (Elem x : S.field().elements())
    for (Elem y : S.field().elements()) {
      const Mat2 M = N.at(x, y);
      seen.insert({M.a.code, M.b.code, M.c.code, M.d.code});
    }
  CHECK(seen.size() == 15625);
  CHECK_THROWS_AS(nuclei_spreadset(S), InvalidArgument);
}

TEST_CASE("nuclei dA q=3 n=3: brute force, spread set and sampled agree") {
  auto s = spec("dA", 3, 3);
  s.a = "g";
  const auto S = build_family(s);
  const auto bf = nuclei_bruteforce(S);
  const auto fast = nuclei_spreadset(normalize_spread(S));
  const auto smp = nuclei_sampled(S);
  CHECK(bf.left == 27);
  CHECK(bf.middle == 3);
  CHECK(bf.right == 9);
  CHECK(bf.center == 3);
  CHECK(fast == bf);
  CHECK(smp == bf);
}

TEST_CASE("field as presemifield: all nuclei are the field") {
  // F_9 over F_3 as F_3 x F_3 ... realized as dempwolff with F1 = id, F2 = id,
  // xi non-square: (u,v)(x,y) = (ux + v y, uy + xi v x), i.e. F_{q^{2n}}.
  auto F = Field::make(3, 1, 3);
  const auto id = LinPoly::identity(F);
  const auto S = dempwolff_map(F, id, id, default_xi(*F));
  const auto bf = nuclei_bruteforce(S);
  CHECK(bf.left == 729);
  CHECK(bf.middle == 729);
  CHECK(bf.right == 729);
  CHECK(bf.center == 729);
  CHECK(nuclei_spreadset(normalize_spread(S)) == bf);
}

TEST_CASE("k17 middle nucleus and transpose") {
  // find valid f for g = 0 at q=3, n=3
  auto F = Field::make(3, 1, 3);
  FamilySpec s = spec("k17", 3, 3);
  std::string fvalid;
  for (Elem f : F->elements()) {
    s.f = F->format(f);
    try {
      build_family(s);
      fvalid = s.f;
      break;
    } catch (const ConstraintViolation&) {
    }
  }
  REQUIRE(!fvalid.empty());
  s.g = "g";
  s.f = fvalid;
  SpreadMap K = [&] {
    for (Elem g : F->elements()) {
      s.g = F->format(g);
      for (Elem f : F->elements()) {
        s.f = F->format(f);
        try {
          return build_family(s);
        } catch (const ConstraintViolation&) {
        }
      }
    }
    throw std::runtime_error("no k17 parameters");
  }();
  CHECK(zero_divisor_check(K));
  const auto bf = nuclei_bruteforce(K);
  CHECK(bf.middle == 27);
  CHECK(nuclei_spreadset(normalize_spread(K)) == bf);
  const auto T = transpose_spread(K);
  const auto nt = nuclei_spreadset(normalize_spread(T));
  CHECK(nt.right == 27);
  CHECK(nt == nuclei_bruteforce(T));
  CHECK(transpose_spread(T).at(F->gen(), F->one()) == K.at(F->gen(), F->one()));
}

TEST_CASE("nuclei are invariant under the choice of M0") {
  auto s = spec("dA", 3, 3);
  s.a = "g^3";
  const auto S = build_family(s);
  const Field& F = S.field();
  const auto a = nuclei_spreadset(normalize_spread(S));
  const auto b = nuclei_spreadset(normalize_spread(S, F.gen(), F.exp_g(5)));
  CHECK(a == b);
}

TEST_CASE("gtf spread set at q=5, n=3, t=1") {
  auto F = Field::make(5, 1, 3);
  QuadExt E(F);
  // smallest c (by code order of pairs) outside the index-4 subgroup
  QElem c{};
  bool found = false;
  for (std::uint32_t k = 1; k < 125 && !found; ++k) {
    c = QElem{Elem{k}, F->one()};
    found = gtf_parameter_valid(E, c, 1);
  }
  REQUIRE(found);
  const auto S = gtf_spread(E, c, 1);
  CHECK(S.at(F->zero(), F->zero()) == Mat2{});
  // y = 1: x -> x - c x^{q^n}; rows are images of 1 and w
  const QElem w{F->zero(), F->one()};
  const QElem r0 = E.sub(E.embed(F->one()), c);
  const QElem r1 = E.add(w, E.mul(c, w));
  CHECK(S.at(F->one(), F->zero()) == Mat2{r0.a0, r0.a1, r1.a0, r1.a1});
  CHECK(zero_divisor_check(S));
  std::set<std::array<std::uint32_t, 4>> seen;
  for (Elem x : F->elements())
    for (Elem y : F->elements()) {
      const Mat2 M = S.at(x, y);
      seen.insert({M.a.code, M.b.code, M.c.code, M.d.code});
    }
  CHECK(seen.size() == 15625);
  // invalid c: an element of the form y^{1-q^t} x^{1-q^n}
  const QElem y{F->gen(), F->one()};
  const QElem bad = E.mul(y, E.inv(E.frob(y, 1)));
  CHECK(!gtf_parameter_valid(E, bad, 1));
  CHECK(!gtf_parameter_valid(E, QElem{}, 1));
}
