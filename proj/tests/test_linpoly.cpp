#include <map>
#include <random>

#include "doctest.h"
#include "r2sf/error.hpp"
#include "r2sf/linpoly.hpp"

using namespace r2sf;

namespace {

// Brute-force inverse table of a bijection of F_{q^n}.
std::vector<Elem> inverse_table(const LinPoly& f) {
  const Field& F = f.field();
  std::vector<Elem> inv(F.size());
  std::vector<bool> hit(F.size(), false);
  for (std::uint32_t c = 0; c < F.size(); ++c) {
    const Elem y = f.eval(Elem{c});
    REQUIRE(!hit[y.code]);
    hit[y.code] = true;
    inv[y.code] = Elem{c};
  }
  return inv;
}

std::uint64_t kernel_size(const LinPoly& f) {
  std::uint64_t k = 0;
  for (std::uint32_t c = 0; c < f.field().size(); ++c) k += f.eval(Elem{c}).is_zero() ? 1 : 0;
  return k;
}

}  // namespace

TEST_CASE("evaluation basics") {
  auto F = Field::make(3, 1, 3);
  const auto id = LinPoly::identity(F);
  const auto fr = LinPoly::monomial(F, F->one(), 1);
  const Elem a = F->exp_g(5);
  for (Elem x : F->elements()) {
    CHECK(id.eval(x) == x);
    CHECK(fr.eval(x) == F->frob(x, 1));
  }
  for (Elem x : F->base_elements())
    CHECK(family_A(F, a, 1).eval(x) == F->mul(x, F->sub(F->one(), a)));
}

TEST_CASE("interpolation") {
  auto F = Field::make(5, 1, 3);
  const Elem c = F->exp_g(17);
  CHECK(lp_interpolate(F, [&](Elem x) { return F->frob(x, 1); }) == LinPoly::monomial(F, F->one(), 1));
  CHECK(lp_interpolate(F, [&](Elem x) { return F->mul(c, x); }) == LinPoly::monomial(F, c, 0));
  CHECK_THROWS_AS(lp_interpolate(F, [&](Elem x) { return F->mul(x, x); }), InvalidArgument);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    std::vector<Elem> co(3);
    for (auto& e : co) e = Elem{static_cast<std::uint32_t>(rng() % 125)};
    const LinPoly f(F, co);
    CHECK(lp_interpolate(F, [&](Elem x) { return f.eval(x); }) == f);
  }
}

TEST_CASE("composition and inverse") {
  auto F = Field::make(3, 1, 3);
  const auto id = LinPoly::identity(F);
  const auto fr = LinPoly::monomial(F, F->one(), 1);
  CHECK(lp_compose(fr, fr) == LinPoly::monomial(F, F->one(), 2));
  const auto H = family_H(F, F->gen(), 1);
  CHECK(lp_compose(id, H) == H);
  const auto Hi = lp_inverse(H);
  CHECK(lp_compose(H, Hi) == id);
  CHECK(lp_compose(Hi, H) == id);
  const auto table = inverse_table(H);
  for (Elem y : F->elements()) CHECK(Hi.eval(y) == table[y.code]);
  CHECK(lp_inverse(id) == id);
  const Elem c = F->exp_g(3);
  CHECK(lp_inverse(LinPoly::monomial(F, c, 0)) == LinPoly::monomial(F, F->inv(c), 0));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const LinPoly f(F, {Elem{static_cast<std::uint32_t>(rng() % 27)}, Elem{static_cast<std::uint32_t>(rng() % 27)}, Elem{static_cast<std::uint32_t>(rng() % 27)}});
    const LinPoly g(F, {Elem{static_cast<std::uint32_t>(rng() % 27)}, Elem{static_cast<std::uint32_t>(rng() % 27)}, Elem{static_cast<std::uint32_t>(rng() % 27)}});
    const auto fg = lp_compose(f, g);
    for (Elem x : F->elements()) CHECK(fg.eval(x) == f.eval(g.eval(x)));
  }
}

TEST_CASE("inverse of H_{g,1} at q=5, n=3 against a brute-force table") {
  auto F = Field::make(5, 1, 3);
  const auto H = family_H(F, F->gen(), 1);
  const auto Hi = lp_inverse(H);
  const auto table = inverse_table(H);
  for (Elem y : F->elements()) CHECK(Hi.eval(y) == table[y.code]);
  CHECK(family_B(F, F->gen(), 1).is_bijective());
}

TEST_CASE("rank and singular H") {
  auto F = Field::make(3, 1, 3);
  CHECK(LinPoly::identity(F).rank() == 3);
  CHECK(LinPoly::zero(F).rank() == 0);
  unsigned singular = 0;
  for (std::uint32_t c = 1; c < 27; ++c) {
    const Elem b{c};
    const auto H = family_H(F, b, 1);
    const bool sing = kernel_size(H) > 1;
    CHECK(sing == (H.rank() < 3));
    CHECK(sing == (F->norm(b) == F->one()));
    if (sing) {
      CHECK_THROWS_AS(lp_inverse(H), InvalidArgument);
      const auto ker = lp_kernel(H);
      CHECK(ipow(3, static_cast<unsigned>(ker.size())) == kernel_size(H));
      for (Elem k : ker) CHECK(H.eval(k).is_zero());
    }
    singular += sing ? 1 : 0;
  }
  CHECK(singular == 13);
}

TEST_CASE("adjoint duality and involution") {
  for (auto [p, n] : {std::pair{3u, 3u}, {5u, 3u}, {3u, 5u}}) {
    auto F = Field::make(p, 1, n);
    std::mt19937_64 rng(p * 100 + n);
    for (int t = 0; t < 3; ++t) {
      std::vector<Elem> co(n);
      for (auto& e : co) e = Elem{static_cast<std::uint32_t>(rng() % F->size())};
      const LinPoly f(F, co);
      const auto fa = lp_adjoint(f);
      CHECK(lp_adjoint(fa) == f);
      const auto all = F->elements();
      for (std::size_t i = 0; i < all.size(); i += (F->size() > 125 ? 7 : 1))
        for (Elem y : all)
          REQUIRE(F->trace(F->mul(all[i], f.eval(y))) == F->trace(F->mul(fa.eval(all[i]), y)));
    }
    CHECK(lp_adjoint(LinPoly::identity(F)) == LinPoly::identity(F));
  }
}

TEST_CASE("family coefficients") {
  auto F = Field::make(5, 1, 3);
  const Elem a = F->exp_g(7);
  const auto A = family_A(F, a, 1);
  CHECK(A.coeff(1) == F->one());
  CHECK(A.coeff(2) == F->neg(a));
  CHECK(A.coeff(0).is_zero());
  CHECK(family_A(F, a, -1) == family_A(F, a, 2));
  CHECK(family_B(F, F->zero(), 1) == LinPoly::identity(F));
  auto F2 = Field::make(2, 1, 3);
  CHECK_THROWS_AS(family_B(F2, F2->gen(), 1), InvalidArgument);
}

TEST_CASE("text form") {
  auto F = Field::make(5, 1, 3);
  const LinPoly f(F, {F->exp_g(3), F->zero(), F->one()});
  CHECK(f.to_string() == "g^3*X^[0] + X^[2]");
  CHECK(LinPoly::parse(F, f.to_string()) == f);
  CHECK(LinPoly::parse(F, "[1,2]*X^[1] + X^[1]") == LinPoly::monomial(F, F->parse("[2,2]"), 1));
  CHECK(LinPoly::parse(F, "0").is_zero());
  CHECK_THROWS_AS(LinPoly::parse(F, "X^[a]"), InvalidArgument);
}
