#include <set>

#include "doctest.h"
#include "r2sf/error.hpp"
#include "r2sf/ffield.hpp"

using namespace r2sf;

namespace {

// Independent oracle: brute-force order of x modulo f over F_p by repeated
// multiplication, f given low-first without the leading 1.
bool oracle_primitive(const std::vector<unsigned>& low, unsigned p) {
  const std::size_t d = low.size();
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < d; ++i) size *= p;
  std::vector<unsigned> cur(d, 0);
  cur[0] = 1;
  for (std::uint64_t k = 1; k < size; ++k) {
    const unsigned top = cur[d - 1];
    for (std::size_t i = d - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    for (std::size_t i = 0; i < d; ++i) cur[i] = (cur[i] + (p - top) * low[i]) % p;
    bool one = cur[0] == 1;
    for (std::size_t i = 1; i < d && one; ++i) one = cur[i] == 0;
    if (one) return k == size - 1;
  }
  return false;
}

}  // namespace

TEST_CASE("field construction and cardinalities") {
  auto F = Field::make(3, 1, 3);
  CHECK(F->size() == 27);
  CHECK(F->order() == 26);
  CHECK(Field::make(5, 1, 3)->size() == 125);
  CHECK_THROWS_AS(Field::make(4, 1, 3), InvalidArgument);
  CHECK_THROWS_AS(Field::make(3, 0, 3), InvalidArgument);
  CHECK_THROWS_AS(Field::make(3, 1, 40), CapExceeded);
}

TEST_CASE("modulus of F_243 is the lex-first primitive quintic") {
  auto F = Field::make(3, 1, 5);
  CHECK(F->size() == 243);
  // Scan (c4, ..., c0) lexicographically with the oracle.
  std::vector<unsigned> expected;
  for (unsigned k = 0; k < 243 && expected.empty(); ++k) {
    std::vector<unsigned> low(5);
    unsigned t = k;
    for (auto& c : low) { c = t % 3; t /= 3; }
    if (oracle_primitive(low, 3)) expected = low;
  }
  REQUIRE(!expected.empty());
  const auto& f = F->modulus();
  for (unsigned i = 0; i < 5; ++i) CHECK(f[i] == expected[i]);
  CHECK(f[5] == 1);
}

TEST_CASE("generator has full order and dlog inverts exp") {
  for (auto [p, h, n] : {std::tuple{3u, 1u, 3u}, {5u, 1u, 3u}, {3u, 2u, 2u}, {2u, 1u, 5u}}) {
    auto F = Field::make(p, h, n);
    std::set<std::uint32_t> seen;
    Elem x = F->one();
    for (std::uint64_t k = 0; k < F->order(); ++k) {
      CHECK(F->dlog(x) == k);
      seen.insert(x.code);
      x = F->mul(x, F->gen());
    }
    CHECK(seen.size() == F->order());
    CHECK(x == F->one());
  }
  auto F = Field::make(3, 1, 3);
  CHECK(F->dlog(F->one()) == 0);
  CHECK(F->dlog(F->gen()) == 1);
  CHECK(F->dlog(F->mul(F->exp_g(5), F->exp_g(7))) == 12);
  CHECK_THROWS_AS(F->dlog(F->zero()), InvalidArgument);
}

TEST_CASE("tabled and schoolbook arithmetic agree") {
  auto T = Field::make(5, 1, 3);
  auto S = Field::make(5, 1, 3, 0);
  REQUIRE(T->tabled());
  REQUIRE(!S->tabled());
  for (std::uint32_t a = 0; a < 125; ++a)
    for (std::uint32_t b = 0; b < 125; ++b) {
      const Elem x{a}, y{b};
      REQUIRE(T->mul(x, y) == S->mul(x, y));
      REQUIRE(T->add(x, y) == S->add(x, y));
    }
  for (std::uint32_t a = 1; a < 125; ++a) {
    CHECK(T->inv(Elem{a}) == S->inv(Elem{a}));
    CHECK(T->neg(Elem{a}) == S->neg(Elem{a}));
    CHECK(T->frob(Elem{a}, 1) == S->frob(Elem{a}, 1));
    CHECK(T->dlog(Elem{a}) == S->dlog(Elem{a}));
  }
}

TEST_CASE("Frobenius, trace and norm laws by full scan") {
  for (auto [p, h, n] : {std::tuple{3u, 1u, 3u}, {5u, 1u, 3u}, {3u, 1u, 5u}, {3u, 2u, 2u}}) {
    auto F = Field::make(p, h, n);
    const auto all = F->elements();
    CHECK(all.size() == F->size());
    unsigned in_base = 0;
    for (Elem x : all) {
      CHECK(F->frob(x, 0) == x);
      CHECK(F->frob(F->frob(x, 1), n - 1) == x);
      CHECK(F->frob(x, -1) == F->frob(x, n - 1));
      CHECK(F->in_base(F->trace(x)));
      CHECK(F->in_base(F->norm(x)));
      const bool b = F->pow_u(x, F->q()) == x;
      CHECK(F->in_base(x) == b);
      if (b) {
        ++in_base;
        for (int r = -3; r < 4; ++r) CHECK(F->frob(x, r) == x);
      }
    }
    CHECK(in_base == F->q());
    for (Elem x : all)
      for (Elem y : all) {
        REQUIRE(F->frob(F->add(x, y), 1) == F->add(F->frob(x, 1), F->frob(y, 1)));
        REQUIRE(F->norm(F->mul(x, y)) == F->mul(F->norm(x), F->norm(y)));
        REQUIRE(F->trace(F->add(x, y)) == F->add(F->trace(x), F->trace(y)));
      }
  }
}

TEST_CASE("trace and norm small values") {
  auto F = Field::make(3, 1, 3);
  CHECK(F->norm(F->one()) == F->one());
  CHECK(F->trace(F->zero()) == F->zero());
  CHECK(F->trace(F->one()) == F->zero());
  CHECK(F->norm(F->gen()) == F->from_int(-1));
  CHECK(F->base_elements().size() == 3);
  CHECK_THROWS_AS(F->in_subfield(F->one(), 2), InvalidArgument);
  CHECK(F->in_subfield(F->one(), 1));
}

TEST_CASE("element text round trip") {
  auto F = Field::make(5, 1, 3);
  for (Elem x : F->elements()) {
    CHECK(F->parse(F->format(x)) == x);
    CHECK(F->parse(F->format_coeffs(x)) == x);
  }
  CHECK(F->parse("g") == F->gen());
  CHECK(F->parse("g^-1") == F->inv(F->gen()));
  CHECK(F->parse("-1") == F->from_int(4));
  CHECK(F->parse("[0,1]") == F->gen());
  CHECK_THROWS_AS(F->parse("[0,5]"), InvalidArgument);
  CHECK_THROWS_AS(F->parse("[1,0,0,1]"), InvalidArgument);
  CHECK_THROWS_AS(F->parse("h^2"), InvalidArgument);
}

TEST_CASE("determinism of contexts") {
  auto A = Field::make(5, 1, 3), B = Field::make(5, 1, 3);
  CHECK(A->modulus() == B->modulus());
  CHECK(A->elements() == B->elements());
}

TEST_CASE("quadratic extension") {
  auto F = Field::make(3, 1, 3);
  QuadExt E(F);
  CHECK(E.size() == 729);
  CHECK(!F->is_square(E.s()));
  const QElem w{F->zero(), F->one()};
  CHECK(E.mul(w, w) == E.embed(E.s()));
  // frob by n is conjugation; frob by 2n is the identity
  const QElem z{F->gen(), F->exp_g(5)};
  CHECK(E.frob(z, 3) == E.conj(z));
  CHECK(E.frob(z, 6) == z);
  CHECK(E.frob(z, 1) == E.pow_u(z, 3));
  CHECK(E.frob(z, 4) == E.pow_u(z, 81));
  CHECK(E.mul(z, E.inv(z)) == E.embed(F->one()));
  CHECK(E.parse(E.format(z)) == z);
}
