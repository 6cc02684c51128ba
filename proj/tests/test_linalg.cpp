#include "doctest.h"
#include "r2sf/error.hpp"
#include "r2sf/linalg.hpp"

using namespace r2sf;

TEST_CASE("F_p matrix rank, kernel and inverse") {
  FpMatrix m(3, 3, 5);
  const unsigned vals[3][3] = {{1, 2, 3}, {0, 1, 4}, {1, 3, 2}};  // row3 = row1 + row2
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = vals[i][j];
  CHECK(m.rank() == 2);
  const auto ker = m.kernel();
  REQUIRE(ker.size() == 1);
  for (auto x : m.apply(ker[0])) CHECK(x == 0);
  CHECK_THROWS_AS(m.inverse(), InvalidArgument);
  m(2, 2) = 0;
  CHECK(m.rank() == 3);
  CHECK(m * m.inverse() == FpMatrix::identity(3, 5));
}

TEST_CASE("F_p span membership") {
  FpSpan s(3, 3);
  CHECK(s.insert({1, 2, 0}));
  CHECK(s.insert({0, 1, 1}));
  CHECK(!s.insert({1, 0, 1}));  // = row1 + 1*row2 mod 3? 1,3,1 -> 1,0,1
  CHECK(s.contains({2, 1, 0}));
  CHECK(!s.contains({0, 0, 1}));
  CHECK(s.dim() == 2);
}

TEST_CASE("field matrices") {
  auto F = Field::make(3, 1, 3);
  const Elem g = F->gen();
  FMat m{{F->one(), g}, {g, F->mul(g, g)}};
  CHECK(frank(*F, m) == 1);
  const auto ker = fkernel(*F, m, 2);
  REQUIRE(ker.size() == 1);
  CHECK(F->add(ker[0][0], F->mul(g, ker[0][1])).is_zero());
  FMat n{{F->one(), g}, {F->zero(), F->one()}};
  const auto x = fsolve(*F, n, {F->one(), F->one()});
  CHECK(x[1] == F->one());
  CHECK(x[0] == F->sub(F->one(), g));
  CHECK(fdet2(*F, F->one(), g, g, F->mul(g, g)).is_zero());
}
