#include <gtest/gtest.h>

#include <random>

#include "capk/matrix.hpp"
#include "oracle.hpp"

using namespace capk;

namespace {

void expect_valid_smith(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  EXPECT_EQ(s.U * m * s.V, s.D);
  EXPECT_EQ(s.U * s.Uinv, IntMatrix::identity(m.rows()));
  EXPECT_EQ(s.V * s.Vinv, IntMatrix::identity(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) EXPECT_EQ(s.D(i, j), 0);
  for (std::size_t i = 0; i + 1 < s.diag.size(); ++i) {
    EXPECT_GE(s.diag[i], 0);
    if (s.diag[i] == 0)
      EXPECT_EQ(s.diag[i + 1], 0);
    else
      EXPECT_TRUE(mpz_divisible_p(s.diag[i + 1].get_mpz_t(), s.diag[i].get_mpz_t()));
  }
}

}  // namespace

TEST(Smith, SmallExample) {
  SmithForm s = smith_normal_form(IntMatrix{{2, 4}, {6, 8}});
  EXPECT_EQ(s.diag, (Vec{2, 4}));
}

TEST(Smith, IdentityAndZero) {
  EXPECT_EQ(smith_normal_form(IntMatrix::identity(3)).D, IntMatrix::identity(3));
  SmithForm z = smith_normal_form(IntMatrix(2, 3));
  EXPECT_TRUE(z.D.is_zero());
  EXPECT_EQ(z.rank, 0u);
}

TEST(Smith, RandomMatricesAgreeWithMinors) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = oracle::random_matrix(rng, r, c, -9, 9);
    expect_valid_smith(m);
    std::size_t rk = 0;
    Vec inv = oracle::minors_invariants(m, &rk);
    SmithForm s = smith_normal_form(m);
    Vec got;
    for (const auto& d : s.diag)
      if (d != 0 && d != 1) got.push_back(d);
    EXPECT_EQ(got, inv) << m.to_string();
    EXPECT_EQ(s.rank, rk);
  }
}

TEST(Smith, InvariantUnderPermutation) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    IntMatrix m = oracle::random_matrix(rng, 3, 4, -20, 20);
    IntMatrix p = m;
    p.swap_rows(0, 2);
    p.swap_cols(1, 3);
    EXPECT_EQ(smith_normal_form(m).diag, smith_normal_form(p).diag);
  }
}

TEST(Smith, LargeEntriesStayExact) {
  IntMatrix m{{1000000007, 998244353}, {123456789, 987654321}};
  m(0, 0) *= Int("1000000000000000000000");
  expect_valid_smith(m);
}

TEST(Kernel, Basis) {
  IntMatrix m{{1, 2, 3}, {2, 4, 6}};
  IntMatrix k = integer_kernel(m);
  EXPECT_EQ(k.cols(), 2u);
  EXPECT_TRUE((m * k).is_zero());
  // A primitive kernel: determinantal divisors of the basis are trivial.
  EXPECT_TRUE(oracle::minors_invariants(k).empty());
}

TEST(Solve, Integer) {
  IntMatrix m{{2, 0}, {0, 3}};
  auto x = solve_integer(m, Vec{4, 9});
  ASSERT_TRUE(x);
  EXPECT_EQ(m * *x, (Vec{4, 9}));
  EXPECT_FALSE(solve_integer(m, Vec{1, 0}));
}

TEST(Hermite, CanonicalForLattice) {
  IntMatrix a{{2, 0}, {0, 3}};
  IntMatrix b{{2, 3}, {0, 3}, {4, 6}};
  IntMatrix ha = hermite_rows(a), hb = hermite_rows(b);
  EXPECT_EQ(ha, hb);
  EXPECT_EQ(hermite_rows(IntMatrix{{4, 6}, {2, 3}}), (IntMatrix{{2, 3}}));
}

TEST(Determinant, Bareiss) {
  EXPECT_EQ(determinant(IntMatrix{{2, 4}, {6, 8}}), -8);
  EXPECT_EQ(determinant(IntMatrix{{0, 1}, {1, 0}}), -1);
  EXPECT_EQ(determinant(IntMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}), -3);
  EXPECT_EQ(determinant(IntMatrix{{1, 2}, {2, 4}}), 0);
}
