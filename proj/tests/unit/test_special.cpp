#include <gtest/gtest.h>

#include <boost/math/special_functions/factorials.hpp>
#include <random>

#include "runsdist/special.hpp"

using namespace runsdist;

TEST(Binom, ZeroOnNegativeTop) {
  EXPECT_EQ(binom(5, 2), 10);
  EXPECT_EQ(binom(0, 0), 1);
  EXPECT_EQ(binom(-1, 0), 0);
  EXPECT_EQ(binom(-3, 2), 0);
  EXPECT_EQ(binom(3, 4), 0);
  EXPECT_EQ(binom(3, -1), 0);
}

TEST(Binom, ExtendNegativeTop) {
  // C(-1, b) = (-1)^b and C(-3, 2) = 6 under the extension.
  EXPECT_EQ(binom(-1, 0, BinomConvention::ExtendNegativeTop), 1);
  EXPECT_EQ(binom(-1, 3, BinomConvention::ExtendNegativeTop), -1);
  EXPECT_EQ(binom(-3, 2, BinomConvention::ExtendNegativeTop), 6);
}

TEST(Pascal, MatchesBinomAndRowSums) {
  const PascalTriangle t(60);
  for (long a = 0; a <= 60; ++a) {
    BigInt row = 0;
    for (long b = -1; b <= a + 1; ++b) {
      EXPECT_EQ(t(a, b), binom(a, b));
      row += t(a, b);
    }
    EXPECT_EQ(row, BigInt(1) << a);
  }
  EXPECT_EQ(t(-2, 1), 0);
  EXPECT_EQ(t(80, 40), binom(80, 40));
}

TEST(Stirling, RowsSumToBellNumbers) {
  const long bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int n = 0; n <= 8; ++n) {
    BigInt s = 0;
    for (int j = 0; j <= n; ++j) s += stirling2(n, j);
    EXPECT_EQ(s, bell[n]) << n;
  }
  EXPECT_EQ(stirling2(5, 3), 25);
}

TEST(Eulerian, PropertiesAndBothConstructions) {
  const int n = 14;
  const EulerianTable alt(n);
  const auto rec = EulerianTable::from_recurrence(n);
  for (int i = 1; i <= n; ++i) {
    BigInt sum = 0;
    for (int j = 0; j < i; ++j) {
      EXPECT_EQ(alt.number(i, j), rec.number(i, j));
      EXPECT_EQ(alt.number(i, j), alt.number(i, i - 1 - j)) << "symmetry";
      sum += alt.number(i, j);
    }
    EXPECT_EQ(Rational(sum), Rational(boost::math::factorial<double>(i))) << "row sum i!";
  }
  EXPECT_EQ(alt.number(4, 1), 11);
  // Worpitzky: x^i = sum_j A_ij C(x + j, i).
  for (int i = 1; i <= 8; ++i) {
    for (long x = 0; x <= 6; ++x) {
      BigInt rhs = 0;
      for (int j = 0; j < i; ++j) rhs += alt.number(i, j) * binom(x + j, i);
      BigInt lhs = 1;
      for (int t = 0; t < i; ++t) lhs *= x;
      EXPECT_EQ(lhs, rhs);
    }
  }
  EXPECT_EQ(alt.eval<Rational>(3, Rational(2)), Rational(1 + 4 * 2 + 4));
  EXPECT_THROW(alt.row(n + 1), OrderExceedsTable);
}

TEST(Hyp2F1, ValidatesParameters) {
  EXPECT_THROW(Hyp2F1Spec(1, 2, 3), InvalidParams);
  EXPECT_THROW(Hyp2F1Spec(-3, 1, -1), ZeroDenominatorPochhammer);
  EXPECT_EQ(Hyp2F1Spec(-3, -5, 2).last_index(), 3);
  EXPECT_EQ(Hyp2F1Spec(-4, 2, -6).last_index(), 4);
}

// Chu-Vandermonde: 2F1(-m, b; c; 1) = (c - b)^m / (c)^m with rising factorials.
TEST(Hyp2F1, ChuVandermondeRandomInstances) {
  std::mt19937_64 gen(20240611);
  std::uniform_int_distribution<long> m_dist(0, 12);
  std::uniform_int_distribution<long> bc_dist(-20, 20);
  int checked = 0;
  while (checked < 500) {
    const long m = m_dist(gen);
    const long b = bc_dist(gen);
    const long c = bc_dist(gen);
    bool bad = false;
    for (long i = 0; i < m; ++i) bad = bad || c + i == 0;
    if (bad || (b <= 0 && -b < m)) continue;  // keep -m the terminating parameter
    Rational num(1);
    Rational den(1);
    for (long i = 0; i < m; ++i) {
      num *= Rational(c - b + i);
      den *= Rational(c + i);
    }
    EXPECT_EQ(hyp2f1_terminating(Hyp2F1Spec(-m, b, c), Rational(1)), num / den)
        << m << " " << b << " " << c;
    ++checked;
  }
}

TEST(Hyp2F1, ComplexArgumentMatchesExactPolynomial) {
  // 2F1(-2, 3; 4; z) = 1 - 3z/2 + 3z^2/5.
  const std::complex<long double> z(0.3L, -0.7L);
  const auto got = hyp2f1_terminating(Hyp2F1Spec(-2, 3, 4), z);
  const auto want = 1.0L - 1.5L * z + 0.6L * z * z;
  EXPECT_NEAR(std::abs(got - want), 0.0, 1e-18);
}
