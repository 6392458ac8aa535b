#include <gtest/gtest.h>

#include "runsdist/moments.hpp"
#include "runsdist/oracle.hpp"
#include "runsdist/roots.hpp"

using namespace runsdist;

TEST(Roots, InvariantsHold) {
  for (int k = 1; k <= 10; ++k) {
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const RootSystem s = solve_roots(RunParams<double>(k, 1, p));
      ASSERT_EQ(static_cast<int>(s.roots.size()), k);
      EXPECT_LE(s.residual, 1e-13);
      EXPECT_LE(s.identity_error, 1e-12);
      EXPECT_GT(s.min_separation, 1e-8);
      for (const auto& z : s.roots) EXPECT_LT(std::abs(z), 1.0L);
    }
  }
}

TEST(Roots, GeometricPgf) {
  const RunParams<double> params(2, 1, 0.5);
  // G(1) = 1; G'(1) = 6 by a central difference.
  EXPECT_NEAR(std::abs(geometric_pgf(params, 1.0) - 1.0), 0.0, 1e-15);
  const double h = 1e-5;
  const double d = (geometric_pgf(params, 1.0 + h).real() - geometric_pgf(params, 1.0 - h).real()) / (2 * h);
  EXPECT_NEAR(d, 6.0, 1e-6);
  // s = 1/p is removable.
  EXPECT_NO_THROW(geometric_pgf(params, 2.0));
  const auto g = geometric_pmf_recurrence(RunParams<Rational>(2, 1, Rational(1, 2)), 5);
  EXPECT_EQ(g.at(5), Rational(3, 32));
}

TEST(Roots, OverlapSeriesMatchesDp) {
  for (int k = 2; k <= 4; ++k) {
    for (int ell = 0; ell < k; ++ell) {
      const RunParams<Rational> params(k, 3, Rational(2, 5));
      const auto series = overlap_pmf_table(params, ell, 30);
      const auto dp = dp_waiting_time_pmf(params,
                                          ell == 0 ? CountingSemantics::type_one() : CountingSemantics::overlap(ell), 30);
      for (long n = 1; n <= 30; ++n) ASSERT_EQ(series.at(n), dp.at(n)) << k << " " << ell << " " << n;
      EXPECT_EQ(overlap_first_support(k, 3, ell), 3L * k - 2L * ell);
    }
  }
}

TEST(Roots, RootPmfAndTermCount) {
  const RunParams<double> params(3, 2, 0.4);
  for (int ell : {0, 1, 2}) {
    const auto coeffs = make_root_coefficients(params, ell);
    const auto dp = dp_waiting_time_pmf(params.as<Quad>(),
                                        ell == 0 ? CountingSemantics::type_one() : CountingSemantics::overlap(ell), 80);
    for (long n = coeffs.n_first; n <= 80; ++n) {
      long terms = 0;
      double imag = 0;
      const double v = pmf_root_based(coeffs, n, &terms, &imag);
      EXPECT_NEAR(v, static_cast<double>(dp.at(n)), 1e-14);
      EXPECT_EQ(terms, 6);
      EXPECT_LT(std::abs(imag), 1e-14);
    }
  }
}

TEST(Roots, TypeThreeMomentsMatchDpSummation) {
  const RunParams<double> params(2, 2, 0.5);
  const auto root = factorial_moments_root(make_root_coefficients(params, 1), 3);
  const auto res = dp_waiting_time(params, CountingSemantics::overlap(1), 4000);
  const auto sum = moments_by_summation(res.table, 3, MomentKind::Factorial);
  for (int n = 1; n <= 3; ++n) EXPECT_NEAR(root.order(n) / sum.order(n), 1.0, 1e-10);
}

TEST(Gap, ShiftIdentities) {
  const RunParams<Rational> params(2, 3, Rational(1, 3));
  const auto base = overlap_pmf_table(params, 0, 60);
  const auto gap = gap_pmf_table(base, 2);
  for (long n = 1; n <= 60; ++n) EXPECT_EQ(gap.at(n), gap_pmf(params, 2, n, base));
  EXPECT_EQ(gap.at(10), base.at(6));
  const auto m = gap_moments(params, 2, 1, MomentKind::Raw);
  EXPECT_EQ(m.order(1), mean_closed_form(params) + 4);
}
