#include <gtest/gtest.h>

#include "runsdist/catalog.hpp"
#include "runsdist/oracle.hpp"
#include "runsdist/pmf.hpp"

using namespace runsdist;

namespace {

RunParams<Rational> exact(int k, int r, long num, long den) { return {k, r, Rational(num) / den}; }

}  // namespace

TEST(Pmf, GeometricOfOrderTwoAtOneHalf) {
  const auto params = exact(2, 1, 1, 2);
  const auto t = pmf_recurrence_pg(params, 5);
  EXPECT_EQ(t.n_min, 2);
  EXPECT_EQ(t.at(2), Rational(1, 4));
  EXPECT_EQ(t.at(3), Rational(1, 8));
  EXPECT_EQ(t.at(4), Rational(1, 8));
  EXPECT_EQ(t.at(5), Rational(3, 32));
}

TEST(Pmf, FirstSupportPoint) {
  // P(rk) = p^{rk} in Full, the same value at n = 0 in Cut.
  const auto params = exact(3, 2, 2, 5);
  const Rational want = ipow(Rational(2, 5), 6);
  EXPECT_EQ(pmf_recurrence_pg(params, 6).at(6), want);
  EXPECT_EQ(pmf_recurrence_ch(params, 0).at(0), want);
  EXPECT_EQ(pmf_fullsum_ch(params, 0), want);
  EXPECT_EQ(pmf_nested_sum(params, 6, IndexScheme::Full), want);
  EXPECT_EQ(pmf_nested_sum(params, 0, IndexScheme::Cut), want);
  EXPECT_EQ(pmf_hyp(params, 6, IndexScheme::Full), want);
  EXPECT_EQ(pmf_pgf_expansion(params, 6), want);
  EXPECT_EQ(pmf_nested_sum(params, 5, IndexScheme::Full), 0);
}

TEST(Pmf, ExactEnginesMatchDpOracle) {
  const std::vector<std::string> engines = {"recurrence-pg", "recurrence-ch", "fullsum-ch",
                                            "nested-sum",    "hyp-sum",       "pgf-expansion",
                                            "pgf-series"};
  for (int k = 1; k <= 4; ++k) {
    for (int r = 1; r <= 3; ++r) {
      for (auto [a, b] : {std::pair{1, 10}, {1, 2}, {3, 4}}) {
        const auto params = exact(k, r, a, b);
        const auto dp = dp_waiting_time_pmf(params, CountingSemantics::type_one(), 30);
        for (const auto& e : engines) {
          const auto t = evaluate_range(e, params, VariantSpec::type_one(), IndexScheme::Full, 1, 30);
          for (long n = 1; n <= 30; ++n) {
            ASSERT_EQ(t.at(n), dp.at(n)) << e << " k=" << k << " r=" << r << " n=" << n;
          }
        }
      }
    }
  }
}

TEST(Pmf, SchemesDifferByRk) {
  const auto params = exact(3, 2, 2, 5);
  for (long n = 0; n <= 20; ++n) {
    EXPECT_EQ(pmf_nested_sum(params, n, IndexScheme::Cut), pmf_nested_sum(params, n + 6, IndexScheme::Full));
    EXPECT_EQ(pmf_hyp(params, n, IndexScheme::Cut), pmf_hyp(params, n + 6, IndexScheme::Full));
  }
  EXPECT_EQ(convert_index(10, IndexScheme::Full, IndexScheme::Cut, params), 4);
  EXPECT_EQ(convert_index(4, IndexScheme::Cut, IndexScheme::Full, params), 10);
}

TEST(Pmf, NestedSumTermBound) {
  for (int k = 1; k <= 5; ++k) {
    for (int r = 1; r <= 4; ++r) {
      const RunParams<double> params(k, r, 0.5);
      for (long n = 1; n <= r * k + 60; ++n) {
        long terms = 0;
        pmf_nested_sum(params, n, IndexScheme::Full, &terms);
        EXPECT_LE(terms, (r + 1) * (1 + (n - 1) / k));
      }
    }
  }
}

TEST(Muselli, GeometricCaseAndBoundary) {
  const auto params = exact(1, 1, 1, 2);
  EXPECT_EQ(pmf_muselli(params, 1, MuselliForm::Alt), Rational(1, 2));
  EXPECT_EQ(pmf_muselli(params, 1, MuselliForm::Original), Rational(1, 2));
  // First support cell r(k+1) - 1 carries p^{rk} q^{r-1}.
  const auto p2 = exact(2, 3, 1, 3);
  const long n0 = muselli_first_support(2, 3);
  EXPECT_EQ(n0, 8);
  EXPECT_EQ(pmf_muselli(p2, n0, MuselliForm::Original), ipow(Rational(1, 3), 6) * ipow(Rational(2, 3), 2));
  EXPECT_EQ(pmf_muselli(p2, n0 - 1, MuselliForm::Alt), 0);
}

TEST(Muselli, MatchesDpAndBruteForce) {
  for (int k = 1; k <= 3; ++k) {
    for (int r = 1; r <= 3; ++r) {
      const auto params = exact(k, r, 2, 5);
      const auto dp = dp_waiting_time_pmf(params, CountingSemantics::type_two(), 25);
      for (long n = 1; n <= 25; ++n) {
        ASSERT_EQ(pmf_muselli(params, n, MuselliForm::Original), dp.at(n)) << k << r << n;
        ASSERT_EQ(pmf_muselli(params, n, MuselliForm::Alt), dp.at(n)) << k << r << n;
      }
    }
  }
}

TEST(Muselli, CountsMatchBruteForceAndSumToOne) {
  for (int k = 1; k <= 3; ++k) {
    const auto params = exact(k, 1, 3, 7);
    for (long n = 1; n <= 14; ++n) {
      const auto bf = brute_force_run_counts(params, n);
      Rational total(0);
      for (int c = 0; c <= n; ++c) {
        const Rational want = c < static_cast<int>(bf.size()) ? bf[static_cast<std::size_t>(c)] : Rational(0);
        const Rational o = counts_muselli(params, n, c, MuselliForm::Original);
        ASSERT_EQ(o, want) << k << " " << n << " " << c;
        ASSERT_EQ(counts_muselli(params, n, c, MuselliForm::Alt), want);
        total += o;
      }
      EXPECT_EQ(total, 1);
    }
  }
}

TEST(Engines, NamesRoundTrip) {
  for (PmfEngine e : all_engines()) {
    EXPECT_EQ(parse_engine(engine_name(e)), e);
    EXPECT_EQ(engine_convention(e), BinomConvention::ZeroOnNegativeTop);
  }
  EXPECT_FALSE(parse_engine("nope").has_value());
}

TEST(Catalog, VariantSupport) {
  EXPECT_TRUE(engine_supports("nested-sum", VariantSpec::gap(2)));
  EXPECT_FALSE(engine_supports("nested-sum", VariantSpec::overlapping(1)));
  EXPECT_TRUE(engine_supports("root-based", VariantSpec::overlapping(1)));
  EXPECT_FALSE(engine_supports("muselli-alt", VariantSpec::type_one()));
  EXPECT_TRUE(engine_supports("dp-oracle", VariantSpec::type_two()));
  EXPECT_FALSE(engine_supports_exact("root-based"));
  EXPECT_THROW(evaluate_range("root-based", exact(2, 1, 1, 2), VariantSpec::type_one(), IndexScheme::Full, 1, 5),
               InvalidParams);
}

TEST(Catalog, ParallelMatchesSerial) {
  const auto params = exact(3, 3, 1, 3);
  for (const char* e : {"fullsum-ch", "nested-sum", "hyp-sum", "pgf-expansion"}) {
    const auto s = evaluate_range(e, params, VariantSpec::type_one(), IndexScheme::Full, 1, 60,
                                  {Execution::Serial, -1});
    const auto p = evaluate_range(e, params, VariantSpec::type_one(), IndexScheme::Full, 1, 60,
                                  {Execution::Parallel, -1});
    EXPECT_EQ(s.values, p.values) << e;
  }
}

TEST(Catalog, GapIsShiftedTypeOne) {
  const auto params = exact(2, 3, 1, 2);
  const auto base = evaluate_range("nested-sum", params, VariantSpec::type_one(), IndexScheme::Full, 1, 40);
  const auto gap = evaluate_range("nested-sum", params, VariantSpec::gap(2), IndexScheme::Full, 1, 40);
  const auto dp = dp_waiting_time_pmf(params, CountingSemantics::gap(2), 40);
  for (long n = 1; n <= 40; ++n) {
    EXPECT_EQ(gap.at(n), base.at(n - 4));
    EXPECT_EQ(gap.at(n), dp.at(n));
  }
}
