#include <gtest/gtest.h>

#include "runsdist/oracle.hpp"

using namespace runsdist;

namespace {

RunParams<Rational> half(int k, int r) { return {k, r, Rational(1, 2)}; }

const std::vector<CountingSemantics>& semantics_for(int k) {
  static std::vector<CountingSemantics> out;
  out = {CountingSemantics::type_one(), CountingSemantics::type_two(), CountingSemantics::gap(1),
         CountingSemantics::gap(2)};
  for (int ell = 1; ell < k; ++ell) out.push_back(CountingSemantics::overlap(ell));
  return out;
}

}  // namespace

TEST(Dp, TypeOneGeometric) {
  const auto t = dp_waiting_time_pmf(half(2, 1), CountingSemantics::type_one(), 5);
  EXPECT_EQ(t.at(1), 0);
  EXPECT_EQ(t.at(2), Rational(1, 4));
  EXPECT_EQ(t.at(3), Rational(1, 8));
  EXPECT_EQ(t.at(4), Rational(1, 8));
  EXPECT_EQ(t.at(5), Rational(3, 32));
}

TEST(Dp, GapOfTwoAtSix) {
  // SSFFSS, SSSFSS, SSFSSS and SSSSSS.
  EXPECT_EQ(dp_waiting_time_pmf(half(2, 2), CountingSemantics::gap(2), 6).at(6), Rational(1, 16));
  EXPECT_EQ(brute_force_pmf(half(2, 2), CountingSemantics::gap(2), 6).at(6), Rational(1, 16));
}

TEST(Dp, TypeThreeAtThree) {
  EXPECT_EQ(dp_waiting_time_pmf(half(2, 2), CountingSemantics::overlap(1), 3).at(3), Rational(1, 8));
  EXPECT_EQ(brute_force_pmf(half(2, 2), CountingSemantics::overlap(1), 3).at(3), Rational(1, 8));
}

TEST(Dp, SixSuccessesHoldTwoRunsOfThree) {
  // The only way to finish two runs of three by trial 6 is SSSSSS.
  EXPECT_EQ(dp_waiting_time_pmf(half(3, 2), CountingSemantics::type_one(), 6).at(6), Rational(1, 64));
  EXPECT_EQ(dp_waiting_time_pmf(half(3, 1), CountingSemantics::type_one(), 3).at(3), Rational(1, 8));
}

TEST(Dp, DeficitEqualsUnabsorbedMass) {
  const RunParams<Rational> params(3, 2, Rational(2, 5));
  for (const auto& sem : semantics_for(3)) {
    const auto res = dp_waiting_time(params, sem, 40);
    Rational total(0);
    for (const auto& v : res.table.values) {
      EXPECT_GE(v, 0);
      total += v;
    }
    EXPECT_EQ(total + res.remaining, 1);
    EXPECT_GT(res.remaining, 0);
  }
}

TEST(Dp, MatchesBruteForceUpToSixteen) {
  for (int k = 1; k <= 3; ++k) {
    for (int r = 1; r <= 3; ++r) {
      const RunParams<Rational> params(k, r, Rational(1, 3));
      for (const auto& sem : semantics_for(k)) {
        const auto dp = dp_waiting_time_pmf(params, sem, 16);
        const auto bf = brute_force_pmf(params, sem, 16);
        EXPECT_EQ(dp.values, bf.values) << k << " " << r << " mode " << static_cast<int>(sem.mode);
      }
    }
  }
}

TEST(Dp, RejectsBadSemantics) {
  EXPECT_THROW(dp_waiting_time_pmf(half(2, 1), CountingSemantics::overlap(2), 5), InvalidParams);
  EXPECT_THROW(dp_waiting_time_pmf(half(2, 1), CountingSemantics::gap(0), 5), InvalidParams);
  EXPECT_THROW(brute_force_pmf(half(2, 1), CountingSemantics::type_one(), 23), InvalidParams);
}

TEST(SplitMix, KnownStream) {
  // Reference outputs of SplitMix64 seeded with 0.
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(g.next(), 0x06C45D188009454FULL);
}

TEST(MonteCarlo, GeometricMeanAndDeterminism) {
  const RunParams<double> params(2, 1, 0.5);
  const auto a = monte_carlo(params, CountingSemantics::type_one(), 1000000, 42, Execution::Parallel);
  const auto b = monte_carlo(params, CountingSemantics::type_one(), 1000000, 42, Execution::Serial);
  EXPECT_NEAR(a.mean, 6.0, 4.0 * std::sqrt(22.0 / 1e6));
  EXPECT_EQ(a.histogram, b.histogram);
  EXPECT_EQ(a.mean, b.mean);
  long total = 0;
  for (const auto& [n, c] : a.histogram) total += c;
  EXPECT_EQ(total, 1000000);
  EXPECT_EQ(a.histogram.begin()->first, 2);
  EXPECT_THROW(monte_carlo(params, CountingSemantics::type_one(), 0, 1), InvalidParams);
}
