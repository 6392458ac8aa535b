#pragma once

// Ground truth for the engines: forward DP over run-counting states, brute
// force over every Bernoulli sequence, and Monte Carlo simulation.

#include <cstdint>
#include <map>
#include <vector>

#include "runsdist/core.hpp"

namespace runsdist {

struct CountingSemantics {
  enum class Mode { NonOverlapping, AtLeastOneFailureBetween, Overlap, Gap };

  Mode mode = Mode::NonOverlapping;
  int param = 0;  // ell for Overlap, g for Gap

  static CountingSemantics type_one() { return {}; }
  static CountingSemantics type_two() { return {Mode::AtLeastOneFailureBetween, 0}; }
  static CountingSemantics overlap(int ell) { return {Mode::Overlap, ell}; }
  static CountingSemantics gap(int g) { return {Mode::Gap, g}; }

  /// Type I, II, overlap (ell = k-1 is Type III) or gap, matching a VariantSpec.
  static CountingSemantics from_variant(const VariantSpec& v);

  /// Overlap needs 1 <= ell <= k-1, Gap needs g >= 1.
  void validate(int k) const;
};

template <class T>
struct DpResult {
  PmfTable<T> table;  // Full scheme, n in [1, n_max]
  T remaining;        // mass not yet absorbed after n_max trials
};

/// Forward DP over (run progress, runs completed, cooldown). Exact for Rational.
template <class T>
DpResult<T> dp_waiting_time(const RunParams<T>& params, CountingSemantics semantics, long n_max);

template <class T>
PmfTable<T> dp_waiting_time_pmf(const RunParams<T>& params, CountingSemantics semantics, long n_max) {
  return dp_waiting_time(params, semantics, n_max).table;
}

constexpr long kBruteForceMax = 22;

/// Enumerates all 2^n sequences for each n <= n_max (n_max <= 22) and finds the
/// trial completing the r-th run by scanning windows of k trials.
template <class T>
PmfTable<T> brute_force_pmf(const RunParams<T>& params, CountingSemantics semantics, long n_max);

/// Distribution of the number of runs of length >= k in n trials (n <= 22),
/// indexed by that number.
template <class T>
std::vector<T> brute_force_run_counts(const RunParams<T>& params, long n);

/// SplitMix64 stream. Seeding, the step constants and the 53-bit uniform
/// mapping are fixed, so a seed reproduces on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Seed of shard s derived from a base seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t shard);

 private:
  std::uint64_t state_;
};

struct MonteCarloResult {
  long samples = 0;
  std::uint64_t seed = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double skewness = 0;
  std::map<long, long> histogram;  // waiting time -> count
};

/// Samples are split over a fixed number of shards, each with its own derived
/// seed, and merged in shard order, so the result does not depend on threads.
MonteCarloResult monte_carlo(const RunParams<double>& params, CountingSemantics semantics,
                             long samples, std::uint64_t seed,
                             Execution execution = Execution::Serial);

constexpr int kMonteCarloShards = 64;

}  // namespace runsdist
