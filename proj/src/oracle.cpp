#include "runsdist/oracle.hpp"

#include <cmath>

#include "runsdist/special.hpp"

namespace runsdist {

namespace {

// State machine shared by the DP and the simulator.
struct Machine {
  int k;
  int r;
  CountingSemantics sem;

  int cooldown_max() const { return sem.mode == CountingSemantics::Mode::Gap ? sem.param : 0; }
  // Type II keeps progress at k while a long run continues.
  int progress_max() const {
    return sem.mode == CountingSemantics::Mode::AtLeastOneFailureBetween ? k : k - 1;
  }

  struct State {
    int progress;
    int runs;
    int cooldown;
  };

  // Returns the next state; runs == r means absorbed.
  State step(State s, bool success) const {
    if (s.cooldown > 0) {
      --s.cooldown;
      return s;
    }
    if (!success) {
      s.progress = 0;
      return s;
    }
    if (sem.mode == CountingSemantics::Mode::AtLeastOneFailureBetween) {
      if (s.progress < k) {
        ++s.progress;
        if (s.progress == k) ++s.runs;
      }
      return s;
    }
    ++s.progress;
    if (s.progress == k) {
      ++s.runs;
      s.progress = sem.mode == CountingSemantics::Mode::Overlap ? sem.param : 0;
      if (sem.mode == CountingSemantics::Mode::Gap) s.cooldown = sem.param;
    }
    return s;
  }
};

// Waiting time of the r-th run in a fixed sequence, found by checking each
// window of k trials against the previous counted run; 0 if none.
long scan_waiting_time(const std::vector<bool>& seq, int k, int r, const CountingSemantics& sem) {
  const long n = static_cast<long>(seq.size());
  long last = 0;  // trial at which the previous counted run ended
  int runs = 0;
  long streak = 0;
  for (long i = 1; i <= n; ++i) {
    streak = seq[i - 1] ? streak + 1 : 0;
    if (streak < k) continue;
    bool counts = false;
    switch (sem.mode) {
      case CountingSemantics::Mode::NonOverlapping:
        counts = runs == 0 ? i >= k : i - k >= last;
        break;
      case CountingSemantics::Mode::Overlap:
        counts = runs == 0 ? i >= k : i - k >= last - sem.param;
        break;
      case CountingSemantics::Mode::Gap:
        counts = runs == 0 ? i >= k : i - k >= last + sem.param;
        break;
      case CountingSemantics::Mode::AtLeastOneFailureBetween:
        counts = streak == k;
        break;
    }
    if (counts) {
      ++runs;
      last = i;
      if (runs == r) return i;
    }
  }
  return 0;
}

}  // namespace

CountingSemantics CountingSemantics::from_variant(const VariantSpec& v) {
  if (v.type2) return type_two();
  if (v.overlap > 0) return overlap(v.overlap);
  if (v.overlap < 0) return gap(-v.overlap);
  return type_one();
}

void CountingSemantics::validate(int k) const {
  if (mode == Mode::Overlap && (param < 1 || param > k - 1)) {
    throw InvalidParams("overlap semantics need 1 <= ell <= k-1");
  }
  if (mode == Mode::Gap && param < 1) throw InvalidParams("gap semantics need g >= 1");
}

template <class T>
DpResult<T> dp_waiting_time(const RunParams<T>& params, CountingSemantics semantics, long n_max) {
  semantics.validate(params.k());
  const Machine m{params.k(), params.r(), semantics};
  const int np = m.progress_max() + 1;
  const int nc = m.cooldown_max() + 1;
  const int nr = params.r();
  auto index = [&](int progress, int runs, int cooldown) {
    return (static_cast<std::size_t>(runs) * np + progress) * nc + cooldown;
  };
  const std::size_t states = static_cast<std::size_t>(np) * nr * nc;
  std::vector<T> cur(states, T(0));
  std::vector<T> next(states, T(0));
  cur[index(0, 0, 0)] = T(1);

  DpResult<T> out{{params, IndexScheme::Full, VariantSpec::type_one(), 1, {}}, T(0)};
  switch (semantics.mode) {
    case CountingSemantics::Mode::AtLeastOneFailureBetween: out.table.variant = VariantSpec::type_two(); break;
    case CountingSemantics::Mode::Overlap: out.table.variant = VariantSpec::overlapping(semantics.param); break;
    case CountingSemantics::Mode::Gap: out.table.variant = VariantSpec::gap(semantics.param); break;
    case CountingSemantics::Mode::NonOverlapping: break;
  }
  const T& p = params.p();
  const T& q = params.q();
  for (long n = 1; n <= n_max; ++n) {
    std::fill(next.begin(), next.end(), T(0));
    T absorbed(0);
    for (int runs = 0; runs < nr; ++runs) {
      for (int pr = 0; pr < np; ++pr) {
        for (int cd = 0; cd < nc; ++cd) {
          const T& w = cur[index(pr, runs, cd)];
          if (w == 0) continue;
          for (bool success : {true, false}) {
            const auto s = m.step({pr, runs, cd}, success);
            const T mass = w * (success ? p : q);
            if (s.runs == nr) {
              absorbed += mass;
            } else {
              next[index(s.progress, s.runs, s.cooldown)] += mass;
            }
          }
        }
      }
    }
    out.table.values.push_back(absorbed);
    std::swap(cur, next);
  }
  T rest(0);
  for (const auto& w : cur) rest += w;
  out.remaining = rest;
  return out;
}

template <class T>
PmfTable<T> brute_force_pmf(const RunParams<T>& params, CountingSemantics semantics, long n_max) {
  semantics.validate(params.k());
  if (n_max > kBruteForceMax) throw InvalidParams("brute force is limited to n <= 22");
  PmfTable<T> table{params, IndexScheme::Full, VariantSpec::type_one(), 1, {}};
  switch (semantics.mode) {
    case CountingSemantics::Mode::AtLeastOneFailureBetween: table.variant = VariantSpec::type_two(); break;
    case CountingSemantics::Mode::Overlap: table.variant = VariantSpec::overlapping(semantics.param); break;
    case CountingSemantics::Mode::Gap: table.variant = VariantSpec::gap(semantics.param); break;
    case CountingSemantics::Mode::NonOverlapping: break;
  }
  for (long n = 1; n <= n_max; ++n) {
    // count[s] = sequences of length n with s successes whose r-th run ends at n.
    std::vector<long> count(static_cast<std::size_t>(n + 1), 0);
    std::vector<bool> seq(static_cast<std::size_t>(n));
    for (unsigned long bits = 0; bits < (1UL << n); ++bits) {
      int successes = 0;
      for (long i = 0; i < n; ++i) {
        seq[i] = (bits >> i) & 1UL;
        successes += seq[i] ? 1 : 0;
      }
      if (scan_waiting_time(seq, params.k(), params.r(), semantics) == n) ++count[successes];
    }
    T total(0);
    for (long s = 0; s <= n; ++s) {
      if (count[s] != 0) total += T(count[s]) * ipow(params.p(), s) * ipow(params.q(), n - s);
    }
    table.values.push_back(total);
  }
  return table;
}

template <class T>
std::vector<T> brute_force_run_counts(const RunParams<T>& params, long n) {
  if (n < 1 || n > kBruteForceMax) throw InvalidParams("brute force is limited to 1 <= n <= 22");
  const int k = params.k();
  std::vector<T> dist(static_cast<std::size_t>(n + 1), T(0));
  for (unsigned long bits = 0; bits < (1UL << n); ++bits) {
    int runs = 0;
    int successes = 0;
    long streak = 0;
    for (long i = 0; i < n; ++i) {
      const bool s = (bits >> i) & 1UL;
      successes += s ? 1 : 0;
      streak = s ? streak + 1 : 0;
      if (streak == k) ++runs;
    }
    dist[static_cast<std::size_t>(runs)] += ipow(params.p(), successes) * ipow(params.q(), n - successes);
  }
  while (dist.size() > 1 && dist.back() == 0) dist.pop_back();
  return dist;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::derive(std::uint64_t seed, std::uint64_t shard) {
  SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (shard + 1)));
  return g.next();
}

namespace {

std::map<long, long> run_shard(const Machine& m, double p, long samples, std::uint64_t seed) {
  SplitMix64 gen(seed);
  std::map<long, long> hist;
  for (long s = 0; s < samples; ++s) {
    Machine::State st{0, 0, 0};
    long n = 0;
    while (st.runs < m.r) {
      st = m.step(st, gen.uniform() < p);
      ++n;
    }
    ++hist[n];
  }
  return hist;
}

}  // namespace

MonteCarloResult monte_carlo(const RunParams<double>& params, CountingSemantics semantics,
                             long samples, std::uint64_t seed, Execution execution) {
  semantics.validate(params.k());
  if (samples < 1) throw InvalidParams("samples must be >= 1");
  const Machine m{params.k(), params.r(), semantics};
  std::vector<std::map<long, long>> shards(kMonteCarloShards);
  auto shard_size = [&](int s) {
    return samples / kMonteCarloShards + (s < samples % kMonteCarloShards ? 1 : 0);
  };
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < kMonteCarloShards; ++s) {
      shards[s] = run_shard(m, params.p(), shard_size(s), SplitMix64::derive(seed, s));
    }
  } else {
    for (int s = 0; s < kMonteCarloShards; ++s) {
      shards[s] = run_shard(m, params.p(), shard_size(s), SplitMix64::derive(seed, s));
    }
  }

  MonteCarloResult out;
  out.samples = samples;
  out.seed = seed;
  for (const auto& h : shards) {
    for (const auto& [n, c] : h) out.histogram[n] += c;
  }
  // Moments from the merged histogram, so the order of shards cannot matter.
  long double sum = 0;
  for (const auto& [n, c] : out.histogram) sum += static_cast<long double>(n) * c;
  const long double mean = sum / samples;
  long double m2 = 0;
  long double m3 = 0;
  for (const auto& [n, c] : out.histogram) {
    const long double d = n - mean;
    m2 += d * d * c;
    m3 += d * d * d * c;
  }
  out.mean = static_cast<double>(mean);
  out.variance = samples > 1 ? static_cast<double>(m2 / (samples - 1)) : 0.0;
  const long double pop_var = m2 / samples;
  out.skewness = pop_var > 0 ? static_cast<double>((m3 / samples) / std::pow(pop_var, 1.5L)) : 0.0;
  return out;
}

#define RUNSDIST_INSTANTIATE(T)                                                              \
  template DpResult<T> dp_waiting_time(const RunParams<T>&, CountingSemantics, long);        \
  template PmfTable<T> brute_force_pmf(const RunParams<T>&, CountingSemantics, long);        \
  template std::vector<T> brute_force_run_counts(const RunParams<T>&, long);

RUNSDIST_INSTANTIATE(double)
RUNSDIST_INSTANTIATE(Quad)
RUNSDIST_INSTANTIATE(Rational)

#undef RUNSDIST_INSTANTIATE

}  // namespace runsdist
