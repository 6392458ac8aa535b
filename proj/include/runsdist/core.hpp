#pragma once

// Parameter types, trial-indexing bookkeeping and the shared result containers.

#include <string>
#include <string_view>
#include <vector>

#include "runsdist/errors.hpp"
#include "runsdist/numeric.hpp"

namespace runsdist {

/// (k, r, p) for NB(k, r): r runs of k successes, success probability p, q = 1 - p.
template <class T>
class RunParams {
 public:
  RunParams(int k, int r, T p) : k_(k), r_(r), p_(std::move(p)), q_(T(1) - p_) {
    if (k_ < 1) throw InvalidParams("k must be >= 1");
    if (r_ < 1) throw InvalidParams("r must be >= 1");
    if (!(p_ > 0) || !(p_ < 1)) throw InvalidParams("p must lie in (0, 1)");
  }

  int k() const noexcept { return k_; }
  int r() const noexcept { return r_; }
  long rk() const noexcept { return static_cast<long>(r_) * k_; }
  const T& p() const noexcept { return p_; }
  const T& q() const noexcept { return q_; }

  /// Same run shape with a different number of runs.
  RunParams with_r(int r) const { return RunParams(k_, r, p_); }

  template <class U>
  RunParams<U> as() const {
    return RunParams<U>(k_, r_, convert<U>(p_));
  }

 private:
  int k_;
  int r_;
  T p_;
  T q_;
};

/// Full counts trials from 1; Cut starts at the first attainable success, n_C = n_F - rk.
enum class IndexScheme { Full, Cut };

std::string_view to_string(IndexScheme s);

/// Shifts n by rk between schemes; identity when from == to.
long convert_index(long n, IndexScheme from, IndexScheme to, long rk);

template <class T>
long convert_index(long n, IndexScheme from, IndexScheme to, const RunParams<T>& params) {
  return convert_index(n, from, to, params.rk());
}

/// Run-counting variant. overlap = 0 is Type I, overlap = k - 1 is Type III,
/// overlap = -g is a gap of g ignored trials; type2 selects Muselli's Type II.
struct VariantSpec {
  int overlap = 0;
  bool type2 = false;

  static VariantSpec type_one() { return {}; }
  static VariantSpec type_two() { return {0, true}; }
  static VariantSpec overlapping(int ell) { return {ell, false}; }
  static VariantSpec gap(int g) { return {-g, false}; }

  bool is_gap() const noexcept { return overlap < 0; }
  int gap_length() const noexcept { return overlap < 0 ? -overlap : 0; }

  /// Throws InvalidParams unless overlap < k and type2 implies overlap == 0.
  void validate(int k) const;

  bool operator==(const VariantSpec&) const = default;
};

/// "type1", "type2", "overlap=L" or "gap=G".
std::string to_string(const VariantSpec& v);

/// A contiguous run of pmf values starting at n_min.
template <class T>
struct PmfTable {
  RunParams<T> params;
  IndexScheme scheme = IndexScheme::Full;
  VariantSpec variant;
  long n_min = 0;
  std::vector<T> values;

  long n_max() const noexcept { return n_min + static_cast<long>(values.size()) - 1; }
  bool covers(long n) const noexcept { return n >= n_min && n <= n_max(); }
  /// Zero outside the stored range.
  T at(long n) const { return covers(n) ? values[static_cast<std::size_t>(n - n_min)] : T(0); }
};

enum class MomentKind { Factorial, Raw, Central };

std::string_view to_string(MomentKind k);

/// Moments of orders 1..N; order 0 is the implicit 1.
template <class T>
struct MomentSet {
  MomentKind kind = MomentKind::Factorial;
  IndexScheme scheme = IndexScheme::Full;
  std::vector<T> values;

  int order_max() const noexcept { return static_cast<int>(values.size()); }
  T order(int n) const {
    if (n == 0) return T(1);
    return values.at(static_cast<std::size_t>(n - 1));
  }
};

/// Full-scheme factorial moments from Cut ones:
/// M^_(n) = sum_i C(n,i) M_(n-i) (rk)_(i).
template <class T>
MomentSet<T> shift_factorial_moments(const MomentSet<T>& cut_moments, const RunParams<T>& params);

/// Full-scheme raw moments from Cut ones: M^_n = sum_i C(n,i) M_{n-i} (rk)^i.
template <class T>
MomentSet<T> shift_raw_moments(const MomentSet<T>& cut_moments, const RunParams<T>& params);

/// Moments of Y + offset given those of Y. Kind must be Factorial or Raw; scheme is kept.
template <class T>
MomentSet<T> shift_moments_by(const MomentSet<T>& moments, long offset);

/// Selects the OpenMP kernel or its serial reference.
enum class Execution { Serial, Parallel };

/// Number mode chosen at the boundary: fractions drive exact arithmetic.
enum class NumberMode { Float, Exact };

struct ProbabilityArg {
  NumberMode mode = NumberMode::Float;
  Rational exact;  // the literal's exact value in either mode
  double value = 0.0;
};

/// "a/b" -> Exact, decimal -> Float. Throws InvalidParams if malformed or outside (0,1).
ProbabilityArg parse_probability(std::string_view text);

}  // namespace runsdist
