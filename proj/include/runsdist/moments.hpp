#pragma once

// Factorial, raw and central moments of Type I NB(k, r).
//
// Routes: the factorial-moment recurrence (Cut), partition sums over the
// coefficient families C, F, C~, F~, the pgf-derivative triple sum (Full),
// and plain summation over a pmf table.

#include "runsdist/core.hpp"
#include "runsdist/special.hpp"

namespace runsdist {

/// mu_(j) of the geometric distribution truncated at k: C_j p^k / (1 - p^k).
template <class T>
T truncated_geometric_factorial_moment(const RunParams<T>& params, int j);

/// C_j for any j >= 1. Exactly zero for j > k.
template <class T>
T coeff_C(const RunParams<T>& params, int j);

/// C_j through the terminating 2F1 form. Requires 1 <= j <= k.
template <class T>
T coeff_C_hyp(const RunParams<T>& params, int j);

/// F_j for any j >= 1.
template <class T>
T coeff_F(const RunParams<T>& params, int j);

/// F_j through the terminating 2F1 form. Requires 1 <= j <= k.
template <class T>
T coeff_F_hyp(const RunParams<T>& params, int j);

/// C~_j = xi_j / (q^j p^k) for Cut, F~_j = chi_j / (q^j p^k) for Full.
/// Throws OrderExceedsTable if the table does not reach order j.
template <class T>
T coeff_raw(const RunParams<T>& params, int j, IndexScheme scheme, const EulerianTable& table);

enum class CoefficientKind { C, F, CTilde, FTilde };

template <class T>
struct CoefficientFamily {
  CoefficientKind kind;
  std::vector<T> values;  // X_1 .. X_J

  int size() const noexcept { return static_cast<int>(values.size()); }
  const T& operator()(int j) const { return values.at(static_cast<std::size_t>(j - 1)); }
};

/// X_1 .. X_{j_max} of the given family.
template <class T>
CoefficientFamily<T> coefficient_family(const RunParams<T>& params, CoefficientKind kind, int j_max);

/// n! sum over n_1 + 2 n_2 + ... + n n_n = n of (r+s-1)_(s) prod (X_j/j!)^{n_j} / n_j!,
/// where s = n_1 + ... + n_n. Needs X_1 .. X_n.
template <class T>
T partition_sum(const CoefficientFamily<T>& family, int r, int n);

/// Cut-scheme factorial moments from the recurrence in C_j.
template <class T>
MomentSet<T> factorial_moments_recurrence(const RunParams<T>& params, int order_max);

/// Factorial moments by partition sums over C (Cut) or F (Full).
template <class T>
MomentSet<T> factorial_moments_partition(const RunParams<T>& params, int order_max, IndexScheme scheme);

/// Raw moments by partition sums over C~ (Cut) or F~ (Full).
template <class T>
MomentSet<T> raw_moments_partition(const RunParams<T>& params, int order_max, IndexScheme scheme);

/// M_n = sum_j S(n, j) M_(j). Scheme is kept.
template <class T>
MomentSet<T> factorial_to_raw(const MomentSet<T>& factorial);

/// Central moments from raw moments by binomial expansion about the mean.
template <class T>
MomentSet<T> raw_to_central(const MomentSet<T>& raw);

/// Central moments of orders 1..order_max (order_max <= 4) from the C~ or F~
/// family; both give the same result. Stored with the Full scheme tag.
template <class T>
MomentSet<T> central_moments(const RunParams<T>& params, int order_max,
                             IndexScheme family = IndexScheme::Full);

struct ShapeStats {
  double skewness;
  double excess_kurtosis;
};

template <class T>
ShapeStats skewness_kurtosis(const RunParams<T>& params);

/// r (1 - p^k) / (q p^k), minus rk in the Cut scheme.
template <class T>
T mean_closed_form(const RunParams<T>& params, IndexScheme scheme = IndexScheme::Full);

/// r [1/(q p^k)^2 - (2k+1)/(q p^k) - p/q^2].
template <class T>
T variance_closed_form(const RunParams<T>& params);

/// Last Full-scheme n of the window mean + sigmas * sd.
long summation_window_end(const RunParams<double>& params, double sigmas);

/// Moments of the table's index variable weighted by its values. Kind picks
/// falling factorials, powers, or powers about the table's own mean.
template <class T>
MomentSet<T> moments_by_summation(const PmfTable<T>& table, int order_max, MomentKind kind);

struct PgfMomentOptions {
  double tail_tol = 1e-12;  // relative to the moment of highest order
  long max_terms = 1000000;
  Execution execution = Execution::Serial;
};

/// Full-scheme factorial moments from the pgf-derivative triple sum, the
/// infinite outer sum cut off by a geometric tail estimate. Throws
/// NonConvergentTail when max_terms outer terms do not meet the estimate.
MomentSet<double> factorial_moments_pgf(const RunParams<double>& params, int order_max,
                                        const PgfMomentOptions& options = {});

/// Number of outer terms used by the last factorial_moments_pgf call on this thread.
long last_pgf_outer_terms();

}  // namespace runsdist
