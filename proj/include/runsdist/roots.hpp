#pragma once

// Root-based representation of the pmf for runs with overlap ell, and the gap
// variant obtained by shifting the ell = 0 distribution.

#include <complex>
#include <vector>

#include "runsdist/core.hpp"

namespace runsdist {

using ComplexL = std::complex<long double>;

/// p^k s^k (1 - ps) / (1 - s + q p^k s^{k+1}). The removable point s = 1/p is
/// evaluated through the cancelled form. Throws PoleAtS at a genuine pole.
std::complex<double> geometric_pgf(const RunParams<double>& params, std::complex<double> s);

/// Geometric distribution of order k (r is ignored), Full scheme, n in [k, n_max].
template <class T>
PmfTable<T> geometric_pmf_recurrence(const RunParams<T>& params, long n_max);

/// Coefficients s^0 .. s^{len-1} of phi(s, k)^r / phi(s, ell)^{r-1}, by power-series
/// multiplication and long division. phi(s, 0) is the constant 1.
template <class T>
std::vector<T> overlap_pgf_series(const RunParams<T>& params, int ell, long len);

/// First n with positive probability for overlap ell: rk - (r-1) ell.
long overlap_first_support(int k, int r, int ell);

/// Reference pmf for overlap ell (0 <= ell <= k-1), Full scheme, from the series.
template <class T>
PmfTable<T> overlap_pmf_table(const RunParams<T>& params, int ell, long n_max);

struct RootSystem {
  int k;
  double p;
  std::vector<ComplexL> roots;
  double residual;       // max |A(lambda)|
  double identity_error; // max |lambda^k (1 - lambda) - p^k q|
  double min_separation;
};

/// Evaluates z^k - q sum_{i<k} p^i z^{k-1-i}.
ComplexL auxiliary_polynomial(int k, long double p, ComplexL z);

/// All k roots: companion-matrix eigenvalues polished by Newton steps.
/// Throws RootToleranceExceeded if a root invariant fails afterwards.
RootSystem solve_roots(const RunParams<double>& params);

struct RootCoefficients {
  RootSystem system;
  int r;
  int ell;
  long n_first;                    // first support point
  std::vector<ComplexL> a;         // a_{jm} at index j * r + (m - 1)
  double condition;                // of the equilibrated fitting matrix
  double recovery_residual;        // max abs error on the fitting window
  double validation_residual;      // max abs error on the held-out window

  const ComplexL& coeff(int j, int m) const { return a[static_cast<std::size_t>(j * r + m - 1)]; }
};

/// Solves f(n) = sum_{j,m} C(n-1, m-1) a_{jm} lambda_j^{n-m} on the first kr
/// support points of the reference and checks the next kr points.
/// Throws IllConditionedSystem or ValidationFailed.
template <class T>
RootCoefficients recover_coefficients(const RootSystem& system, int r, int ell,
                                      const PmfTable<T>& reference);

/// recover_coefficients against an overlap_pmf_table reference computed in binary128.
RootCoefficients make_root_coefficients(const RunParams<double>& params, int ell);

/// Root-power sum at n. term_count receives the number of (j, m) terms, and
/// imag_part the imaginary residue of the sum.
double pmf_root_based(const RootCoefficients& coeffs, long n, long* term_count = nullptr,
                      double* imag_part = nullptr);

/// Full-scheme factorial moments from the root representation; no sum over n.
MomentSet<double> factorial_moments_root(const RootCoefficients& coeffs, int i_max);

/// f_{r,k,-g}(n) = f_{r,k,0}(n - (r-1) g). base must be the ell = 0 Full pmf.
template <class T>
T gap_pmf(const RunParams<T>& params, int g, long n, const PmfTable<T>& base);

/// The whole base table shifted by (r-1) g and tagged with the gap variant.
template <class T>
PmfTable<T> gap_pmf_table(const PmfTable<T>& base, int g);

/// Factorial or raw moments of the gap variant from the ell = 0 Full moments.
template <class T>
MomentSet<T> gap_moments(const RunParams<T>& params, int g, int order_max, MomentKind kind);

}  // namespace runsdist
