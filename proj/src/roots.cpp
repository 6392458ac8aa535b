#include "runsdist/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

#include "runsdist/moments.hpp"
#include "runsdist/special.hpp"

namespace runsdist {

namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using MatrixCL = Eigen::Matrix<ComplexL, Eigen::Dynamic, Eigen::Dynamic>;
using VectorCL = Eigen::Matrix<ComplexL, Eigen::Dynamic, 1>;

constexpr double kSeparationMin = 1e-8;
constexpr double kPolyResidualMax = 1e-13;
constexpr double kIdentityMax = 1e-12;
constexpr double kRecoveryMax = 1e-10;
// Subdominant roots of size ~p inflate the estimate to ~1e20 on ordinary
// inputs without harming the fit; the held-out window is the decisive check.
constexpr long double kConditionMax = 1e24L;

// Coefficients of the auxiliary polynomial, highest degree first.
std::vector<long double> aux_coeffs(int k, long double p) {
  const long double q = 1.0L - p;
  std::vector<long double> c{1.0L};
  long double pw = 1.0L;
  for (int i = 0; i < k; ++i) {
    c.push_back(-q * pw);
    pw *= p;
  }
  return c;
}

ComplexL horner(const std::vector<long double>& c, ComplexL z, ComplexL* derivative) {
  ComplexL v = 0;
  ComplexL d = 0;
  for (long double ci : c) {
    d = d * z + v;
    v = v * z + ci;
  }
  if (derivative) *derivative = d;
  return v;
}

long double binom_ld(long n, long m) {
  if (m < 0 || n < m) return 0.0L;
  long double out = 1.0L;
  for (long t = 1; t <= m; ++t) out = out * static_cast<long double>(n - m + t) / t;
  return out;
}

template <class T>
std::vector<T> series_mul(const std::vector<T>& a, const std::vector<T>& b, std::size_t len) {
  std::vector<T> out(len, T(0));
  for (std::size_t i = 0; i < std::min(len, a.size()); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <class T>
std::vector<T> series_pow(const std::vector<T>& a, int e, std::size_t len) {
  std::vector<T> out(len, T(0));
  out[0] = T(1);
  for (int t = 0; t < e; ++t) out = series_mul(out, a, len);
  return out;
}

// Long division a / b with b[0] != 0.
template <class T>
std::vector<T> series_div(const std::vector<T>& a, const std::vector<T>& b, std::size_t len) {
  std::vector<T> out(len, T(0));
  for (std::size_t n = 0; n < len; ++n) {
    T acc = n < a.size() ? a[n] : T(0);
    for (std::size_t i = 1; i <= n && i < b.size(); ++i) acc -= b[i] * out[n - i];
    out[n] = acc / b[0];
  }
  return out;
}

// Coefficients of phi(s, run) up to s^{len-1}; phi(s, 0) = 1.
template <class T>
std::vector<T> geometric_series(const RunParams<T>& params, int run, std::size_t len) {
  std::vector<T> out(len, T(0));
  if (run == 0) {
    out[0] = T(1);
    return out;
  }
  const RunParams<T> pr(run, 1, params.p());
  const auto table = geometric_pmf_recurrence(pr, static_cast<long>(len) - 1);
  for (long n = table.n_min; n <= table.n_max(); ++n) out[static_cast<std::size_t>(n)] = table.at(n);
  return out;
}

long double to_ld(double x) { return x; }
long double to_ld(const Quad& x) { return static_cast<long double>(x); }
long double to_ld(const Rational& x) { return x.convert_to<long double>(); }

}  // namespace

std::complex<double> geometric_pgf(const RunParams<double>& params, std::complex<double> s) {
  if (s == std::complex<double>(1.0, 0.0)) return 1.0;
  const int k = params.k();
  const double p = params.p();
  const double q = params.q();
  const double pk = std::pow(p, k);
  const std::complex<double> sk = std::pow(s, k);
  const std::complex<double> den = 1.0 - s + q * pk * sk * s;
  const std::complex<double> num_factor = 1.0 - p * s;
  const double scale = 1.0 + std::abs(sk * s);
  if (std::abs(den) > 1e-13 * scale) return pk * sk * num_factor / den;
  if (std::abs(num_factor) <= 1e-8) {
    // s = 1/p: use (ps)^k / (1 - q s sum_{i<k} (ps)^i).
    std::complex<double> acc = 0.0;
    std::complex<double> ps_pow = 1.0;
    for (int i = 0; i < k; ++i) {
      acc += ps_pow;
      ps_pow *= p * s;
    }
    return ps_pow / (1.0 - q * s * acc);
  }
  throw PoleAtS("geometric pgf has a pole at the requested s");
}

template <class T>
PmfTable<T> geometric_pmf_recurrence(const RunParams<T>& params, long n_max) {
  const int k = params.k();
  PmfTable<T> table{params.with_r(1), IndexScheme::Full, VariantSpec::type_one(), k, {}};
  if (n_max < k) return table;
  std::vector<T> pw{T(1)};
  for (int i = 1; i < k; ++i) pw.push_back(pw.back() * params.p());
  table.values.push_back(ipow(params.p(), k));
  for (long n = k + 1; n <= n_max; ++n) {
    T acc(0);
    for (int i = 0; i < k; ++i) acc += pw[i] * table.at(n - 1 - i);
    table.values.push_back(params.q() * acc);
  }
  return table;
}

long overlap_first_support(int k, int r, int ell) {
  return static_cast<long>(r) * k - static_cast<long>(r - 1) * ell;
}

template <class T>
std::vector<T> overlap_pgf_series(const RunParams<T>& params, int ell, long len) {
  const int k = params.k();
  const int r = params.r();
  if (ell < 0 || ell >= k) throw InvalidParams("overlap must satisfy 0 <= ell <= k-1");
  if (len < 1) return {};
  const std::size_t shift = static_cast<std::size_t>(ell) * static_cast<std::size_t>(r - 1);
  const std::size_t full = static_cast<std::size_t>(len) + shift;
  const auto num = series_pow(geometric_series(params, k, full), r, full);
  const auto den = series_pow(geometric_series(params, ell, full), r - 1, full);
  std::vector<T> a(num.begin() + static_cast<long>(shift), num.end());
  std::vector<T> b(den.begin() + static_cast<long>(shift), den.end());
  return series_div(a, b, static_cast<std::size_t>(len));
}

template <class T>
PmfTable<T> overlap_pmf_table(const RunParams<T>& params, int ell, long n_max) {
  const long first = overlap_first_support(params.k(), params.r(), ell);
  PmfTable<T> table{params, IndexScheme::Full, VariantSpec::overlapping(ell), first, {}};
  if (n_max < first) return table;
  const auto series = overlap_pgf_series(params, ell, n_max + 1);
  table.values.assign(series.begin() + first, series.end());
  return table;
}

ComplexL auxiliary_polynomial(int k, long double p, ComplexL z) {
  return horner(aux_coeffs(k, p), z, nullptr);
}

RootSystem solve_roots(const RunParams<double>& params) {
  const int k = params.k();
  const long double p = params.p();
  const auto c = aux_coeffs(k, p);

  MatrixL companion = MatrixL::Zero(k, k);
  for (int i = 0; i < k; ++i) companion(0, i) = -c[static_cast<std::size_t>(i + 1)];
  for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0L;
  Eigen::EigenSolver<MatrixL> solver(companion, false);
  if (solver.info() != Eigen::Success) throw RootToleranceExceeded("companion eigenvalues failed");

  RootSystem sys{k, params.p(), {}, 0.0, 0.0, std::numeric_limits<double>::infinity()};
  const long double target = std::pow(p, k) * (1.0L - p);
  for (int i = 0; i < k; ++i) {
    ComplexL z = solver.eigenvalues()(i);
    for (int it = 0; it < 60; ++it) {
      ComplexL d;
      const ComplexL v = horner(c, z, &d);
      if (d == ComplexL(0)) break;
      const ComplexL step = v / d;
      z -= step;
      if (std::abs(step) <= 4 * std::numeric_limits<long double>::epsilon() * std::abs(z)) break;
    }
    sys.roots.push_back(z);
    sys.residual = std::max(sys.residual, static_cast<double>(std::abs(horner(c, z, nullptr))));
    const ComplexL ident = ipow(z, k) * (1.0L - z) - target;
    sys.identity_error = std::max(sys.identity_error, static_cast<double>(std::abs(ident)));
  }
  for (int i = 0; i < k; ++i) {
    if (!(std::abs(sys.roots[i]) < 1.0L)) {
      throw RootToleranceExceeded("root outside the unit disc");
    }
    for (int j = i + 1; j < k; ++j) {
      sys.min_separation =
          std::min(sys.min_separation, static_cast<double>(std::abs(sys.roots[i] - sys.roots[j])));
    }
  }
  if (sys.min_separation <= kSeparationMin) throw RootToleranceExceeded("roots are not distinct");
  if (sys.residual > kPolyResidualMax) throw RootToleranceExceeded("polynomial residual too large");
  if (sys.identity_error > kIdentityMax) throw RootToleranceExceeded("root identity violated");
  return sys;
}

template <class T>
RootCoefficients recover_coefficients(const RootSystem& system, int r, int ell,
                                      const PmfTable<T>& reference) {
  const int k = system.k;
  if (r < 1) throw InvalidParams("r must be >= 1");
  if (ell < 0 || ell >= k) throw InvalidParams("overlap must satisfy 0 <= ell <= k-1");
  const long n0 = overlap_first_support(k, r, ell);
  const int size = k * r;
  if (!reference.covers(n0) || !reference.covers(n0 + 2L * size - 1)) {
    throw InvalidParams("reference pmf must cover 2kr support points");
  }

  auto basis = [&](long n, int j, int m) {
    return binom_ld(n - 1, m - 1) * ipow(system.roots[static_cast<std::size_t>(j)], n - m);
  };

  MatrixCL a(size, size);
  VectorCL f(size);
  for (int row = 0; row < size; ++row) {
    const long n = n0 + row;
    for (int j = 0; j < k; ++j) {
      for (int m = 1; m <= r; ++m) a(row, j * r + m - 1) = basis(n, j, m);
    }
    f(row) = to_ld(reference.at(n));
  }

  // Row then column equilibration.
  Eigen::Matrix<long double, Eigen::Dynamic, 1> rs(size);
  Eigen::Matrix<long double, Eigen::Dynamic, 1> cs(size);
  for (int i = 0; i < size; ++i) {
    rs(i) = 1.0L / a.row(i).cwiseAbs().maxCoeff();
    a.row(i) *= rs(i);
    f(i) *= rs(i);
  }
  for (int i = 0; i < size; ++i) {
    cs(i) = 1.0L / a.col(i).cwiseAbs().maxCoeff();
    a.col(i) *= cs(i);
  }

  Eigen::JacobiSVD<MatrixCL> svd(a);
  const auto& sv = svd.singularValues();
  const long double cond = sv(0) / sv(size - 1);
  if (!(cond < kConditionMax)) {
    throw IllConditionedSystem("coefficient system condition estimate " +
                               std::to_string(static_cast<double>(cond)));
  }
  VectorCL y = a.fullPivLu().solve(f);

  RootCoefficients out{system, r, ell, n0, {}, static_cast<double>(cond), 0.0, 0.0};
  out.a.resize(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) out.a[static_cast<std::size_t>(i)] = y(i) * cs(i);

  for (long n = n0; n < n0 + 2L * size; ++n) {
    const double err = std::abs(pmf_root_based(out, n) - static_cast<double>(to_ld(reference.at(n))));
    double& slot = n < n0 + size ? out.recovery_residual : out.validation_residual;
    slot = std::max(slot, err);
  }
  if (out.recovery_residual > kRecoveryMax || out.validation_residual > kRecoveryMax) {
    throw ValidationFailed("root coefficients miss the reference pmf (fit " +
                           std::to_string(out.recovery_residual) + ", held-out " +
                           std::to_string(out.validation_residual) + ")");
  }
  return out;
}

RootCoefficients make_root_coefficients(const RunParams<double>& params, int ell) {
  const RootSystem system = solve_roots(params);
  const auto wide = params.as<Quad>();
  const long n0 = overlap_first_support(params.k(), params.r(), ell);
  const auto reference = overlap_pmf_table(wide, ell, n0 + 2L * params.k() * params.r());
  return recover_coefficients(system, params.r(), ell, reference);
}

double pmf_root_based(const RootCoefficients& coeffs, long n, long* term_count, double* imag_part) {
  if (term_count) *term_count = 0;
  if (imag_part) *imag_part = 0.0;
  if (n < coeffs.n_first) return 0.0;
  const int k = coeffs.system.k;
  ComplexL sum = 0;
  for (int j = 0; j < k; ++j) {
    const ComplexL lambda = coeffs.system.roots[static_cast<std::size_t>(j)];
    for (int m = 1; m <= coeffs.r; ++m) {
      sum += binom_ld(n - 1, m - 1) * coeffs.coeff(j, m) * ipow(lambda, n - m);
      if (term_count) ++*term_count;
    }
  }
  if (imag_part) *imag_part = static_cast<double>(sum.imag());
  return static_cast<double>(sum.real());
}

MomentSet<double> factorial_moments_root(const RootCoefficients& coeffs, int i_max) {
  if (i_max < 1) throw InvalidParams("moment order must be >= 1");
  const int k = coeffs.system.k;
  const long double p = coeffs.system.p;
  const long double qpk = (1.0L - p) * std::pow(p, k);
  MomentSet<double> out{MomentKind::Factorial, IndexScheme::Full, {}};
  long double fact = 1.0L;
  for (int i = 1; i <= i_max; ++i) {
    fact *= i;
    ComplexL acc = 0;
    for (int j = 0; j < k; ++j) {
      const ComplexL lambda = coeffs.system.roots[static_cast<std::size_t>(j)];
      for (int m = 1; m <= coeffs.r; ++m) {
        const ComplexL f = hyp2f1_terminating(Hyp2F1Spec(1 - m, 1 - i, 2), ComplexL(1.0L) / lambda);
        acc += coeffs.coeff(j, m) * static_cast<long double>(m) *
               ipow(lambda, static_cast<long>(i + m) * k + i - 1) / std::pow(qpk, m) * f;
      }
    }
    out.values.push_back(static_cast<double>((fact / std::pow(qpk, i) * acc).real()));
  }
  return out;
}

template <class T>
T gap_pmf(const RunParams<T>& params, int g, long n, const PmfTable<T>& base) {
  if (g < 1) throw InvalidParams("gap must be >= 1");
  return base.at(n - static_cast<long>(params.r() - 1) * g);
}

template <class T>
PmfTable<T> gap_pmf_table(const PmfTable<T>& base, int g) {
  if (g < 1) throw InvalidParams("gap must be >= 1");
  PmfTable<T> out = base;
  out.n_min += static_cast<long>(base.params.r() - 1) * g;
  out.variant = VariantSpec::gap(g);
  return out;
}

template <class T>
MomentSet<T> gap_moments(const RunParams<T>& params, int g, int order_max, MomentKind kind) {
  if (g < 1) throw InvalidParams("gap must be >= 1");
  MomentSet<T> base;
  if (kind == MomentKind::Factorial) {
    base = factorial_moments_partition(params, order_max, IndexScheme::Full);
  } else if (kind == MomentKind::Raw) {
    base = raw_moments_partition(params, order_max, IndexScheme::Full);
  } else {
    throw OrderMismatch("gap moments are factorial or raw");
  }
  return shift_moments_by(base, static_cast<long>(params.r() - 1) * g);
}

#define RUNSDIST_INSTANTIATE(T)                                                             \
  template PmfTable<T> geometric_pmf_recurrence(const RunParams<T>&, long);                 \
  template std::vector<T> overlap_pgf_series(const RunParams<T>&, int, long);               \
  template PmfTable<T> overlap_pmf_table(const RunParams<T>&, int, long);                   \
  template RootCoefficients recover_coefficients(const RootSystem&, int, int,               \
                                                 const PmfTable<T>&);                       \
  template T gap_pmf(const RunParams<T>&, int, long, const PmfTable<T>&);                   \
  template PmfTable<T> gap_pmf_table(const PmfTable<T>&, int);                              \
  template MomentSet<T> gap_moments(const RunParams<T>&, int, int, MomentKind);

RUNSDIST_INSTANTIATE(double)
RUNSDIST_INSTANTIATE(Quad)
RUNSDIST_INSTANTIATE(Rational)

#undef RUNSDIST_INSTANTIATE

}  // namespace runsdist
