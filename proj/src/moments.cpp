#include "runsdist/moments.hpp"

#include <cmath>

namespace runsdist {

namespace {

template <class W>
W factorial_w(int n) {
  W out(1);
  for (int i = 2; i <= n; ++i) out *= W(i);
  return out;
}

template <class W>
W binom_w(long a, long b) {
  return from_integer<W>(binom(a, b));
}

template <class W>
void partition_descend(const std::vector<W>& y, int j, int rem, int s, const W& prod, int r,
                       W& acc) {
  if (rem == 0) {
    acc += falling(W(r + s - 1), s) * prod;
    return;
  }
  if (j == 0) return;
  W pw(1);
  W fact(1);
  for (int nj = 0; nj * j <= rem; ++nj) {
    if (nj > 0) {
      if (y[j] == 0) break;
      pw *= y[j];
      fact *= W(nj);
    }
    partition_descend(y, j - 1, rem - nj * j, s + nj, prod * pw / fact, r, acc);
  }
}

template <class W>
W partition_sum_w(const std::vector<W>& x, int r, int n) {
  // y[j] = X_j / j!, 1-based.
  std::vector<W> y(static_cast<std::size_t>(n + 1), W(0));
  W fact(1);
  for (int j = 1; j <= n; ++j) {
    fact *= W(j);
    y[j] = x[static_cast<std::size_t>(j - 1)] / fact;
  }
  W acc(0);
  partition_descend(y, n, n, 0, W(1), r, acc);
  return factorial_w<W>(n) * acc;
}

template <class W>
W coeff_C_w(const RunParams<W>& pr, int j) {
  const int k = pr.k();
  if (j > k) return W(0);
  const W& p = pr.p();
  const W& q = pr.q();
  const W pk = ipow(p, k);
  W tail(0);
  for (int i = 1; i <= j - 1; ++i) tail += binom_w<W>(k, i) * ipow(p, j - i - 1) * ipow(q, i);
  const W bracket = ipow(p, j - 1) * (W(1) - pk) - pk * tail;
  return factorial_w<W>(j) / (ipow(q, j) * pk) * bracket - falling(W(k), j);
}

template <class W>
W coeff_F_w(const RunParams<W>& pr, int j) {
  const int k = pr.k();
  const W& p = pr.p();
  const W& q = pr.q();
  const W pk = ipow(p, k);
  W tail(0);
  for (int i = 1; i <= j - 1; ++i) {
    W term = binom_w<W>(k + i - 1, i) * ipow(p, j - i - 1) * ipow(q, i);
    tail += (i % 2 == 0) ? term : W(-term);
  }
  const W bracket = ipow(p, j - 1) * (W(1) - pk) + tail;
  return factorial_w<W>(j) / (ipow(q, j) * pk) * bracket;
}

template <class W>
W coeff_raw_w(const RunParams<W>& pr, int j, IndexScheme scheme, const EulerianTable& table) {
  const int k = pr.k();
  const W& p = pr.p();
  const W& q = pr.q();
  const W pk = ipow(p, k);
  const W kq = W(k) * q;
  W acc = (W(1) - pk) * table.eval(j, p);
  if (scheme == IndexScheme::Cut) {
    W tail(0);
    for (int i = 1; i <= j; ++i) tail += binom_w<W>(j, i) * ipow(kq, i) * table.eval(j - i, p);
    acc -= pk * tail;
  } else {
    for (int i = 1; i <= j - 1; ++i) {
      W term = binom_w<W>(j, i) * ipow(kq, i) * table.eval(j - i, p);
      acc += (i % 2 == 0) ? term : W(-term);
    }
  }
  return acc / (ipow(q, j) * pk);
}

template <class W>
std::vector<W> family_w(const RunParams<W>& pr, CoefficientKind kind, int j_max) {
  std::vector<W> out;
  out.reserve(static_cast<std::size_t>(std::max(0, j_max)));
  if (kind == CoefficientKind::CTilde || kind == CoefficientKind::FTilde) {
    const EulerianTable table(j_max);
    const IndexScheme s = kind == CoefficientKind::CTilde ? IndexScheme::Cut : IndexScheme::Full;
    for (int j = 1; j <= j_max; ++j) out.push_back(coeff_raw_w(pr, j, s, table));
  } else {
    for (int j = 1; j <= j_max; ++j) {
      out.push_back(kind == CoefficientKind::C ? coeff_C_w(pr, j) : coeff_F_w(pr, j));
    }
  }
  return out;
}

template <class T>
MomentSet<T> to_set(MomentKind kind, IndexScheme scheme, const std::vector<working_t<T>>& v) {
  MomentSet<T> out{kind, scheme, {}};
  out.values.reserve(v.size());
  for (const auto& x : v) out.values.push_back(convert<T>(x));
  return out;
}

template <class T>
std::vector<working_t<T>> widen(const std::vector<T>& v) {
  std::vector<working_t<T>> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(convert<working_t<T>>(x));
  return out;
}

void require_order(int order_max) {
  if (order_max < 1) throw InvalidParams("moment order must be >= 1");
}

// Central moments 1..N from the raw family, in the working type.
template <class W>
std::vector<W> central_w(const RunParams<W>& pr, int order_max, IndexScheme family) {
  if (order_max > 4) throw InvalidParams("central moments are available up to order 4");
  require_order(order_max);
  const auto x = family_w(pr, family == IndexScheme::Cut ? CoefficientKind::CTilde
                                                         : CoefficientKind::FTilde,
                          4);
  const W r(pr.r());
  const W& x1 = x[0];
  const W& x2 = x[1];
  const W& x3 = x[2];
  const W& x4 = x[3];
  const W var = r * (x1 * x1 + x2);
  const W m3 = r * (W(2) * x1 * x1 * x1 + W(3) * x1 * x2 + x3);
  const W m4 = W(3) * var * var +
               r * (W(6) * x1 * x1 * x1 * x1 + W(12) * x1 * x1 * x2 + W(3) * x2 * x2 +
                    W(4) * x1 * x3 + x4);
  std::vector<W> all{W(0), var, m3, m4};
  all.resize(static_cast<std::size_t>(order_max));
  return all;
}

}  // namespace

template <class T>
T truncated_geometric_factorial_moment(const RunParams<T>& params, int j) {
  using W = working_t<T>;
  const auto pr = params.template as<W>();
  const W pk = ipow(pr.p(), pr.k());
  return convert<T>(coeff_C_w(pr, j) * pk / (W(1) - pk));
}

template <class T>
T coeff_C(const RunParams<T>& params, int j) {
  if (j < 1) throw InvalidParams("coefficient index must be >= 1");
  return convert<T>(coeff_C_w(params.template as<working_t<T>>(), j));
}

template <class T>
T coeff_F(const RunParams<T>& params, int j) {
  if (j < 1) throw InvalidParams("coefficient index must be >= 1");
  return convert<T>(coeff_F_w(params.template as<working_t<T>>(), j));
}

template <class T>
T coeff_C_hyp(const RunParams<T>& params, int j) {
  using W = working_t<T>;
  const int k = params.k();
  if (j < 1 || j > k) throw InvalidParams("hypergeometric C_j needs 1 <= j <= k");
  const auto pr = params.template as<W>();
  const W& p = pr.p();
  const W& q = pr.q();
  const W pk = ipow(p, k);
  const W f = hyp2f1_terminating(Hyp2F1Spec(1 - j, 1, k - j + 2), W(-p / q));
  const W bracket = ipow(p, j - 1) - binom_w<W>(k, j - 1) * pk * ipow(q, j - 1) * f;
  return convert<T>(factorial_w<W>(j) / (ipow(q, j) * pk) * bracket - falling(W(k), j));
}

template <class T>
T coeff_F_hyp(const RunParams<T>& params, int j) {
  using W = working_t<T>;
  const int k = params.k();
  if (j < 1 || j > k) throw InvalidParams("hypergeometric F_j needs 1 <= j <= k");
  const auto pr = params.template as<W>();
  const W& p = pr.p();
  const W& q = pr.q();
  const W pk = ipow(p, k);
  const W f = hyp2f1_terminating(Hyp2F1Spec(1 - j, 1, 2 - j - k), W(-p / q));
  W second = binom_w<W>(k + j - 2, j - 1) * ipow(q, j - 1) * f;
  if ((j - 1) % 2 != 0) second = -second;
  const W bracket = second - ipow(p, k + j - 1);
  return convert<T>(factorial_w<W>(j) / (ipow(q, j) * pk) * bracket);
}

template <class T>
T coeff_raw(const RunParams<T>& params, int j, IndexScheme scheme, const EulerianTable& table) {
  if (j < 1) throw InvalidParams("coefficient index must be >= 1");
  return convert<T>(coeff_raw_w(params.template as<working_t<T>>(), j, scheme, table));
}

template <class T>
CoefficientFamily<T> coefficient_family(const RunParams<T>& params, CoefficientKind kind, int j_max) {
  CoefficientFamily<T> out{kind, {}};
  for (const auto& x : family_w(params.template as<working_t<T>>(), kind, j_max)) {
    out.values.push_back(convert<T>(x));
  }
  return out;
}

template <class T>
T partition_sum(const CoefficientFamily<T>& family, int r, int n) {
  if (n < 1) throw InvalidParams("partition order must be >= 1");
  if (family.size() < n) throw OrderExceedsTable("coefficient family shorter than partition order");
  std::vector<working_t<T>> x = widen(family.values);
  return convert<T>(partition_sum_w(x, r, n));
}

template <class T>
MomentSet<T> factorial_moments_recurrence(const RunParams<T>& params, int order_max) {
  using W = working_t<T>;
  require_order(order_max);
  const auto pr = params.template as<W>();
  const int k = pr.k();
  const int r = pr.r();
  std::vector<W> c;
  for (int j = 1; j <= k; ++j) c.push_back(coeff_C_w(pr, j));
  std::vector<W> m{W(1)};
  for (int n = 1; n <= order_max; ++n) {
    W acc(0);
    for (int j = 1; j <= std::min(n, k); ++j) {
      acc += binom_w<W>(n, j) * W(n + r * j - j) * c[j - 1] * m[n - j];
    }
    m.push_back(acc / W(n));
  }
  m.erase(m.begin());
  return to_set<T>(MomentKind::Factorial, IndexScheme::Cut, m);
}

template <class T>
MomentSet<T> factorial_moments_partition(const RunParams<T>& params, int order_max, IndexScheme scheme) {
  using W = working_t<T>;
  require_order(order_max);
  const auto pr = params.template as<W>();
  const auto x = family_w(pr, scheme == IndexScheme::Cut ? CoefficientKind::C : CoefficientKind::F,
                          order_max);
  std::vector<W> m;
  for (int n = 1; n <= order_max; ++n) m.push_back(partition_sum_w(x, pr.r(), n));
  return to_set<T>(MomentKind::Factorial, scheme, m);
}

template <class T>
MomentSet<T> raw_moments_partition(const RunParams<T>& params, int order_max, IndexScheme scheme) {
  using W = working_t<T>;
  require_order(order_max);
  const auto pr = params.template as<W>();
  const auto x = family_w(
      pr, scheme == IndexScheme::Cut ? CoefficientKind::CTilde : CoefficientKind::FTilde, order_max);
  std::vector<W> m;
  for (int n = 1; n <= order_max; ++n) m.push_back(partition_sum_w(x, pr.r(), n));
  return to_set<T>(MomentKind::Raw, scheme, m);
}

template <class T>
MomentSet<T> factorial_to_raw(const MomentSet<T>& factorial) {
  using W = working_t<T>;
  if (factorial.kind != MomentKind::Factorial) throw OrderMismatch("expected factorial moments");
  std::vector<W> out;
  for (int n = 1; n <= factorial.order_max(); ++n) {
    W acc(0);
    for (int j = 1; j <= n; ++j) {
      acc += from_integer<W>(stirling2(n, j)) * convert<W>(factorial.order(j));
    }
    out.push_back(acc);
  }
  return to_set<T>(MomentKind::Raw, factorial.scheme, out);
}

template <class T>
MomentSet<T> raw_to_central(const MomentSet<T>& raw) {
  using W = working_t<T>;
  if (raw.kind != MomentKind::Raw) throw OrderMismatch("expected raw moments");
  const W mu = convert<W>(raw.order(1));
  std::vector<W> out;
  for (int n = 1; n <= raw.order_max(); ++n) {
    W acc(0);
    for (int i = 0; i <= n; ++i) {
      acc += binom_w<W>(n, i) * convert<W>(raw.order(i)) * ipow(W(-mu), n - i);
    }
    out.push_back(acc);
  }
  out[0] = W(0);
  return to_set<T>(MomentKind::Central, IndexScheme::Full, out);
}

template <class T>
MomentSet<T> central_moments(const RunParams<T>& params, int order_max, IndexScheme family) {
  const auto v = central_w(params.template as<working_t<T>>(), order_max, family);
  return to_set<T>(MomentKind::Central, IndexScheme::Full, v);
}

template <class T>
ShapeStats skewness_kurtosis(const RunParams<T>& params) {
  using W = working_t<T>;
  const auto c = central_w(params.template as<W>(), 4, IndexScheme::Full);
  const W var = c[1];
  const W m3 = c[2];
  const W m4 = c[3];
  const double sd = std::sqrt(convert<double>(var));
  const double skew = convert<double>(m3 / var) / sd;
  const double exk = convert<double>((m4 - W(3) * var * var) / (var * var));
  return {skew, exk};
}

template <class T>
T mean_closed_form(const RunParams<T>& params, IndexScheme scheme) {
  const T pk = ipow(params.p(), params.k());
  T mean = T(params.r()) * (T(1) - pk) / (params.q() * pk);
  if (scheme == IndexScheme::Cut) mean -= T(params.rk());
  return mean;
}

template <class T>
T variance_closed_form(const RunParams<T>& params) {
  const T qpk = params.q() * ipow(params.p(), params.k());
  const T& q = params.q();
  return T(params.r()) * (T(1) / (qpk * qpk) - T(2 * params.k() + 1) / qpk - params.p() / (q * q));
}

long summation_window_end(const RunParams<double>& params, double sigmas) {
  const double mean = mean_closed_form(params);
  const double sd = std::sqrt(variance_closed_form(params));
  return static_cast<long>(std::ceil(mean + sigmas * sd));
}

template <class T>
MomentSet<T> moments_by_summation(const PmfTable<T>& table, int order_max, MomentKind kind) {
  using W = working_t<T>;
  require_order(order_max);
  W shift(0);
  if (kind == MomentKind::Central) {
    CompensatedSum<W> mean;
    for (long n = table.n_min; n <= table.n_max(); ++n) {
      mean.add(W(n) * convert<W>(table.at(n)));
    }
    shift = mean.value();
  }
  std::vector<W> out;
  for (int i = 1; i <= order_max; ++i) {
    CompensatedSum<W> acc;
    for (long n = table.n_min; n <= table.n_max(); ++n) {
      const W x = W(n) - shift;
      const W w = kind == MomentKind::Factorial ? falling(W(n), i) : ipow(x, i);
      acc.add(w * convert<W>(table.at(n)));
    }
    out.push_back(acc.value());
  }
  if (kind == MomentKind::Central) out[0] = W(0);
  return to_set<T>(kind, table.scheme, out);
}

#define RUNSDIST_INSTANTIATE(T)                                                                  \
  template T truncated_geometric_factorial_moment(const RunParams<T>&, int);                     \
  template T coeff_C(const RunParams<T>&, int);                                                  \
  template T coeff_C_hyp(const RunParams<T>&, int);                                              \
  template T coeff_F(const RunParams<T>&, int);                                                  \
  template T coeff_F_hyp(const RunParams<T>&, int);                                              \
  template T coeff_raw(const RunParams<T>&, int, IndexScheme, const EulerianTable&);             \
  template CoefficientFamily<T> coefficient_family(const RunParams<T>&, CoefficientKind, int);   \
  template T partition_sum(const CoefficientFamily<T>&, int, int);                               \
  template MomentSet<T> factorial_moments_recurrence(const RunParams<T>&, int);                  \
  template MomentSet<T> factorial_moments_partition(const RunParams<T>&, int, IndexScheme);      \
  template MomentSet<T> raw_moments_partition(const RunParams<T>&, int, IndexScheme);            \
  template MomentSet<T> factorial_to_raw(const MomentSet<T>&);                                   \
  template MomentSet<T> raw_to_central(const MomentSet<T>&);                                     \
  template MomentSet<T> central_moments(const RunParams<T>&, int, IndexScheme);                  \
  template ShapeStats skewness_kurtosis(const RunParams<T>&);                                    \
  template T mean_closed_form(const RunParams<T>&, IndexScheme);                                 \
  template T variance_closed_form(const RunParams<T>&);                                          \
  template MomentSet<T> moments_by_summation(const PmfTable<T>&, int, MomentKind);

RUNSDIST_INSTANTIATE(double)
RUNSDIST_INSTANTIATE(Quad)
RUNSDIST_INSTANTIATE(Rational)

#undef RUNSDIST_INSTANTIATE

}  // namespace runsdist
