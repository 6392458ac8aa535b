#include "runsdist/pmf.hpp"

#include <algorithm>
#include <array>
#include <memory>

namespace runsdist {

namespace {

constexpr std::array kEngines{
    PmfEngine::RecurrencePG,    PmfEngine::RecurrenceCh,          PmfEngine::FullSumCh,
    PmfEngine::NestedSum,       PmfEngine::HypSum,                PmfEngine::PgfExpansion,
    PmfEngine::RootBased,       PmfEngine::MuselliOriginal,       PmfEngine::MuselliAlt,
    PmfEngine::MuselliCountsOriginal, PmfEngine::MuselliCountsAlt,
};

template <class W>
W binom_w(long a, long b) {
  return from_integer<W>(binom(a, b));
}

// Powers x^0 .. x^n.
template <class W>
std::vector<W> powers(const W& x, long n) {
  std::vector<W> out(static_cast<std::size_t>(std::max(0L, n) + 1));
  out[0] = W(1);
  for (long i = 1; i <= n; ++i) out[i] = out[i - 1] * x;
  return out;
}

// Rows of Pascal's triangle shared by repeated full-sum calls on one thread.
const PascalTriangle& pascal_rows(long max_top) {
  thread_local std::unique_ptr<PascalTriangle> cache;
  if (!cache || cache->max_top() < max_top) {
    cache = std::make_unique<PascalTriangle>(std::max(max_top, 2 * (cache ? cache->max_top() : 64)));
  }
  return *cache;
}

template <class T>
T boundary_value(const RunParams<T>& params) {
  return ipow(params.p(), params.rk());
}

}  // namespace

std::string_view engine_name(PmfEngine e) {
  switch (e) {
    case PmfEngine::RecurrencePG: return "recurrence-pg";
    case PmfEngine::RecurrenceCh: return "recurrence-ch";
    case PmfEngine::FullSumCh: return "fullsum-ch";
    case PmfEngine::NestedSum: return "nested-sum";
    case PmfEngine::HypSum: return "hyp-sum";
    case PmfEngine::PgfExpansion: return "pgf-expansion";
    case PmfEngine::RootBased: return "root-based";
    case PmfEngine::MuselliOriginal: return "muselli-original";
    case PmfEngine::MuselliAlt: return "muselli-alt";
    case PmfEngine::MuselliCountsOriginal: return "muselli-counts-original";
    case PmfEngine::MuselliCountsAlt: return "muselli-counts-alt";
  }
  return "?";
}

std::optional<PmfEngine> parse_engine(std::string_view name) {
  for (PmfEngine e : kEngines) {
    if (engine_name(e) == name) return e;
  }
  return std::nullopt;
}

std::span<const PmfEngine> all_engines() { return kEngines; }

BinomConvention engine_convention(PmfEngine) { return BinomConvention::ZeroOnNegativeTop; }

long muselli_first_support(int k, int r) { return static_cast<long>(r) * (k + 1) - 1; }

template <class T>
PmfTable<T> pmf_recurrence_pg(const RunParams<T>& params, long n_max) {
  const long rk = params.rk();
  const int k = params.k();
  const int r = params.r();
  PmfTable<T> table{params, IndexScheme::Full, VariantSpec::type_one(), rk, {}};
  if (n_max < rk) return table;
  const std::vector<T> pw = powers(params.p(), k);
  const T ratio = params.q() / params.p();
  table.values.reserve(static_cast<std::size_t>(n_max - rk + 1));
  table.values.push_back(boundary_value(params));
  for (long n = rk + 1; n <= n_max; ++n) {
    T acc(0);
    for (int j = 1; j <= k; ++j) {
      const long prev = n - j;
      if (prev < rk) break;
      acc += T(n - rk + static_cast<long>(j) * (r - 1)) * pw[j] * table.values[prev - rk];
    }
    table.values.push_back(ratio * acc / T(n - rk));
  }
  return table;
}

template <class T>
PmfTable<T> pmf_recurrence_ch(const RunParams<T>& params, long n_max) {
  const int k = params.k();
  const int r = params.r();
  PmfTable<T> table{params, IndexScheme::Cut, VariantSpec::type_one(), 0, {}};
  if (n_max < 0) return table;
  const std::vector<T> pw = powers(params.p(), k);
  const T ratio = params.q() / params.p();
  table.values.reserve(static_cast<std::size_t>(n_max + 1));
  table.values.push_back(boundary_value(params));
  for (long n = 1; n <= n_max; ++n) {
    T acc(0);
    const long top = std::min<long>(n, k);
    for (long j = 1; j <= top; ++j) {
      acc += T(n + r * j - j) * pw[j] * table.values[n - j];
    }
    table.values.push_back(ratio * acc / T(n));
  }
  return table;
}

template <class T>
T pmf_fullsum_ch(const RunParams<T>& params, long n) {
  if (n < 0) return T(0);
  if (n == 0) return boundary_value(params);
  const int k = params.k();
  const int r = params.r();
  const PascalTriangle& pas = pascal_rows(n + r);
  const std::vector<T> pp = powers(params.p(), n + params.rk());
  const std::vector<T> qp = powers(params.q(), n);
  T total(0);
  for (long i = 0; i <= n; ++i) {
    BigInt bracket = 0;
    for (long j = 0; j <= i && n - j * k - 1 >= i - 1; ++j) {
      const BigInt term = pas(i, j) * pas(n - j * k - 1, i - 1);
      if (j % 2 == 0) {
        bracket += term;
      } else {
        bracket -= term;
      }
    }
    if (bracket == 0) continue;
    total += from_integer<T>(pas(r + i - 1, r - 1) * bracket) * qp[i] * pp[n + params.rk() - i];
  }
  return total;
}

template <class T>
T pmf_nested_sum(const RunParams<T>& params, long n, IndexScheme scheme, long* term_count) {
  using W = working_t<T>;
  const long nc = convert_index(n, scheme, IndexScheme::Cut, params);
  if (term_count) *term_count = 0;
  if (nc < 0) return T(0);
  if (nc == 0) return boundary_value(params);
  const int k = params.k();
  const int r = params.r();
  const W p = convert<W>(params.p());
  const W q = convert<W>(params.q());
  const std::vector<W> qp = powers(q, r);
  const W pkq = ipow(p, k) * q;
  CompensatedSum<W> outer;
  W sign_weight(1);  // (-1)^j (p^k q)^j
  const long j_max = (nc - 1) / k;
  for (long j = 0; j <= j_max; ++j) {
    CompensatedSum<W> inner;
    for (long i = 0; i <= r; ++i) {
      const BigInt c = binom(r, i) * binom(nc - j * k - 1, j + i - 1);
      if (c == 0) continue;
      if (term_count) ++*term_count;
      inner.add(from_integer<W>(c) * qp[i]);
    }
    outer.add(sign_weight * binom_w<W>(r + j - 1, r - 1) * inner.value());
    sign_weight *= -pkq;
  }
  return convert<T>(ipow(p, params.rk()) * outer.value());
}

template <class T>
T pmf_hyp(const RunParams<T>& params, long n, IndexScheme scheme) {
  using W = working_t<T>;
  const long nc = convert_index(n, scheme, IndexScheme::Cut, params);
  if (nc < 0) return T(0);
  if (nc == 0) return boundary_value(params);
  const int k = params.k();
  const int r = params.r();
  const W p = convert<W>(params.p());
  const W q = convert<W>(params.q());
  const W pkq = ipow(p, k) * q;
  CompensatedSum<W> sum;
  sum.add(q * W(r) * hyp2f1_terminating(Hyp2F1Spec(1 - nc, 1 - r, 2), q));
  W sign_weight = -pkq;
  for (long j = 1; j <= (nc - 1) / k; ++j) {
    const BigInt c = binom(r + j - 1, r - 1) * binom(nc - j * k - 1, j - 1);
    if (c != 0) {
      const W f = hyp2f1_terminating(Hyp2F1Spec(j * k + j - nc, -r, j), q);
      sum.add(sign_weight * from_integer<W>(c) * f);
    }
    sign_weight *= -pkq;
  }
  return convert<T>(ipow(p, params.rk()) * sum.value());
}

template <class T>
T pmf_pgf_expansion(const RunParams<T>& params, long n) {
  using W = working_t<T>;
  const long v = n - params.rk();
  if (v < 0) return T(0);
  if (v == 0) return boundary_value(params);
  const int k = params.k();
  const int r = params.r();
  const W p = convert<W>(params.p());
  const W q = convert<W>(params.q());
  const W pkq = ipow(p, k) * q;
  CompensatedSum<W> outer;
  for (long j = 0; j <= v; ++j) {
    const long d = v - j;
    const BigInt cr = binom(r, d);
    if (cr == 0) continue;
    CompensatedSum<W> inner;
    W weight(1);  // (-1)^i (q p^k)^i
    for (long i = 0; i <= j / (k + 1); ++i) {
      const BigInt c = binom(r + i - 1, r - 1) * binom(r + j - i * k - 1, r + i - 1);
      if (c != 0) inner.add(weight * from_integer<W>(c));
      weight *= -pkq;
    }
    W lead = ipow(p, d) * from_integer<W>(cr);
    if (d % 2 != 0) lead = -lead;
    outer.add(lead * inner.value());
  }
  return convert<T>(ipow(p, params.rk()) * outer.value());
}

template <class T>
T pmf_muselli(const RunParams<T>& params, long n, MuselliForm form) {
  using W = working_t<T>;
  const int k = params.k();
  const int r = params.r();
  const long first = muselli_first_support(k, r);
  if (n < first) return T(0);
  if (n == first) return ipow(params.p(), params.rk()) * ipow(params.q(), r - 1);
  const W p = convert<W>(params.p());
  const W q = convert<W>(params.q());
  CompensatedSum<W> sum;
  for (long m = r; m <= (n + 1) / (k + 1); ++m) {
    W bracket;
    if (form == MuselliForm::Original) {
      bracket = binom_w<W>(n - m * k - 1, m - 2) + q * binom_w<W>(n - m * k - 1, m - 1);
    } else {
      bracket = binom_w<W>(n - m * k, m - 1) - p * binom_w<W>(n - m * k - 1, m - 1);
    }
    W term = binom_w<W>(m - 1, r - 1) * ipow(p, m * k) * ipow(q, m - 1) * bracket;
    if ((m - r) % 2 != 0) term = -term;
    sum.add(term);
  }
  return convert<T>(sum.value());
}

template <class T>
T counts_muselli(const RunParams<T>& params, long n, int count, MuselliForm form) {
  using W = working_t<T>;
  if (n < 1) throw InvalidParams("counts need n >= 1");
  if (count < 0) return T(0);
  const int k = params.k();
  const W p = convert<W>(params.p());
  const W q = convert<W>(params.q());
  CompensatedSum<W> sum;
  for (long m = count; m <= (n + 1) / (k + 1); ++m) {
    W bracket;
    if (form == MuselliForm::Original) {
      bracket = binom_w<W>(n - m * k, m - 1) + q * binom_w<W>(n - m * k, m);
    } else {
      bracket = binom_w<W>(n - m * k + 1, m) - p * binom_w<W>(n - m * k, m);
    }
    // q^(m-1) with m = 0 is 1/q.
    const W qpow = m == 0 ? W(1) / q : ipow(q, m - 1);
    W term = binom_w<W>(m, count) * ipow(p, m * k) * qpow * bracket;
    if ((m - count) % 2 != 0) term = -term;
    sum.add(term);
  }
  return convert<T>(sum.value());
}

#define RUNSDIST_INSTANTIATE(T)                                                          \
  template PmfTable<T> pmf_recurrence_pg(const RunParams<T>&, long);                     \
  template PmfTable<T> pmf_recurrence_ch(const RunParams<T>&, long);                     \
  template T pmf_fullsum_ch(const RunParams<T>&, long);                                  \
  template T pmf_nested_sum(const RunParams<T>&, long, IndexScheme, long*);              \
  template T pmf_hyp(const RunParams<T>&, long, IndexScheme);                            \
  template T pmf_pgf_expansion(const RunParams<T>&, long);                               \
  template T pmf_muselli(const RunParams<T>&, long, MuselliForm);                        \
  template T counts_muselli(const RunParams<T>&, long, int, MuselliForm);

RUNSDIST_INSTANTIATE(double)
RUNSDIST_INSTANTIATE(Quad)
RUNSDIST_INSTANTIATE(Rational)

#undef RUNSDIST_INSTANTIATE

}  // namespace runsdist
