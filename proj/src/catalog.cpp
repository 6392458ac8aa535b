#include "runsdist/catalog.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <type_traits>

#include "runsdist/oracle.hpp"
#include "runsdist/pmf.hpp"
#include "runsdist/roots.hpp"

namespace runsdist {

namespace {

constexpr std::string_view kPgfSeries = "pgf-series";
constexpr std::string_view kDpOracle = "dp-oracle";
constexpr std::string_view kBruteForce = "brute-force";

bool is_type_one_engine(PmfEngine e) {
  switch (e) {
    case PmfEngine::RecurrencePG:
    case PmfEngine::RecurrenceCh:
    case PmfEngine::FullSumCh:
    case PmfEngine::NestedSum:
    case PmfEngine::HypSum:
    case PmfEngine::PgfExpansion:
    case PmfEngine::RootBased:
      return true;
    default:
      return false;
  }
}

// Fills values[i] = f(first + i) serially or with OpenMP.
template <class T>
std::vector<T> map_range(long first, long last, Execution execution, const std::function<T(long)>& f) {
  const long count = std::max(0L, last - first + 1);
  std::vector<T> out(static_cast<std::size_t>(count), T(0));
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(first + i);
  } else {
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(first + i);
  }
  return out;
}

// Full-scheme values of the ell >= 0 distribution on [first, last].
template <class T>
std::vector<T> base_values(std::string_view engine, const RunParams<T>& params, int ell, long first,
                           long last, const EvalOptions& options) {
  const long rk = params.rk();
  const long top = std::max(last, 1L);
  auto from_table = [&](const PmfTable<T>& t, long offset) {
    std::vector<T> out;
    for (long n = first; n <= last; ++n) out.push_back(t.at(n + offset));
    return out;
  };
  auto per_n = [&](const std::function<T(long)>& f) {
    return map_range<T>(first, last, options.execution, [&](long n) { return n < 1 ? T(0) : f(n); });
  };

  if (engine == kPgfSeries) return from_table(overlap_pmf_table(params, ell, top), 0);

  const PmfEngine e = *parse_engine(engine);
  switch (e) {
    case PmfEngine::RecurrencePG:
      return from_table(pmf_recurrence_pg(params, std::max(top, rk)), 0);
    case PmfEngine::RecurrenceCh:
      return from_table(pmf_recurrence_ch(params, std::max(top - rk, 0L)), -rk);
    case PmfEngine::FullSumCh:
      return per_n([&](long n) { return pmf_fullsum_ch(params, n - rk); });
    case PmfEngine::NestedSum:
      return per_n([&](long n) { return pmf_nested_sum(params, n, IndexScheme::Full); });
    case PmfEngine::HypSum:
      return per_n([&](long n) { return pmf_hyp(params, n, IndexScheme::Full); });
    case PmfEngine::PgfExpansion:
      return per_n([&](long n) { return pmf_pgf_expansion(params, n); });
    case PmfEngine::RootBased:
      if constexpr (std::is_same_v<T, double>) {
        const RootCoefficients coeffs = make_root_coefficients(params, ell);
        return per_n([&](long n) { return pmf_root_based(coeffs, n); });
      } else {
        throw InvalidParams("engine root-based has no exact mode");
      }
    case PmfEngine::MuselliOriginal:
      return per_n([&](long n) { return pmf_muselli(params, n, MuselliForm::Original); });
    case PmfEngine::MuselliAlt:
      return per_n([&](long n) { return pmf_muselli(params, n, MuselliForm::Alt); });
    case PmfEngine::MuselliCountsOriginal:
    case PmfEngine::MuselliCountsAlt: {
      const int count = options.count < 0 ? params.r() : options.count;
      const MuselliForm form =
          e == PmfEngine::MuselliCountsOriginal ? MuselliForm::Original : MuselliForm::Alt;
      return per_n([&](long n) { return counts_muselli(params, n, count, form); });
    }
  }
  throw InvalidParams("unknown engine");
}

}  // namespace

const std::vector<std::string>& catalog_engine_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (PmfEngine e : all_engines()) out.emplace_back(engine_name(e));
    out.emplace_back(kPgfSeries);
    out.emplace_back(kDpOracle);
    out.emplace_back(kBruteForce);
    return out;
  }();
  return names;
}

bool is_known_engine(std::string_view engine) {
  const auto& names = catalog_engine_names();
  return std::find(names.begin(), names.end(), engine) != names.end();
}

bool engine_supports(std::string_view engine, const VariantSpec& variant) {
  if (engine == kDpOracle || engine == kBruteForce) return true;
  if (engine == kPgfSeries) return !variant.type2;
  const std::optional<PmfEngine> e = parse_engine(engine);
  if (!e) return false;
  if (variant.type2) return !is_type_one_engine(*e);
  if (!is_type_one_engine(*e)) return false;
  if (variant.overlap > 0) return *e == PmfEngine::RootBased;
  return true;
}

bool engine_supports_exact(std::string_view engine) {
  return is_known_engine(engine) && engine != engine_name(PmfEngine::RootBased);
}

IndexScheme native_scheme(std::string_view engine) {
  if (engine == engine_name(PmfEngine::RecurrenceCh) || engine == engine_name(PmfEngine::FullSumCh)) {
    return IndexScheme::Cut;
  }
  return IndexScheme::Full;
}

template <class T>
PmfTable<T> evaluate_range(std::string_view engine, const RunParams<T>& params,
                           const VariantSpec& variant, IndexScheme scheme, long n_min, long n_max,
                           const EvalOptions& options) {
  if (!is_known_engine(engine)) throw InvalidParams("unknown engine '" + std::string(engine) + "'");
  variant.validate(params.k());
  if (!engine_supports(engine, variant)) {
    throw InvalidParams("engine " + std::string(engine) + " does not support variant " +
                        to_string(variant));
  }
  if (n_max < n_min) throw InvalidParams("n-max must be >= n-min");
  const long offset = scheme == IndexScheme::Cut ? params.rk() : 0;
  const long first = n_min + offset;
  const long last = n_max + offset;

  PmfTable<T> out{params, scheme, variant, n_min, {}};
  if (engine == kDpOracle || engine == kBruteForce) {
    const auto sem = CountingSemantics::from_variant(variant);
    const long top = std::max(last, 1L);
    const PmfTable<T> t = engine == kDpOracle ? dp_waiting_time_pmf(params, sem, top)
                                              : brute_force_pmf(params, sem, top);
    for (long n = first; n <= last; ++n) out.values.push_back(t.at(n));
    return out;
  }
  // Gap: the ell = 0 distribution shifted right by (r-1) g.
  const long shift = static_cast<long>(params.r() - 1) * variant.gap_length();
  const int ell = std::max(variant.overlap, 0);
  out.values = base_values(engine, params, ell, first - shift, last - shift, options);
  return out;
}

template PmfTable<double> evaluate_range(std::string_view, const RunParams<double>&, const VariantSpec&,
                                         IndexScheme, long, long, const EvalOptions&);
template PmfTable<Quad> evaluate_range(std::string_view, const RunParams<Quad>&, const VariantSpec&,
                                       IndexScheme, long, long, const EvalOptions&);
template PmfTable<Rational> evaluate_range(std::string_view, const RunParams<Rational>&,
                                           const VariantSpec&, IndexScheme, long, long,
                                           const EvalOptions&);

}  // namespace runsdist
