#include "runsdist/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <optional>
#include <stdexcept>

#include "runsdist/catalog.hpp"
#include "runsdist/moments.hpp"
#include "runsdist/oracle.hpp"
#include "runsdist/roots.hpp"

namespace runsdist {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  UsageError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

struct CommonArgs {
  int k = 0;
  int r = 1;
  std::string p;
  std::string variant = "type1";
  std::string scheme = "full";
  std::string format = "csv";
  bool exact = false;
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--k", a.k, "run length k >= 1")->required();
  app->add_option("--r", a.r, "number of runs r >= 1 (default 1)");
  app->add_option("--p", a.p, "success probability, decimal or fraction a/b")->required();
  app->add_option("--variant", a.variant, "type1 | type2 | type3 | overlap=L | gap=G");
  app->add_option("--scheme", a.scheme, "full | cut");
  app->add_option("--format", a.format, "csv | json");
  app->add_flag("--exact", a.exact, "rational arithmetic; needs --p as a fraction");
}

struct Resolved {
  int k = 0;
  int r = 1;
  ProbabilityArg p;
  std::string p_text;
  VariantSpec variant;
  IndexScheme scheme = IndexScheme::Full;
  bool json = false;
  bool exact = false;

  long rk() const { return static_cast<long>(k) * r; }
};

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

VariantSpec parse_variant(const std::string& text, int k) {
  VariantSpec v;
  if (text == "type1") {
    v = VariantSpec::type_one();
  } else if (text == "type2") {
    v = VariantSpec::type_two();
  } else if (text == "type3") {
    if (k < 2) throw UsageError("--variant", "type3 needs k >= 2");
    v = VariantSpec::overlapping(k - 1);
  } else if (text.rfind("overlap=", 0) == 0) {
    const auto ell = parse_int(std::string_view(text).substr(8));
    if (!ell || *ell < 0) throw UsageError("--variant", "overlap=L needs an integer L >= 0");
    v = VariantSpec::overlapping(*ell);
  } else if (text.rfind("gap=", 0) == 0) {
    const auto g = parse_int(std::string_view(text).substr(4));
    if (!g || *g < 1) throw UsageError("--variant", "gap=G needs an integer G >= 1");
    v = VariantSpec::gap(*g);
  } else {
    throw UsageError("--variant", "expected type1, type2, type3, overlap=L or gap=G, got '" + text + "'");
  }
  try {
    v.validate(k);
  } catch (const InvalidParams& e) {
    throw UsageError("--variant", e.what());
  }
  return v;
}

Resolved resolve(const CommonArgs& a) {
  Resolved out;
  if (a.k < 1) throw UsageError("--k", "k must be >= 1");
  if (a.r < 1) throw UsageError("--r", "r must be >= 1");
  out.k = a.k;
  out.r = a.r;
  try {
    out.p = parse_probability(a.p);
  } catch (const InvalidParams& e) {
    throw UsageError("--p", e.what());
  }
  if (a.exact && out.p.mode != NumberMode::Exact) {
    throw UsageError("--exact", "needs --p as a fraction a/b");
  }
  out.exact = a.exact;
  out.p_text = a.exact ? format_rational(out.p.exact) : format_double(out.p.value);
  if (a.scheme == "full") {
    out.scheme = IndexScheme::Full;
  } else if (a.scheme == "cut") {
    out.scheme = IndexScheme::Cut;
  } else {
    throw UsageError("--scheme", "expected full or cut, got '" + a.scheme + "'");
  }
  if (a.format != "csv" && a.format != "json") {
    throw UsageError("--format", "expected csv or json, got '" + a.format + "'");
  }
  out.json = a.format == "json";
  out.variant = parse_variant(a.variant, a.k);
  return out;
}

template <class T>
RunParams<T> make_params(const Resolved& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return RunParams<Rational>(r.k, r.r, r.p.exact);
  } else {
    return RunParams<double>(r.k, r.r, r.p.value);
  }
}

std::string fmt(double x) { return format_double(x); }
// Echo of a user-supplied double in its shortest round-trip form.
std::string shortest(double x) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}
std::string fmt(const Rational& x) { return format_rational(x); }
json jval(double x) { return x; }
json jval(const Rational& x) { return format_rational(x); }

json header_json(const char* command, const Resolved& r) {
  json j;
  j["command"] = command;
  j["k"] = r.k;
  j["r"] = r.r;
  j["p"] = r.p_text;
  j["mode"] = r.exact ? "exact" : "float";
  j["scheme"] = std::string(to_string(r.scheme));
  j["variant"] = to_string(r.variant);
  return j;
}

std::string csv_prefix(const Resolved& r) {
  return std::to_string(r.k) + "," + std::to_string(r.r) + "," + r.p_text + "," +
         std::string(to_string(r.scheme)) + "," + to_string(r.variant);
}

std::string engine_list() {
  std::string s;
  for (const auto& name : catalog_engine_names()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

void check_engine(const std::string& engine, const Resolved& r) {
  if (!is_known_engine(engine)) {
    throw UsageError("--engine", "unknown engine '" + engine + "'; valid engines: " + engine_list());
  }
  if (!engine_supports(engine, r.variant)) {
    throw UsageError("--engine", "engine " + engine + " does not support variant " + to_string(r.variant));
  }
  if (r.exact && !engine_supports_exact(engine)) {
    throw UsageError("--exact", "engine " + engine + " has no exact mode");
  }
}

void check_range(long n_min, long n_max, const std::string& engine, IndexScheme scheme, long rk) {
  if (n_max < n_min) throw UsageError("--n-max", "must be >= --n-min");
  const long full_max = n_max + (scheme == IndexScheme::Cut ? rk : 0);
  if (engine == "brute-force" && full_max > kBruteForceMax) {
    throw UsageError("--n-max", "brute-force is limited to Full n <= 22");
  }
}

// DP table extended until the unabsorbed mass is negligible.
PmfTable<double> dp_until_negligible(const RunParams<double>& params, const VariantSpec& variant) {
  const auto sem = CountingSemantics::from_variant(variant);
  for (long n = 256; n <= (1L << 26); n *= 2) {
    auto res = dp_waiting_time(params, sem, n);
    if (res.remaining < 1e-18) return res.table;
  }
  throw NonConvergentTail("summation window exceeds 2^26 trials");
}

// ---------------------------------------------------------------- pmf

struct PmfArgs {
  CommonArgs common;
  long n_min = 0;
  long n_max = 0;
  std::string engine = "recurrence-pg";
  int count = -1;
};

template <class T>
int emit_pmf(const Resolved& r, const PmfArgs& a, std::ostream& out) {
  const auto params = make_params<T>(r);
  EvalOptions opts{Execution::Parallel, a.count};
  const PmfTable<T> table = evaluate_range(a.engine, params, r.variant, r.scheme, a.n_min, a.n_max, opts);
  if (r.json) {
    json j = header_json("pmf", r);
    j["engine"] = a.engine;
    if (a.count >= 0) j["count"] = a.count;
    json rows = json::array();
    for (long n = a.n_min; n <= a.n_max; ++n) rows.push_back({{"n", n}, {"value", jval(table.at(n))}});
    j["records"] = rows;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "k,r,p,scheme,variant,engine,n,value\n";
  const std::string prefix = csv_prefix(r) + "," + a.engine + ",";
  for (long n = a.n_min; n <= a.n_max; ++n) out << prefix << n << ',' << fmt(table.at(n)) << '\n';
  return kExitOk;
}

int cmd_pmf(const PmfArgs& a, std::ostream& out) {
  const Resolved r = resolve(a.common);
  check_engine(a.engine, r);
  check_range(a.n_min, a.n_max, a.engine, r.scheme, r.rk());
  const bool counts = a.engine.rfind("muselli-counts", 0) == 0;
  if (a.count >= 0 && !counts) throw UsageError("--count", "applies only to the muselli-counts engines");
  return r.exact ? emit_pmf<Rational>(r, a, out) : emit_pmf<double>(r, a, out);
}

// ---------------------------------------------------------------- moments

struct MomentArgs {
  CommonArgs common;
  std::string kind = "factorial";
  std::string route = "partition";
  int order_max = 4;
  double tail_tol = 1e-12;
};

enum class Route { Recurrence, Partition, Pgf, Root, Summation };

Route parse_route(const std::string& s) {
  if (s == "recurrence") return Route::Recurrence;
  if (s == "partition") return Route::Partition;
  if (s == "pgf") return Route::Pgf;
  if (s == "root") return Route::Root;
  if (s == "summation") return Route::Summation;
  throw UsageError("--route", "expected recurrence, partition, pgf, root or summation, got '" + s + "'");
}

MomentKind parse_kind(const std::string& s) {
  if (s == "factorial") return MomentKind::Factorial;
  if (s == "raw") return MomentKind::Raw;
  if (s == "central") return MomentKind::Central;
  throw UsageError("--kind", "expected factorial, raw or central, got '" + s + "'");
}

void check_route(Route route, const Resolved& r) {
  const VariantSpec& v = r.variant;
  const bool float_only = route == Route::Pgf || route == Route::Root || route == Route::Summation;
  if (r.exact && float_only) throw UsageError("--route", "this route has no exact mode");
  if (route == Route::Summation) return;
  if (v.type2) throw UsageError("--route", "type2 moments are available only by summation");
  if (v.overlap > 0 && route != Route::Root) {
    throw UsageError("--route", "overlap moments need route root or summation");
  }
}

// Full-scheme factorial moments of the requested variant.
template <class T>
MomentSet<T> full_factorial(Route route, const RunParams<T>& params, const VariantSpec& variant,
                            int order_max, double tail_tol) {
  MomentSet<T> fac;
  if constexpr (std::is_same_v<T, double>) {
    if (route == Route::Summation) {
      return moments_by_summation(dp_until_negligible(params, variant), order_max, MomentKind::Factorial);
    }
    if (route == Route::Pgf) {
      PgfMomentOptions opts;
      opts.tail_tol = tail_tol;
      opts.execution = Execution::Parallel;
      fac = factorial_moments_pgf(params, order_max, opts);
    }
    if (route == Route::Root) {
      fac = factorial_moments_root(make_root_coefficients(params, std::max(variant.overlap, 0)), order_max);
    }
  }
  if (route == Route::Recurrence) fac = shift_factorial_moments(factorial_moments_recurrence(params, order_max), params);
  if (route == Route::Partition) fac = factorial_moments_partition(params, order_max, IndexScheme::Full);
  if (variant.is_gap()) {
    fac = shift_moments_by(fac, static_cast<long>(params.r() - 1) * variant.gap_length());
  }
  fac.scheme = IndexScheme::Full;
  return fac;
}

template <class T>
MomentSet<T> route_moments(Route route, const RunParams<T>& params, const VariantSpec& variant,
                           MomentKind kind, int order_max, double tail_tol) {
  const bool plain = !variant.type2 && variant.overlap <= 0;
  if (kind == MomentKind::Central && route == Route::Partition && plain && order_max <= 4) {
    return central_moments(params, order_max);
  }
  const MomentSet<T> fac = full_factorial(route, params, variant, order_max, tail_tol);
  if (kind == MomentKind::Factorial) return fac;
  const MomentSet<T> raw = factorial_to_raw(fac);
  return kind == MomentKind::Raw ? raw : raw_to_central(raw);
}

template <class T>
int emit_moments(const Resolved& r, const MomentArgs& a, Route route, MomentKind kind, std::ostream& out) {
  const auto params = make_params<T>(r);
  MomentSet<T> set = route_moments(route, params, r.variant, kind, a.order_max, a.tail_tol);
  if (kind != MomentKind::Central && r.scheme == IndexScheme::Cut) {
    set = shift_moments_by(set, -params.rk());
    set.scheme = IndexScheme::Cut;
  }
  std::optional<ShapeStats> shape;
  if (kind == MomentKind::Central) {
    const MomentSet<T> c = a.order_max >= 4 ? set : route_moments(route, params, r.variant, kind, 4, a.tail_tol);
    const double m2 = convert<double>(c.order(2));
    const double m3 = convert<double>(c.order(3));
    const double m4 = convert<double>(c.order(4));
    shape = ShapeStats{m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
  }

  if (r.json) {
    json j = header_json("moments", r);
    j["route"] = a.route;
    j["kind"] = a.kind;
    json rows = json::array();
    for (int n = 1; n <= a.order_max; ++n) rows.push_back({{"order", n}, {"value", jval(set.order(n))}});
    j["records"] = rows;
    if (shape) {
      j["skewness"] = shape->skewness;
      j["excess_kurtosis"] = shape->excess_kurtosis;
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "k,r,p,scheme,variant,route,kind,order,value\n";
  const std::string prefix = csv_prefix(r) + "," + a.route + "," + a.kind + ",";
  for (int n = 1; n <= a.order_max; ++n) out << prefix << n << ',' << fmt(set.order(n)) << '\n';
  if (shape) {
    out << prefix << "skewness," << format_double(shape->skewness) << '\n';
    out << prefix << "excess_kurtosis," << format_double(shape->excess_kurtosis) << '\n';
  }
  return kExitOk;
}

int cmd_moments(const MomentArgs& a, std::ostream& out) {
  const Resolved r = resolve(a.common);
  const Route route = parse_route(a.route);
  const MomentKind kind = parse_kind(a.kind);
  if (a.order_max < 1) throw UsageError("--order-max", "must be >= 1");
  if (!(a.tail_tol > 0)) throw UsageError("--tail-tol", "must be positive");
  check_route(route, r);
  return r.exact ? emit_moments<Rational>(r, a, route, kind, out)
                 : emit_moments<double>(r, a, route, kind, out);
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  CommonArgs common;
  long n_min = 0;
  long n_max = 0;
  std::vector<std::string> engines;
  double tolerance = 1e-11;
  bool no_convert = false;
};

template <class T>
int emit_compare(const Resolved& r, const CompareArgs& a, std::ostream& out) {
  const auto params = make_params<T>(r);
  std::vector<PmfTable<T>> tables;
  for (const auto& e : a.engines) {
    // Without conversion every engine reads n in its own scheme.
    const IndexScheme scheme = a.no_convert ? native_scheme(e) : r.scheme;
    tables.push_back(evaluate_range(e, params, r.variant, scheme, a.n_min, a.n_max, {Execution::Parallel, -1}));
  }
  T worst(0);
  std::vector<T> diffs;
  for (long n = a.n_min; n <= a.n_max; ++n) {
    T lo = tables.front().at(n);
    T hi = lo;
    for (const auto& t : tables) {
      lo = std::min(lo, t.at(n));
      hi = std::max(hi, t.at(n));
    }
    diffs.push_back(hi - lo);
    worst = std::max(worst, T(hi - lo));
  }
  const bool pass = worst <= T(a.tolerance);

  if (r.json) {
    json j = header_json("compare", r);
    j["engines"] = a.engines;
    j["converted"] = !a.no_convert;
    json rows = json::array();
    for (long n = a.n_min; n <= a.n_max; ++n) {
      json values;
      for (std::size_t e = 0; e < tables.size(); ++e) values[a.engines[e]] = jval(tables[e].at(n));
      rows.push_back({{"n", n}, {"values", values}, {"max_abs_diff", jval(diffs[static_cast<std::size_t>(n - a.n_min)])}});
    }
    j["records"] = rows;
    j["max_abs_diff"] = jval(worst);
    j["tolerance"] = a.tolerance;
    j["result"] = pass ? "PASS" : "FAIL";
    out << j.dump(2) << '\n';
  } else {
    out << "n";
    for (const auto& e : a.engines) out << ',' << e;
    out << ",max_abs_diff\n";
    for (long n = a.n_min; n <= a.n_max; ++n) {
      out << n;
      for (const auto& t : tables) out << ',' << fmt(t.at(n));
      out << ',' << fmt(diffs[static_cast<std::size_t>(n - a.n_min)]) << '\n';
    }
    out << (pass ? "PASS" : "FAIL") << " max_abs_diff=" << fmt(worst)
        << " tolerance=" << shortest(a.tolerance) << '\n';
  }
  return pass ? kExitOk : kExitCompareFailed;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const Resolved r = resolve(a.common);
  if (a.engines.size() < 2) throw UsageError("--engines", "need at least two engines");
  for (const auto& e : a.engines) {
    check_engine(e, r);
    check_range(a.n_min, a.n_max, e, a.no_convert ? native_scheme(e) : r.scheme, r.rk());
  }
  if (!(a.tolerance >= 0)) throw UsageError("--tolerance", "must be >= 0");
  return r.exact ? emit_compare<Rational>(r, a, out) : emit_compare<double>(r, a, out);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  CommonArgs common;
  long samples = 1000000;
  std::uint64_t seed = 1;
};

struct Analytic {
  double mean;
  double variance;
  double mu3;
  double mu4;
};

// Full-scheme mean and central moments 2..4 of the waiting time.
Analytic analytic_moments(const RunParams<double>& params, const VariantSpec& v) {
  MomentSet<double> central;
  double mean = 0;
  if (v.type2 || v.overlap > 0) {
    const MomentSet<double> fac =
        v.type2 ? moments_by_summation(dp_until_negligible(params, v), 4, MomentKind::Factorial)
                : factorial_moments_root(make_root_coefficients(params, v.overlap), 4);
    const MomentSet<double> raw = factorial_to_raw(fac);
    central = raw_to_central(raw);
    mean = raw.order(1);
  } else {
    central = central_moments(params, 4);
    mean = mean_closed_form(params) + static_cast<double>(params.r() - 1) * v.gap_length();
  }
  const double variance = v.type2 || v.overlap > 0 ? central.order(2) : variance_closed_form(params);
  return {mean, variance, central.order(3), central.order(4)};
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const Resolved r = resolve(a.common);
  if (a.common.exact) throw UsageError("--exact", "simulate has no exact mode");
  if (a.samples < 1) throw UsageError("--samples", "must be >= 1");
  const RunParams<double> params(r.k, r.r, r.p.value);
  const auto sem = CountingSemantics::from_variant(r.variant);
  const MonteCarloResult mc = monte_carlo(params, sem, a.samples, a.seed, Execution::Parallel);
  const Analytic an = analytic_moments(params, r.variant);
  const long offset = r.scheme == IndexScheme::Cut ? r.rk() : 0;
  const double n = static_cast<double>(a.samples);
  const double se_mean = std::sqrt(an.variance / n);
  const double se_var = std::sqrt(std::max(0.0, an.mu4 - an.variance * an.variance) / n);
  const double skew = an.mu3 / std::pow(an.variance, 1.5);

  if (r.json) {
    json j = header_json("simulate", r);
    j["samples"] = a.samples;
    j["seed"] = a.seed;
    j["statistics"] = {
        {"mean", {{"empirical", mc.mean - offset}, {"analytic", an.mean - offset}, {"std_error", se_mean}}},
        {"variance", {{"empirical", mc.variance}, {"analytic", an.variance}, {"std_error", se_var}}},
        {"skewness", {{"empirical", mc.skewness}, {"analytic", skew}}},
    };
    json hist = json::array();
    for (const auto& [t, c] : mc.histogram) hist.push_back({{"n", t - offset}, {"count", c}});
    j["histogram"] = hist;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "k,r,p,scheme,variant,samples,seed\n";
  out << csv_prefix(r) << ',' << a.samples << ',' << a.seed << '\n';
  out << "statistic,empirical,analytic,std_error\n";
  out << "mean," << fmt(mc.mean - offset) << ',' << fmt(an.mean - offset) << ',' << fmt(se_mean) << '\n';
  out << "variance," << fmt(mc.variance) << ',' << fmt(an.variance) << ',' << fmt(se_var) << '\n';
  out << "skewness," << fmt(mc.skewness) << ',' << fmt(skew) << ",\n";
  out << "n,count\n";
  for (const auto& [t, c] : mc.histogram) out << t - offset << ',' << c << '\n';
  return kExitOk;
}

void apply_thread_knob() {
  if (const char* env = std::getenv("RUNSDIST_THREADS")) {
    const auto t = parse_int(env);
    if (t && *t > 0) omp_set_num_threads(*t);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  apply_thread_knob();
  CLI::App app{"Negative binomial distribution of order k: pmf, moments, engine comparison, simulation"};
  app.name("runsdist");
  app.require_subcommand(1);

  PmfArgs pmf;
  auto* pmf_cmd = app.add_subcommand("pmf", "pmf values over a range of n");
  add_common(pmf_cmd, pmf.common);
  pmf_cmd->add_option("--n-min", pmf.n_min, "first n")->required();
  pmf_cmd->add_option("--n-max", pmf.n_max, "last n")->required();
  pmf_cmd->add_option("--engine", pmf.engine, "engine id (default recurrence-pg)");
  pmf_cmd->add_option("--count", pmf.count, "run count for the muselli-counts engines (default r)");

  MomentArgs mom;
  auto* mom_cmd = app.add_subcommand("moments", "factorial, raw or central moments");
  add_common(mom_cmd, mom.common);
  mom_cmd->add_option("--kind", mom.kind, "factorial | raw | central");
  mom_cmd->add_option("--order-max", mom.order_max, "highest order (default 4)");
  mom_cmd->add_option("--route", mom.route, "recurrence | partition | pgf | root | summation");
  mom_cmd->add_option("--tail-tol", mom.tail_tol, "relative tail tolerance of the pgf route");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "pairwise agreement of engines over a range");
  add_common(cmp_cmd, cmp.common);
  cmp_cmd->add_option("--n-min", cmp.n_min, "first n")->required();
  cmp_cmd->add_option("--n-max", cmp.n_max, "last n")->required();
  cmp_cmd->add_option("--engines", cmp.engines, "comma-separated engine ids")->required()->delimiter(',');
  cmp_cmd->add_option("--tolerance", cmp.tolerance, "max absolute difference (default 1e-11)");
  cmp_cmd->add_flag("--no-convert", cmp.no_convert, "read n in each engine's own scheme");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo waiting times");
  add_common(sim_cmd, sim.common);
  sim_cmd->add_option("--samples", sim.samples, "number of samples (default 1e6)");
  sim_cmd->add_option("--seed", sim.seed, "generator seed (default 1)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*pmf_cmd) return cmd_pmf(pmf, out);
    if (*mom_cmd) return cmd_moments(mom, out);
    if (*cmp_cmd) return cmd_compare(cmp, out);
    return cmd_simulate(sim, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace runsdist
