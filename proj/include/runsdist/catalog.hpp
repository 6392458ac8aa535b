#pragma once

// Engines and oracles addressed by name: which variants each one covers and
// evaluation of a contiguous range of n.

#include <string>
#include <string_view>
#include <vector>

#include "runsdist/core.hpp"

namespace runsdist {

/// pmf engine ids followed by the reference evaluators pgf-series, dp-oracle
/// and brute-force.
const std::vector<std::string>& catalog_engine_names();

bool is_known_engine(std::string_view engine);

/// Type I engines also serve the gap variant through the (r-1) g shift.
bool engine_supports(std::string_view engine, const VariantSpec& variant);

/// root-based is the only engine without an exact mode.
bool engine_supports_exact(std::string_view engine);

/// Scheme in which the engine's formula is written.
IndexScheme native_scheme(std::string_view engine);

struct EvalOptions {
  Execution execution = Execution::Serial;
  int count = -1;  // run count for the muselli-counts engines; -1 means r
};

/// Values for n in [n_min, n_max] in the given scheme. Per-n engines run the
/// range under OpenMP when options.execution is Parallel.
/// Throws InvalidParams for unknown engines, unsupported variants, or an
/// exact request to root-based.
template <class T>
PmfTable<T> evaluate_range(std::string_view engine, const RunParams<T>& params,
                           const VariantSpec& variant, IndexScheme scheme, long n_min, long n_max,
                           const EvalOptions& options = {});

}  // namespace runsdist
