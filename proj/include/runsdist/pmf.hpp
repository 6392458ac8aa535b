#pragma once

// Type I pmf engines and the Type II (Muselli) forms.
//
// Every engine is a template over the scalar T (double, Quad or Rational).
// Sums whose terms alternate in sign are accumulated in working_t<T>, so the
// double instantiation evaluates them in binary128 and rounds once at the end.
// All binomials follow BinomConvention::ZeroOnNegativeTop.

#include <optional>
#include <span>
#include <string_view>

#include "runsdist/core.hpp"
#include "runsdist/special.hpp"

namespace runsdist {

enum class PmfEngine {
  RecurrencePG,
  RecurrenceCh,
  FullSumCh,
  NestedSum,
  HypSum,
  PgfExpansion,
  RootBased,
  MuselliOriginal,
  MuselliAlt,
  MuselliCountsOriginal,
  MuselliCountsAlt,
};

std::string_view engine_name(PmfEngine e);
std::optional<PmfEngine> parse_engine(std::string_view name);
std::span<const PmfEngine> all_engines();

/// Binomial convention an engine relies on. All of them use ZeroOnNegativeTop.
BinomConvention engine_convention(PmfEngine e);

enum class MuselliForm { Original, Alt };

/// Full scheme, n in [rk, n_max].
template <class T>
PmfTable<T> pmf_recurrence_pg(const RunParams<T>& params, long n_max);

/// Cut scheme, n in [0, n_max].
template <class T>
PmfTable<T> pmf_recurrence_ch(const RunParams<T>& params, long n_max);

/// Cut scheme. The inner alternating bracket counts compositions of n and is
/// evaluated exactly in integers, so the outer sum has no cancellation.
template <class T>
T pmf_fullsum_ch(const RunParams<T>& params, long n);

/// Nested sum with j outside. If term_count is given it receives the number
/// of bracket terms with a nonzero binomial.
template <class T>
T pmf_nested_sum(const RunParams<T>& params, long n, IndexScheme scheme,
                 long* term_count = nullptr);

/// Nested sum with the inner i-sum collapsed into a terminating 2F1.
template <class T>
T pmf_hyp(const RunParams<T>& params, long n, IndexScheme scheme);

/// Coefficient of s^n in the expanded pgf. Full scheme.
template <class T>
T pmf_pgf_expansion(const RunParams<T>& params, long n);

/// Type II pmf in the Full scheme.
template <class T>
T pmf_muselli(const RunParams<T>& params, long n, MuselliForm form);

/// Probability of exactly `count` runs of length >= k in n trials (Type II
/// counting). Only k and p of params are used; count may be 0.
template <class T>
T counts_muselli(const RunParams<T>& params, long n, int count, MuselliForm form);

/// First n (Full) with nonzero Type II probability: r(k+1) - 1.
long muselli_first_support(int k, int r);

}  // namespace runsdist
