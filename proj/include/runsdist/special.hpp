#pragma once

// Integer combinatorics and the terminating Gauss hypergeometric series.

#include <complex>
#include <span>
#include <vector>

#include "runsdist/errors.hpp"
#include "runsdist/numeric.hpp"

namespace runsdist {

/// How C(a, b) treats a negative upper argument.
///   ZeroOnNegativeTop: 0 if b < 0, a < 0 or b > a.
///   ExtendNegativeTop: (-1)^b C(b - a - 1, b) for a < 0 <= b; otherwise as above.
enum class BinomConvention { ZeroOnNegativeTop, ExtendNegativeTop };

/// Total function; never throws.
BigInt binom(long a, long b, BinomConvention convention = BinomConvention::ZeroOnNegativeTop);

template <class T>
T binom_as(long a, long b, BinomConvention convention = BinomConvention::ZeroOnNegativeTop) {
  return from_integer<T>(binom(a, b, convention));
}

/// Falling factorial a (a-1) ... (a-j+1); 1 when j = 0.
template <class T>
T falling(const T& a, int j) {
  T result(1);
  for (int i = 0; i < j; ++i) result *= a - T(i);
  return result;
}

/// Rows 0..max_top of Pascal's triangle, exact. Used where an engine needs
/// many binomials with small tops.
class PascalTriangle {
 public:
  explicit PascalTriangle(long max_top);
  long max_top() const noexcept { return static_cast<long>(rows_.size()) - 1; }
  /// ZeroOnNegativeTop semantics; tops above max_top fall back to binom().
  BigInt operator()(long a, long b) const;

 private:
  std::vector<std::vector<BigInt>> rows_;
};

/// Stirling number of the second kind S(n, j).
BigInt stirling2(int n, int j);

/// Eulerian numbers A_{ij} (0 <= j <= i-1) for i <= max_order, with A_0 = 1.
class EulerianTable {
 public:
  /// Builds rows with the alternating sum A_ij = sum_s (-1)^s C(i+1,s) (j+1-s)^i.
  explicit EulerianTable(int max_order);
  /// Builds rows with A_ij = (j+1) A_{i-1,j} + (i-j) A_{i-1,j-1}.
  static EulerianTable from_recurrence(int max_order);

  int max_order() const noexcept { return static_cast<int>(rows_.size()) - 1; }
  std::span<const BigInt> row(int i) const;
  const BigInt& number(int i, int j) const { return row(i)[static_cast<std::size_t>(j)]; }

  /// A_i(t). Throws OrderExceedsTable if i > max_order().
  template <class T>
  T eval(int i, const T& t) const {
    auto coeffs = row(i);
    T acc(0);
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * t + from_integer<T>(coeffs[j]);
    return acc;
  }

 private:
  EulerianTable() = default;
  std::vector<std::vector<BigInt>> rows_;
};

/// Integer parameters of a terminating 2F1(a, b; c; z).
struct Hyp2F1Spec {
  long a;
  long b;
  long c;

  /// Checks that some upper parameter is <= 0 and (c)_i != 0 before termination.
  /// Throws InvalidParams for a non-terminating series and ZeroDenominatorPochhammer
  /// when the denominator vanishes first.
  Hyp2F1Spec(long a_, long b_, long c_);

  /// Index m of the last nonzero term.
  long last_index() const noexcept;
};

/// sum_{i=0}^{m} (a)^i (b)^i / ((c)^i i!) z^i with rising factorials, each term
/// obtained from the previous one by one multiply and one divide.
template <class Z>
Z hyp2f1_terminating(const Hyp2F1Spec& spec, const Z& z) {
  const long m = spec.last_index();
  Z term(1);
  Z sum(1);
  for (long i = 0; i < m; ++i) {
    if (spec.c + i == 0) throw ZeroDenominatorPochhammer("(c)_i vanished in 2F1");
    term = term * Z((spec.a + i) * (spec.b + i)) * z;
    term = term / Z((spec.c + i) * (i + 1));
    sum += term;
  }
  return sum;
}

}  // namespace runsdist
