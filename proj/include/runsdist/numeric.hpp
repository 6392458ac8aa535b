#pragma once

// Scalar types shared by every engine.
//
// Engines are templates over a scalar T. Three instantiations exist:
//   double    float mode (the default)
//   Quad      IEEE binary128, used internally for sums with cancellation
//   Rational  exact mode (GMP rationals)

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

namespace runsdist {

namespace mp = boost::multiprecision;

using BigInt = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Quad = mp::float128;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Working type for sums whose terms cancel: float mode is widened to Quad.
template <class T>
struct Working {
  using type = T;
};
template <>
struct Working<double> {
  using type = Quad;
};
template <class T>
using working_t = typename Working<T>::type;

template <class To, class From>
To convert(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<To, double>) {
    return static_cast<double>(x);
  } else {
    return static_cast<To>(x);
  }
}

template <class T>
T from_integer(const BigInt& x) {
  return convert<T>(x);
}

template <class T>
T from_integer(long x) {
  return T(x);
}

/// Integer power by repeated squaring; exact for Rational.
template <class T>
T ipow(const T& base, long e) {
  T result(1);
  T b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return result;
}

template <class T>
T abs_value(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(x);
  } else {
    return x < 0 ? T(-x) : x;
  }
}

/// Neumaier compensated accumulator. Exact types accumulate plainly.
template <class T>
class CompensatedSum {
 public:
  void add(const T& x) {
    if constexpr (is_exact_v<T>) {
      sum_ += x;
    } else {
      T t = sum_ + x;
      if (abs_value(sum_) >= abs_value(x)) {
        comp_ += (sum_ - t) + x;
      } else {
        comp_ += (x - t) + sum_;
      }
      sum_ = t;
    }
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{0};
  T comp_{0};
};

/// Shortest text that round-trips: 17 significant digits, '.' separator.
std::string format_double(double x);
/// Exact "a/b" text; integers print without a denominator.
std::string format_rational(const Rational& x);

/// Parses "a/b", an integer, or a plain decimal literal into an exact rational.
/// Throws InvalidParams on malformed text.
Rational parse_rational(std::string_view text);

}  // namespace runsdist
