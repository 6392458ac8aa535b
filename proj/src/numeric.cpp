#include "runsdist/numeric.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include "runsdist/errors.hpp"

namespace runsdist {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                           std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string format_rational(const Rational& x) {
  const BigInt num = mp::numerator(x);
  const BigInt den = mp::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw InvalidParams("not a number: '" + std::string(whole) + "'");
  }
  BigInt v{std::string(s)};
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InvalidParams("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  // Decimal literal, optionally with an exponent.
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    exp10 = parse_integer(text.substr(e + 1), text).convert_to<long>();
  }
  std::string digits;
  bool neg = false;
  if (!mant.empty() && (mant.front() == '-' || mant.front() == '+')) {
    neg = mant.front() == '-';
    mant.remove_prefix(1);
  }
  if (auto dot = mant.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mant.substr(0, dot);
    std::string_view fp = mant.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp))) {
      throw InvalidParams("not a number: '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(mant)) throw InvalidParams("not a number: '" + std::string(text) + "'");
    digits = std::string(mant);
  }
  Rational value{BigInt(digits)};
  if (exp10 > 0) value *= Rational(ipow(BigInt(10), exp10));
  if (exp10 < 0) value /= Rational(ipow(BigInt(10), -exp10));
  return neg ? Rational(-value) : value;
}

}  // namespace runsdist
