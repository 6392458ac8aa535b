#include "runsdist/core.hpp"

#include "runsdist/special.hpp"

namespace runsdist {

std::string_view to_string(IndexScheme s) { return s == IndexScheme::Full ? "full" : "cut"; }

std::string_view to_string(MomentKind k) {
  switch (k) {
    case MomentKind::Factorial: return "factorial";
    case MomentKind::Raw: return "raw";
    case MomentKind::Central: return "central";
  }
  return "?";
}

long convert_index(long n, IndexScheme from, IndexScheme to, long rk) {
  if (from == to) return n;
  return from == IndexScheme::Full ? n - rk : n + rk;
}

void VariantSpec::validate(int k) const {
  if (overlap >= k) throw InvalidParams("overlap must be < k");
  if (type2 && overlap != 0) throw InvalidParams("type II cannot be combined with overlap or gap");
}

std::string to_string(const VariantSpec& v) {
  if (v.type2) return "type2";
  if (v.overlap == 0) return "type1";
  if (v.overlap > 0) return "overlap=" + std::to_string(v.overlap);
  return "gap=" + std::to_string(-v.overlap);
}

namespace {

template <class T>
void require_cut(const MomentSet<T>& m, MomentKind kind) {
  if (m.kind != kind) throw OrderMismatch("moment kind does not match the shift");
  if (m.scheme != IndexScheme::Cut) throw OrderMismatch("shift expects Cut-scheme moments");
}

}  // namespace

template <class T>
MomentSet<T> shift_moments_by(const MomentSet<T>& moments, long offset) {
  if (moments.kind == MomentKind::Central) {
    throw OrderMismatch("central moments do not shift");
  }
  const bool factorial = moments.kind == MomentKind::Factorial;
  MomentSet<T> out{moments.kind, moments.scheme, {}};
  const T a(offset);
  for (int n = 1; n <= moments.order_max(); ++n) {
    T acc(0);
    for (int i = 0; i <= n; ++i) {
      const T weight = factorial ? falling(a, i) : ipow(a, i);
      acc += from_integer<T>(binom(n, i)) * moments.order(n - i) * weight;
    }
    out.values.push_back(acc);
  }
  return out;
}

template <class T>
MomentSet<T> shift_factorial_moments(const MomentSet<T>& cut_moments, const RunParams<T>& params) {
  require_cut(cut_moments, MomentKind::Factorial);
  MomentSet<T> out = shift_moments_by(cut_moments, params.rk());
  out.scheme = IndexScheme::Full;
  return out;
}

template <class T>
MomentSet<T> shift_raw_moments(const MomentSet<T>& cut_moments, const RunParams<T>& params) {
  require_cut(cut_moments, MomentKind::Raw);
  MomentSet<T> out = shift_moments_by(cut_moments, params.rk());
  out.scheme = IndexScheme::Full;
  return out;
}

ProbabilityArg parse_probability(std::string_view text) {
  ProbabilityArg arg;
  arg.exact = parse_rational(text);
  arg.mode = text.find('/') != std::string_view::npos ? NumberMode::Exact : NumberMode::Float;
  if (!(arg.exact > 0) || !(arg.exact < 1)) {
    throw InvalidParams("p must lie in (0, 1), got '" + std::string(text) + "'");
  }
  arg.value = arg.exact.convert_to<double>();
  return arg;
}

#define RUNSDIST_INSTANTIATE(T)                                                           \
  template MomentSet<T> shift_moments_by(const MomentSet<T>&, long);                      \
  template MomentSet<T> shift_factorial_moments(const MomentSet<T>&, const RunParams<T>&); \
  template MomentSet<T> shift_raw_moments(const MomentSet<T>&, const RunParams<T>&);

RUNSDIST_INSTANTIATE(double)
RUNSDIST_INSTANTIATE(Quad)
RUNSDIST_INSTANTIATE(Rational)

#undef RUNSDIST_INSTANTIATE

}  // namespace runsdist
