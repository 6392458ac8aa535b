// Factorial moments from derivatives of the pgf at s = 1.
//
// M^_(n) = n! p^{rk} sum_v C(v+rk, n) sum_d (-1)^d C(r, d) p^d T(v-d), where
// T(j) = sum_i (-1)^i (q p^k)^i C(r+i-1, r-1) C(r+j-ik-1, r+i-1)
// is the coefficient of s^j in (1 - s + q p^k s^{k+1})^{-r}.
//
// The terms of T(j) peak far above T(j) itself, so each T(j) is summed in MPFR
// at a precision set from the peak term and the decay rate of the pmf.

#include <mpfr.h>

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "runsdist/moments.hpp"

namespace runsdist {

namespace {

thread_local long g_last_outer_terms = 0;

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  Mpfr(Mpfr&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Mpfr& operator=(Mpfr&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

double log_binom(double a, double b) {
  int sign = 0;
  return lgamma_r(a + 1, &sign) - lgamma_r(b + 1, &sign) - lgamma_r(a - b + 1, &sign);
}

// Dominant root of z^k (1 - z) = p^k q other than z = p; both lie on either
// side of the maximiser k/(k+1).
double dominant_root(int k, double p) {
  const double q = 1.0 - p;
  const double target = std::pow(p, k) * q;
  const double peak = static_cast<double>(k) / (k + 1);
  double lo;
  double hi;
  if (p < peak) {
    lo = peak;
    hi = 1.0;
  } else {
    lo = 0.0;
    hi = peak;
  }
  const bool increasing = lo == 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = std::pow(mid, k) * (1.0 - mid) - target;
    if ((f < 0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct TermSetup {
  int k;
  int r;
  double p;
  double q;
  double log2_lambda;
};

struct Peak {
  long index;
  double log2_value;
};

// Largest |term| of T(j); the term ratio decreases in i, so bisect on it.
Peak find_peak(const TermSetup& s, long j) {
  const long i_max = j / (s.k + 1);
  const double log_qpk = std::log(s.q) + s.k * std::log(s.p);
  auto log_term = [&](long i) {
    return i * log_qpk + log_binom(s.r + i - 1, s.r - 1) +
           log_binom(static_cast<double>(s.r + j - i * s.k - 1), static_cast<double>(s.r + i - 1));
  };
  long lo = 0;
  long hi = i_max;
  while (lo < hi) {
    const long mid = (lo + hi) / 2;
    if (log_term(mid + 1) >= log_term(mid)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return {lo, log_term(lo) / std::log(2.0)};
}

constexpr long kGuardBits = 112;

Mpfr compute_T(const TermSetup& s, long j) {
  const Peak peak = find_peak(s, j);
  const double bits = peak.log2_value - j * s.log2_lambda + kGuardBits;
  const auto prec = static_cast<mpfr_prec_t>(std::max(128.0, std::ceil(bits)));
  Mpfr qpk(prec);
  mpfr_set_d(qpk.get(), s.q, MPFR_RNDN);
  for (int t = 0; t < s.k; ++t) mpfr_mul_d(qpk.get(), qpk.get(), s.p, MPFR_RNDN);

  // Absolute accuracy target: well below lambda^j.
  const long floor_exp = static_cast<long>(std::floor(j * s.log2_lambda)) - kGuardBits + 8;
  const long i_max = j / (s.k + 1);

  Mpfr sum(prec);
  Mpfr term(prec);
  mpfr_set_ui(sum.get(), 0, MPFR_RNDN);
  // i = 0: C(r+j-1, r-1).
  mpfr_set_ui(term.get(), 1, MPFR_RNDN);
  for (long t = 1; t <= s.r - 1; ++t) {
    mpfr_mul_ui(term.get(), term.get(), static_cast<unsigned long>(j + t), MPFR_RNDN);
    mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(t), MPFR_RNDN);
  }
  for (long i = 0;; ++i) {
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
    if (i >= i_max) break;
    // term_{i+1} / term_i = -(q p^k) (r+i)/(i+1) (A-B)_(k+1) / ((B+1) (A)_(k)),
    // with A = r+j-ik-1 and B = r+i-1.
    const long a = s.r + j - i * s.k - 1;
    const long b = s.r + i - 1;
    mpfr_mul(term.get(), term.get(), qpk.get(), MPFR_RNDN);
    mpfr_neg(term.get(), term.get(), MPFR_RNDN);
    mpfr_mul_ui(term.get(), term.get(), static_cast<unsigned long>(s.r + i), MPFR_RNDN);
    mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(i + 1), MPFR_RNDN);
    for (long t = 0; t <= s.k; ++t) {
      mpfr_mul_ui(term.get(), term.get(), static_cast<unsigned long>(a - b - t), MPFR_RNDN);
    }
    mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(b + 1), MPFR_RNDN);
    for (long t = 0; t < s.k; ++t) {
      mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(a - t), MPFR_RNDN);
    }
    if (mpfr_zero_p(term.get())) break;
    // Past the peak the terms shrink at least geometrically; stop once negligible.
    if (i + 1 > peak.index + 1 && mpfr_get_exp(term.get()) < floor_exp) {
      mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
      break;
    }
  }
  return sum;
}

struct Tail {
  std::deque<Quad> incs;
};

}  // namespace

MomentSet<double> factorial_moments_pgf(const RunParams<double>& params, int order_max,
                                        const PgfMomentOptions& options) {
  if (order_max < 1) throw InvalidParams("moment order must be >= 1");
  if (!(options.tail_tol > 0)) throw InvalidParams("tail_tol must be positive");
  const int k = params.k();
  const int r = params.r();
  const long rk = params.rk();
  const double lambda = dominant_root(k, params.p());
  const TermSetup setup{k, r, params.p(), params.q(), std::log2(lambda)};

  // p^{rk} and (-1)^d C(r,d) p^d as MPFR constants at a generous precision.
  const mpfr_prec_t cprec = 256;
  Mpfr prk(cprec);
  mpfr_set_d(prk.get(), params.p(), MPFR_RNDN);
  mpfr_pow_ui(prk.get(), prk.get(), static_cast<unsigned long>(rk), MPFR_RNDN);

  std::vector<Quad> moments(static_cast<std::size_t>(order_max + 1), Quad(0));
  std::vector<Tail> tails(static_cast<std::size_t>(order_max + 1));
  std::deque<Mpfr> window;  // T(v-r) .. T(v)

  constexpr long kBlock = 64;
  std::vector<Mpfr> block;
  long block_start = 0;
  long v = 0;
  for (;; ++v) {
    if (v >= options.max_terms) {
      g_last_outer_terms = v;
      throw NonConvergentTail("pgf-derivative sum did not converge within " +
                              std::to_string(options.max_terms) + " terms");
    }
    if (v == block_start + static_cast<long>(block.size())) {
      block_start = v;
      block.clear();
      for (long t = 0; t < kBlock; ++t) block.emplace_back(MPFR_PREC_MIN);
      if (options.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long t = 0; t < kBlock; ++t) block[t] = compute_T(setup, block_start + t);
      } else {
        for (long t = 0; t < kBlock; ++t) block[t] = compute_T(setup, block_start + t);
      }
    }
    window.push_back(std::move(block[static_cast<std::size_t>(v - block_start)]));
    if (static_cast<long>(window.size()) > r + 1) window.pop_front();

    // P_{v+rk} = p^{rk} sum_d (-1)^d C(r,d) p^d T(v-d).
    mpfr_prec_t prec = cprec;
    for (const auto& t : window) prec = std::max(prec, mpfr_get_prec(t.get()));
    Mpfr pv(prec);
    Mpfr coef(prec);
    Mpfr tmp(prec);
    mpfr_set_ui(pv.get(), 0, MPFR_RNDN);
    mpfr_set_ui(coef.get(), 1, MPFR_RNDN);
    const long d_max = std::min<long>(r, v);
    for (long d = 0; d <= d_max; ++d) {
      const auto& t = window[window.size() - 1 - static_cast<std::size_t>(d)];
      mpfr_mul(tmp.get(), coef.get(), t.get(), MPFR_RNDN);
      mpfr_add(pv.get(), pv.get(), tmp.get(), MPFR_RNDN);
      // coef *= -(r-d)/(d+1) p
      mpfr_mul_ui(coef.get(), coef.get(), static_cast<unsigned long>(r - d), MPFR_RNDN);
      mpfr_div_ui(coef.get(), coef.get(), static_cast<unsigned long>(d + 1), MPFR_RNDN);
      mpfr_mul_d(coef.get(), coef.get(), -params.p(), MPFR_RNDN);
    }
    mpfr_mul(pv.get(), pv.get(), prk.get(), MPFR_RNDN);
    const Quad prob = static_cast<Quad>(mpfr_get_ld(pv.get(), MPFR_RNDN));

    // Increments (N)_n P_N for N = v + rk; the n! factor is folded in here.
    bool converged = v >= 10;
    Quad weight(1);
    const Quad big_n(static_cast<double>(v + rk));
    for (int n = 1; n <= order_max; ++n) {
      weight *= big_n - Quad(n - 1);
      const Quad inc = weight * prob;
      moments[n] += inc;
      auto& incs = tails[n].incs;
      incs.push_back(inc);
      if (incs.size() > 11) incs.pop_front();
      if (!converged) continue;
      if (incs.size() < 11 || !(inc > 0)) {
        converged = false;
        continue;
      }
      Quad rho(0);
      for (std::size_t t = 1; t < incs.size(); ++t) rho = std::max(rho, Quad(incs[t] / incs[t - 1]));
      rho = std::max(rho, Quad(lambda));
      if (!(rho < 1)) {
        converged = false;
        continue;
      }
      const Quad bound = inc * rho / (Quad(1) - rho);
      if (bound > Quad(options.tail_tol) * moments[n]) converged = false;
    }
    if (converged) break;
  }
  g_last_outer_terms = v + 1;

  MomentSet<double> out{MomentKind::Factorial, IndexScheme::Full, {}};
  for (int n = 1; n <= order_max; ++n) out.values.push_back(static_cast<double>(moments[n]));
  return out;
}

long last_pgf_outer_terms() { return g_last_outer_terms; }

}  // namespace runsdist
