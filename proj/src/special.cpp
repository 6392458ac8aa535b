#include "runsdist/special.hpp"

#include <algorithm>
#include <gmp.h>

namespace runsdist {

namespace {

BigInt binom_nonneg(long a, long b) {
  BigInt out;
  mpz_bin_uiui(out.backend().data(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  return out;
}

}  // namespace

BigInt binom(long a, long b, BinomConvention convention) {
  if (b < 0) return 0;
  if (a < 0) {
    if (convention == BinomConvention::ZeroOnNegativeTop) return 0;
    BigInt v = binom_nonneg(b - a - 1, b);
    return (b % 2 == 0) ? v : BigInt(-v);
  }
  if (b > a) return 0;
  return binom_nonneg(a, b);
}

PascalTriangle::PascalTriangle(long max_top) {
  rows_.reserve(static_cast<std::size_t>(std::max(0L, max_top) + 1));
  rows_.push_back({BigInt(1)});
  for (long a = 1; a <= max_top; ++a) {
    const auto& prev = rows_.back();
    std::vector<BigInt> row(static_cast<std::size_t>(a + 1));
    row.front() = 1;
    row.back() = 1;
    for (long b = 1; b < a; ++b) row[b] = prev[b - 1] + prev[b];
    rows_.push_back(std::move(row));
  }
}

BigInt PascalTriangle::operator()(long a, long b) const {
  if (b < 0 || a < 0 || b > a) return 0;
  if (a > max_top()) return binom(a, b);
  return rows_[a][b];
}

BigInt stirling2(int n, int j) {
  if (n < 0 || j < 0 || j > n) return 0;
  if (n == 0) return j == 0 ? 1 : 0;
  std::vector<BigInt> row(static_cast<std::size_t>(n + 1), BigInt(0));
  row[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int i = m; i >= 1; --i) row[i] = BigInt(i) * row[i] + row[i - 1];
    row[0] = 0;
  }
  return row[j];
}

EulerianTable::EulerianTable(int max_order) {
  if (max_order < 0) throw InvalidParams("Eulerian table order must be >= 0");
  rows_.push_back({BigInt(1)});
  for (int i = 1; i <= max_order; ++i) {
    std::vector<BigInt> row;
    for (int j = 0; j <= i - 1; ++j) {
      BigInt acc = 0;
      for (int s = 0; s <= j; ++s) {
        BigInt term = binom(i + 1, s) * ipow(BigInt(j + 1 - s), i);
        if (s % 2 == 0) {
          acc += term;
        } else {
          acc -= term;
        }
      }
      row.push_back(acc);
    }
    rows_.push_back(std::move(row));
  }
}

EulerianTable EulerianTable::from_recurrence(int max_order) {
  if (max_order < 0) throw InvalidParams("Eulerian table order must be >= 0");
  EulerianTable t;
  t.rows_.push_back({BigInt(1)});
  if (max_order >= 1) t.rows_.push_back({BigInt(1)});
  for (int i = 2; i <= max_order; ++i) {
    const auto& prev = t.rows_.back();
    std::vector<BigInt> row(static_cast<std::size_t>(i), BigInt(0));
    for (int j = 0; j <= i - 1; ++j) {
      BigInt v = 0;
      if (j <= i - 2) v += BigInt(j + 1) * prev[j];
      if (j >= 1) v += BigInt(i - j) * prev[j - 1];
      row[j] = v;
    }
    t.rows_.push_back(std::move(row));
  }
  return t;
}

std::span<const BigInt> EulerianTable::row(int i) const {
  if (i < 0 || i > max_order()) {
    throw OrderExceedsTable("Eulerian order " + std::to_string(i) + " exceeds table order " +
                            std::to_string(max_order()));
  }
  return rows_[static_cast<std::size_t>(i)];
}

Hyp2F1Spec::Hyp2F1Spec(long a_, long b_, long c_) : a(a_), b(b_), c(c_) {
  if (a > 0 && b > 0) throw InvalidParams("2F1 does not terminate: no upper parameter <= 0");
  const long m = last_index();
  if (c <= 0 && -c <= m - 1) {
    throw ZeroDenominatorPochhammer("(c)_i vanishes before the 2F1 series terminates");
  }
}

long Hyp2F1Spec::last_index() const noexcept {
  long m = -1;
  if (a <= 0) m = -a;
  if (b <= 0) m = (m < 0) ? -b : std::min(m, -b);
  return m;
}

}  // namespace runsdist
