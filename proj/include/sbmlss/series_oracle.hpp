#pragma once

// Independent route to f(m,r): expand ((1 - sqrt(1 - 4 z^2)) / (2z))^r as a
// truncated power series with exact rational coefficients. Shares nothing
// with fk_coefficient beyond the Rational type.

#include <cstddef>
#include <vector>

#include "sbmlss/combinatorics.hpp"

namespace sbmlss::oracle {

using Series = std::vector<Rational>;  // Series[i] = coefficient of z^i

// Generalized binomial coefficient binom(1/2, j).
inline Rational binomial_half(int j) {
  Rational out = 1;
  const Rational half(1, 2);
  for (int i = 0; i < j; ++i) out = out * (half - i) / (i + 1);
  return out;
}

inline Series multiply_truncated(const Series& a, const Series& b, std::size_t order) {
  Series out(order + 1, Rational(0));
  for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Coefficients of (1 - sqrt(1 - 4 z^2)) / (2z) through z^order.
inline Series catalan_generating_series(std::size_t order) {
  // sqrt(1 - 4z^2) = sum_j binom(1/2, j) (-4)^j z^{2j}; drop j = 0, negate,
  // divide by 2z.
  Series out(order + 1, Rational(0));
  Rational minus_four_pow = 1;
  for (std::size_t j = 1; 2 * j - 1 <= order; ++j) {
    minus_four_pow *= -4;
    out[2 * j - 1] = -binomial_half(static_cast<int>(j)) * minus_four_pow / 2;
  }
  return out;
}

// f(m, r) for all 1 <= r <= m <= max_m read from the expansion; result[m][r].
inline std::vector<std::vector<Rational>> fk_by_series(int max_m) {
  const auto order = static_cast<std::size_t>(max_m);
  const Series g = catalan_generating_series(order);
  std::vector<std::vector<Rational>> out(order + 1, std::vector<Rational>(order + 1, Rational(0)));
  Series power(order + 1, Rational(0));
  power[0] = 1;
  for (std::size_t r = 1; r <= order; ++r) {
    power = multiply_truncated(power, g, order);
    for (std::size_t m = 1; m <= order; ++m) out[m][r] = power[m];
  }
  return out;
}

}  // namespace sbmlss::oracle
