#pragma once

// Exact integer coefficients behind every spectral statistic: Catalan
// moments psi_k, Furedi-Komlos coefficients f(m,r), the rescaled Chebyshev
// polynomials P_m(x) = 2 S_m(x/2), the alpha constants of the even-trace
// remainder, and the lower-triangular matrix D linking odd traces to odd
// signed cycles.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sbmlss/errors.hpp"

namespace sbmlss {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Dense row-major matrix over an exact ring.
template <typename T>
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
ExactMatrix<T> operator*(const ExactMatrix<T>& a, const ExactMatrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  ExactMatrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      if (a(i, l) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, l) * b(l, j);
    }
  return out;
}

inline BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (long long i = 1; i <= k; ++i) {
    out *= (n - k + i);
    out /= i;  // exact: out is binom(n-k+i, i) after this step
  }
  return out;
}

// psi_k: the (k/2)-th Catalan number for even k, zero for odd k.
inline BigInt catalan_psi(int k) {
  if (k < 0) throw ParameterError("catalan_psi: k must be nonnegative");
  if (k % 2 != 0) return 0;
  return binomial(k, k / 2) / (k / 2 + 1);
}

// f(m,r) = (r/m) binom(m, (m+r)/2) when m-r is even and 1 <= r <= m; else 0.
inline BigInt fk_coefficient(int m, int r) {
  if (m < 1 || r < 1) throw ParameterError("fk_coefficient: m and r must be positive");
  if (r > m || (m - r) % 2 != 0) return 0;
  BigInt num = binomial(m, (m + r) / 2) * r;
  if (num % m != 0) throw std::logic_error("fk_coefficient: non-integral value");
  return num / m;
}

// Rescaled Chebyshev polynomial; coeffs[j] is the coefficient of x^j.
struct ChebyshevPoly {
  int degree = 0;
  std::vector<BigInt> coeffs;

  const BigInt& operator[](int j) const { return coeffs.at(static_cast<std::size_t>(j)); }

  // Coefficient with out-of-range indices read as zero.
  BigInt coeff(int j) const {
    return (j < 0 || j > degree) ? BigInt(0) : coeffs[static_cast<std::size_t>(j)];
  }

  // Horner evaluation in exact arithmetic.
  BigInt operator()(const BigInt& x) const {
    BigInt acc = 0;
    for (int j = degree; j >= 0; --j) acc = acc * x + coeffs[static_cast<std::size_t>(j)];
    return acc;
  }
};

// P_0 .. P_max_degree via P_{m+1}[j] = P_m[j-1] - P_{m-1}[j].
inline std::vector<ChebyshevPoly> chebyshev_family(int max_degree) {
  if (max_degree < 0) throw ParameterError("chebyshev_family: negative degree");
  std::vector<ChebyshevPoly> out;
  out.reserve(static_cast<std::size_t>(max_degree) + 1);
  out.push_back({0, {BigInt(2)}});
  if (max_degree >= 1) out.push_back({1, {BigInt(0), BigInt(1)}});
  for (int m = 1; m < max_degree; ++m) {
    const auto& cur = out[static_cast<std::size_t>(m)];
    const auto& prev = out[static_cast<std::size_t>(m - 1)];
    ChebyshevPoly next{m + 1, std::vector<BigInt>(static_cast<std::size_t>(m) + 2, BigInt(0))};
    for (int j = 1; j <= m + 1; ++j) next.coeffs[static_cast<std::size_t>(j)] = cur.coeff(j - 1);
    for (int j = 0; j <= m - 1; ++j) next.coeffs[static_cast<std::size_t>(j)] -= prev.coeff(j);
    out.push_back(std::move(next));
  }
  return out;
}

inline ChebyshevPoly chebyshev_poly(int m) {
  auto family = chebyshev_family(m);
  return std::move(family.back());
}

// alpha_{1,2k} = 2^{2k-1} - binom(2k,k)(5k+1)/(2(k+1)) + binom(k+1,2) psi_{2k}
//                - 3 binom(2k,k+2)
inline BigInt alpha1(int k) {
  if (k < 2) throw ParameterError("alpha1: k must be at least 2");
  Rational value = Rational(BigInt(1) << (2 * k - 1));
  value -= Rational(binomial(2 * k, k) * (5 * k + 1), BigInt(2 * (k + 1)));
  value += Rational(binomial(k + 1, 2) * catalan_psi(2 * k));
  value -= Rational(3 * binomial(2 * k, k + 2));
  if (denominator(value) != 1) throw std::logic_error("alpha1: non-integral value");
  return numerator(value);
}

// alpha_{2,2k} = binom(2k, k+2).
inline BigInt alpha2(int k) {
  if (k < 2) throw ParameterError("alpha2: k must be at least 2");
  return binomial(2 * k, k + 2);
}

// k x k lower-triangular D with rows/columns indexed by odd degrees
// 3, 5, ..., 2k+1: entry (i,j) = (2i+3) f(2i+3, 2j+3) / (2j+3) below the
// diagonal, 1 on it. Indices here are 0-based.
inline ExactMatrix<Rational> d_matrix(int k) {
  if (k < 1) throw ParameterError("d_matrix: k must be positive");
  const auto n = static_cast<std::size_t>(k);
  ExactMatrix<Rational> d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, i) = 1;
    const int row_deg = 2 * static_cast<int>(i) + 3;
    for (std::size_t j = 0; j < i; ++j) {
      const int col_deg = 2 * static_cast<int>(j) + 3;
      d(i, j) = Rational(fk_coefficient(row_deg, col_deg) * row_deg, BigInt(col_deg));
    }
  }
  return d;
}

// Inverse of d_matrix(k), read off the Chebyshev coefficients:
// entry (i,j) = P_{2i+3}[2j+3].
inline ExactMatrix<BigInt> d_matrix_inverse(int k) {
  if (k < 1) throw ParameterError("d_matrix_inverse: k must be positive");
  const auto cheb = chebyshev_family(2 * k + 1);
  const auto n = static_cast<std::size_t>(k);
  ExactMatrix<BigInt> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      inv(i, j) = cheb[2 * i + 3].coeff(2 * static_cast<int>(j) + 3);
  return inv;
}

inline ExactMatrix<Rational> to_rational(const ExactMatrix<BigInt>& m) {
  ExactMatrix<Rational> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

// Immutable tables up to a fixed maximum degree. Safe to share across threads
// once constructed.
class CoeffTables {
 public:
  explicit CoeffTables(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw ParameterError("CoeffTables: negative max degree");
    cheb_ = chebyshev_family(max_degree);
    psi_.reserve(static_cast<std::size_t>(max_degree) + 1);
    for (int k = 0; k <= max_degree; ++k) psi_.push_back(catalan_psi(k));
    f_.assign(static_cast<std::size_t>(max_degree) + 1,
              std::vector<BigInt>(static_cast<std::size_t>(max_degree) + 1, BigInt(0)));
    for (int m = 1; m <= max_degree; ++m)
      for (int r = 1; r <= m; ++r) f_[m][r] = fk_coefficient(m, r);
    cheb_d_.resize(cheb_.size());
    for (std::size_t m = 0; m < cheb_.size(); ++m)
      for (const auto& c : cheb_[m].coeffs) cheb_d_[m].push_back(c.convert_to<double>());
  }

  int max_degree() const { return max_degree_; }
  const BigInt& psi(int k) const { return psi_.at(static_cast<std::size_t>(k)); }
  const BigInt& f(int m, int r) const { return f_.at(static_cast<std::size_t>(m)).at(static_cast<std::size_t>(r)); }
  const ChebyshevPoly& chebyshev(int m) const { return cheb_.at(static_cast<std::size_t>(m)); }
  // Chebyshev coefficients rounded to double, for floating-point consumers.
  const std::vector<double>& chebyshev_double(int m) const { return cheb_d_.at(static_cast<std::size_t>(m)); }

 private:
  int max_degree_;
  std::vector<ChebyshevPoly> cheb_;
  std::vector<std::vector<double>> cheb_d_;
  std::vector<BigInt> psi_;
  std::vector<std::vector<BigInt>> f_;
};

// Process-wide table large enough for any statistic the library evaluates.
inline const CoeffTables& default_tables() {
  static const CoeffTables tables(128);
  return tables;
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace sbmlss
