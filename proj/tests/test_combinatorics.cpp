#include <gtest/gtest.h>

#include <cmath>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sbmlss/combinatorics.hpp"
#include "sbmlss/series_oracle.hpp"

using namespace sbmlss;

TEST(CatalanPsi, SmallValues) {
  EXPECT_EQ(catalan_psi(0), 1);
  EXPECT_EQ(catalan_psi(3), 0);
  EXPECT_EQ(catalan_psi(4), 2);
  EXPECT_EQ(catalan_psi(6), 5);
  EXPECT_EQ(catalan_psi(2), 1);
  EXPECT_THROW(catalan_psi(-1), ParameterError);
}

TEST(CatalanPsi, LargeValueIsExact) {
  // C_40 overflows nothing here but binom(80,40) does overflow 64 bits.
  EXPECT_EQ(catalan_psi(80), BigInt("2622127042276492108820"));
}

TEST(FkCoefficient, Examples) {
  EXPECT_EQ(fk_coefficient(3, 3), 1);
  EXPECT_EQ(fk_coefficient(5, 3), 3);
  EXPECT_EQ(fk_coefficient(4, 3), 0);
  EXPECT_EQ(fk_coefficient(3, 5), 0);
  EXPECT_EQ(fk_coefficient(1, 1), 1);
  EXPECT_THROW(fk_coefficient(0, 1), ParameterError);
}

TEST(FkCoefficient, BinomialRelation) {
  for (int m = 1; m <= 40; ++m)
    for (int r = 1; r <= m; ++r) {
      if ((m - r) % 2) continue;
      EXPECT_EQ(fk_coefficient(m, r) * m, binomial(m, (m + r) / 2) * r) << m << "," << r;
    }
}

TEST(FkCoefficient, AgreesWithSeriesOracle) {
  const auto series = oracle::fk_by_series(20);
  for (int m = 1; m <= 20; ++m)
    for (int r = 1; r <= m; ++r) EXPECT_EQ(Rational(fk_coefficient(m, r)), series[m][r]) << m << "," << r;
}

TEST(FkCoefficient, RowSumBound) {
  for (int m = 1; m <= 40; ++m) {
    BigInt total = 0;
    for (int r = 1; r <= m; ++r) total += fk_coefficient(m, r);
    EXPECT_LE(total, BigInt(1) << (m - 1)) << m;
  }
}

TEST(Chebyshev, LowDegrees) {
  EXPECT_EQ(chebyshev_poly(0).coeffs, std::vector<BigInt>{2});
  EXPECT_EQ(chebyshev_poly(1).coeffs, (std::vector<BigInt>{0, 1}));
  EXPECT_EQ(chebyshev_poly(2).coeffs, (std::vector<BigInt>{-2, 0, 1}));
  EXPECT_EQ(chebyshev_poly(3).coeffs, (std::vector<BigInt>{0, -3, 0, 1}));
}

TEST(Chebyshev, ParityLeadingAndRecurrence) {
  const auto fam = chebyshev_family(60);
  for (int m = 1; m <= 60; ++m) {
    const auto& p = fam[m];
    ASSERT_EQ(p.coeffs.size(), static_cast<std::size_t>(m) + 1);
    EXPECT_EQ(p[m], 1);
    for (int j = 0; j <= m; ++j) {
      if ((m - j) % 2) { EXPECT_EQ(p[j], 0) << m << "," << j; }
    }
    if (m >= 2) {
      for (int j = 0; j <= m; ++j) EXPECT_EQ(p.coeff(j), fam[m - 1].coeff(j - 1) - fam[m - 2].coeff(j));
    }
  }
}

TEST(Chebyshev, CosineIdentity) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  const Real theta = boost::math::constants::pi<Real>() / 5;
  const auto fam = chebyshev_family(40);
  for (int m = 0; m <= 40; ++m) {
    Real acc = 0;
    for (int j = m; j >= 0; --j) acc = acc * 2 * cos(theta) + Real(fam[m][j]);
    EXPECT_LT(abs(acc - 2 * cos(m * theta)), Real(1e-30)) << m;
  }
}

TEST(Chebyshev, PsiCancellation) {
  const auto fam = chebyshev_family(80);
  for (int k = 2; k <= 40; ++k) {
    BigInt plain = 0, weighted = 0;
    for (int r = 0; r <= k; ++r) {
      plain += fam[2 * k].coeff(2 * r) * catalan_psi(2 * r);
      weighted += fam[2 * k].coeff(2 * r) * r * catalan_psi(2 * r);
    }
    EXPECT_EQ(plain, 0) << k;
    EXPECT_EQ(weighted, 0) << k;
  }
}

TEST(Chebyshev, PsiCancellationFailsForDegreeTwo) {
  // P_2 = x^2 - 2: -2 * 1 + 1 * 1 = -1, so the identities start at degree 4.
  const auto p2 = chebyshev_poly(2);
  EXPECT_EQ(p2.coeff(0) * catalan_psi(0) + p2.coeff(2) * catalan_psi(2), -1);
}

TEST(Alpha, QuotedValues) {
  EXPECT_EQ(alpha1(2), 0);
  EXPECT_EQ(alpha1(3), 4);
  EXPECT_EQ(alpha2(2), 1);
  EXPECT_EQ(alpha2(3), 6);
  EXPECT_THROW(alpha1(1), ParameterError);
  EXPECT_THROW(alpha2(1), ParameterError);
}

TEST(Alpha, IntegralAndNonnegativeUpTo60) {
  for (int k = 2; k <= 60; ++k) {
    EXPECT_GE(alpha1(k), 0) << k;
    EXPECT_EQ(alpha2(k), binomial(2 * k, k + 2));
  }
}

TEST(DMatrix, Examples) {
  const auto d1 = d_matrix(1);
  EXPECT_EQ(d1(0, 0), 1);
  EXPECT_EQ(d_matrix_inverse(1)(0, 0), 1);
  const auto d2 = d_matrix(2);
  EXPECT_EQ(d2(1, 0), 5);
  EXPECT_EQ(d2(0, 1), 0);
}

TEST(DMatrix, InverseIsChebyshevCoefficients) {
  for (int k = 1; k <= 15; ++k) {
    const auto d = d_matrix(k);
    const auto inv = to_rational(d_matrix_inverse(k));
    const auto id = ExactMatrix<Rational>::identity(k);
    EXPECT_TRUE(d * inv == id) << k;
    EXPECT_TRUE(inv * d == id) << k;
  }
  const auto inv = d_matrix_inverse(3);
  EXPECT_EQ(inv(2, 0), chebyshev_poly(7).coeff(3));
  EXPECT_EQ(inv(2, 1), chebyshev_poly(7).coeff(5));
}

TEST(CoeffTables, MatchesDirectComputation) {
  const CoeffTables tables(24);
  EXPECT_EQ(tables.max_degree(), 24);
  for (int k = 0; k <= 24; ++k) EXPECT_EQ(tables.psi(k), catalan_psi(k));
  EXPECT_EQ(tables.f(5, 3), 3);
  EXPECT_EQ(tables.chebyshev(7).coeffs, chebyshev_poly(7).coeffs);
  EXPECT_DOUBLE_EQ(tables.chebyshev_double(4)[2], -4.0);
}

TEST(SeriesOracle, BinomialHalf) {
  EXPECT_EQ(oracle::binomial_half(0), 1);
  EXPECT_EQ(oracle::binomial_half(1), Rational(1, 2));
  EXPECT_EQ(oracle::binomial_half(2), Rational(-1, 8));
}
