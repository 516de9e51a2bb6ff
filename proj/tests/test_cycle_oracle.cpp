#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sbmlss/cycle_oracle.hpp"

using namespace sbmlss;

namespace {

GraphSample triangle() {
  GraphSample g(3);
  g.set_edge(0, 1);
  g.set_edge(1, 2);
  g.set_edge(0, 2);
  return g;
}

// Direct O(n^3) version of the T_6 correction.
double t6_direct(const GraphSample& g, double p) {
  const int n = g.n();
  const double s = n * p * (1 - p);
  double mixed = 0.0, six = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double xab = g.x(a, b) - p;
      six += std::pow(xab, 6);
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        mixed += std::pow(xab, 4) * std::pow(g.x(b, c) - p, 2);
      }
    }
  return 6 * mixed / std::pow(s, 3) + six / std::pow(s, 3) + 4;
}

double corr(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST(SignedCycle, TriangleAtHalf) { EXPECT_NEAR(signed_cycle_bruteforce(triangle(), 0.5, 3), 1.154700, 1e-6); }

TEST(SignedCycle, Guards) {
  EXPECT_THROW(signed_cycle_bruteforce(GraphSample(100), 0.5, 5), ComplexityError);
  EXPECT_THROW(signed_cycle_bruteforce(triangle(), 0.5, 2), ParameterError);
  EXPECT_THROW(signed_cycle_bruteforce(triangle(), 1.0, 3), ParameterError);
}

TEST(SignedCycle, TriangleEqualsChebyshevTrace) {
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 5 + rep % 46;
    const double p = 0.05 + 0.9 * (rep % 10) / 10.0;
    const auto g = sample_er(n, p, 500, rep);
    const auto s = eigenvalues(center_known(g, p));
    EXPECT_NEAR(signed_cycle_bruteforce(g, p, 3), cycle_from_lss_odd(s, 3), 1e-9) << rep;
  }
}

TEST(SignedCycle, FourCycleMatchesClosedWalkCount) {
  // Tr A^4 = C_4 + 2 sum_i (sum_j a_ij^2)^2 - sum_{ij} a_ij^4 for zero-diagonal A.
  const auto g = sample_er(14, 0.4, 77);
  const auto m = center_known(g, 0.4);
  const auto& a = m.entries();
  double deg2 = 0.0, four = 0.0;
  for (int i = 0; i < 14; ++i) {
    double row = 0.0;
    for (int j = 0; j < 14; ++j) {
      row += a(i, j) * a(i, j);
      four += std::pow(a(i, j), 4);
    }
    deg2 += row * row;
  }
  EXPECT_NEAR(signed_cycle_bruteforce(g, 0.4, 4), bruteforce_trace(m, 4) - 2 * deg2 + four, 1e-9);
}

TEST(BruteforceTrace, Guard) { EXPECT_THROW(bruteforce_trace(center_known(GraphSample(501), 0.5), 2), ComplexityError); }

TEST(TCorrections, EmptyGraphAtHalf) {
  EXPECT_NEAR(t4_correction(GraphSample(3), 0.5), 0.6667, 1e-4);
}

TEST(TCorrections, MatchDirectSums) {
  const auto g = sample_er(25, 0.3, 3);
  const int n = 25;
  const double p = 0.3, s = n * p * (1 - p);
  double four = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) four += std::pow(g.x(i, j) - p, 4);
  EXPECT_NEAR(t4_correction(g, p), four / (s * s), 1e-12);
  EXPECT_NEAR(t6_correction(g, p), t6_direct(g, p), 1e-10);
}

TEST(ExpectedT, PlugInFactors) {
  const double p = 0.3;
  EXPECT_NEAR(expected_T(2, 100, p, TCorrectionMode::plug_in(MomentFactor::Vanishing)), 1 / p, 1e-12);
  EXPECT_NEAR(expected_T(3, 100, p, TCorrectionMode::plug_in(MomentFactor::Vanishing)), 4 + 6 / p, 1e-12);
  EXPECT_NEAR(expected_T(2, 100, p, TCorrectionMode::plug_in(MomentFactor::BernoulliVariance)),
              (1 - 2 * p) * (1 - 2 * p) / (p * (1 - p)), 1e-12);
  EXPECT_NEAR(expected_T(2, 100, p, TCorrectionMode::plug_in()), (1 - 3 * p + 3 * p * p) / (p * (1 - p)), 1e-12);
}

TEST(ExpectedT, ModeAndRangeErrors) {
  EXPECT_THROW(expected_T(4, 100, 0.3, TCorrectionMode::exact_small()), ModeError);
  EXPECT_THROW(expected_T(1, 100, 0.3, TCorrectionMode::plug_in()), ParameterError);
  EXPECT_THROW(expected_T(2, 100, 0.0, TCorrectionMode::plug_in()), ParameterError);
  EXPECT_THROW(TCorrectionMode::monte_carlo(0, 1), ParameterError);
}

TEST(ExpectedT, ExactSmallMatchesSimulation) {
  const int n = 30, reps = 4000;
  const double p = 0.2;
  double m4 = 0, m6 = 0;
  for (int r = 0; r < reps; ++r) {
    const auto g = sample_er(n, p, 99, r);
    m4 += t4_correction(g, p) / reps;
    m6 += t6_correction(g, p) / reps;
  }
  EXPECT_NEAR(m4, expected_T(2, n, p, TCorrectionMode::exact_small()), 0.02);
  EXPECT_NEAR(m6, expected_T(3, n, p, TCorrectionMode::exact_small()), 0.2);
}

TEST(ExpectedT, MonteCarloCloseToPlugIn) {
  const auto mc = expected_T(2, 200, 0.3, TCorrectionMode::monte_carlo(40, 5));
  EXPECT_NEAR(mc, expected_T(2, 200, 0.3, TCorrectionMode::plug_in()), 0.3);
  EXPECT_DOUBLE_EQ(mc, expected_T(2, 200, 0.3, TCorrectionMode::monte_carlo(40, 5)));
}

TEST(CycleFromLss, ParityChecks) {
  const Spectrum s{{1.0, -1.0}};
  EXPECT_THROW(cycle_from_lss_odd(s, 4), ParameterError);
  EXPECT_THROW(cycle_from_lss_odd(s, 1), ParameterError);
  const auto g = sample_er(10, 0.5, 1);
  EXPECT_THROW(cycle_from_lss_even(s, g, 0.5, 5, TCorrectionMode::exact_small()), ModeError);
  EXPECT_THROW(cycle_from_lss_even(s, g, 0.5, 2, TCorrectionMode::exact_small()), ParameterError);
}

TEST(CycleFromLss, FourCycleWithExactT4CorrelatesWithBruteForce) {
  std::vector<double> bf, lss;
  for (int r = 0; r < 60; ++r) {
    const auto g = sample_er(18, 0.6, 43, r);
    const double p = 0.6;
    const auto s = eigenvalues(center_known(g, p));
    bf.push_back(signed_cycle_bruteforce(g, p, 4));
    lss.push_back(cycle_from_lss_even(s, g, p, 4, TCorrectionMode::exact_small()));
  }
  EXPECT_GT(corr(bf, lss), 0.9);
}

TEST(CycleFromLss, FiveCycleCorrelatesWithBruteForce) {
  std::vector<double> bf, lss;
  for (int r = 0; r < 100; ++r) {
    const auto g = sample_er(25, 0.6, 41, r);
    const double p = 0.6;
    const auto s = eigenvalues(center_known(g, p));
    bf.push_back(signed_cycle_bruteforce(g, p, 5));
    lss.push_back(cycle_from_lss_odd(s, 5));
  }
  EXPECT_GT(corr(bf, lss), 0.9);
}
