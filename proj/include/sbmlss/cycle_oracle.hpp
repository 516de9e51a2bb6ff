#pragma once

// Ground truth for the spectral statistics: signed cycles by enumeration,
// traces by repeated multiplication, the T_4/T_6 remainder corrections, the
// expected remainder E[T_{2k}], and signed cycles rebuilt from Chebyshev
// traces.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "sbmlss/combinatorics.hpp"
#include "sbmlss/errors.hpp"
#include "sbmlss/graph_models.hpp"
#include "sbmlss/log.hpp"
#include "sbmlss/spectral_core.hpp"

namespace sbmlss {

// Multiplier standing in for 1/p_av in the alpha_{2,2k} term of E[T_{2k}].
enum class MomentFactor {
  Vanishing,              // 1/p, the p -> 0 form
  BernoulliVariance,      // Var[(x-p)^2] / (p(1-p))^2 = (1-2p)^2 / (p(1-p))
  BernoulliFourthMoment,  // E[(x-p)^4] / (p(1-p))^2 = (1-3p+3p^2) / (p(1-p))
};

inline double moment_factor(double p, MomentFactor factor) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("moment_factor: p must lie in (0,1)");
  switch (factor) {
    case MomentFactor::Vanishing:
      return 1.0 / p;
    case MomentFactor::BernoulliVariance:
      return (1.0 - 2.0 * p) * (1.0 - 2.0 * p) / (p * (1.0 - p));
    case MomentFactor::BernoulliFourthMoment:
      return (1.0 - 3.0 * p + 3.0 * p * p) / (p * (1.0 - p));
  }
  return 0.0;
}

// How the remainder T_{2k} of the even-trace decomposition is supplied.
struct TCorrectionMode {
  enum class Kind { ExactSmall, PlugInExpectation, MonteCarlo };

  Kind kind = Kind::PlugInExpectation;
  MomentFactor factor = MomentFactor::BernoulliFourthMoment;
  int reps = 0;
  std::uint64_t seed = 0;

  static TCorrectionMode exact_small(MomentFactor f = MomentFactor::BernoulliFourthMoment) {
    return {Kind::ExactSmall, f, 0, 0};
  }
  static TCorrectionMode plug_in(MomentFactor f = MomentFactor::BernoulliFourthMoment) {
    return {Kind::PlugInExpectation, f, 0, 0};
  }
  static TCorrectionMode monte_carlo(int reps, std::uint64_t seed) {
    if (reps < 1) throw ParameterError("TCorrectionMode: Monte Carlo needs at least one replicate");
    return {Kind::MonteCarlo, MomentFactor::BernoulliFourthMoment, reps, seed};
  }
};

inline constexpr double kBruteForceGuard = 1e8;

namespace detail {

inline void check_p_ref(double p_ref, const char* what) {
  if (!(p_ref > 0.0 && p_ref < 1.0)) {
    std::ostringstream msg;
    msg << what << ": reference probability " << p_ref << " must lie in (0,1)";
    throw ParameterError(msg.str());
  }
}

// x_ij - p as a dense row-major table.
inline std::vector<double> centered_values(const GraphSample& g, double p_ref) {
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) c[i * n + j] = g.x(static_cast<int>(i), static_cast<int>(j)) - p_ref;
  return c;
}

struct CycleWalker {
  const std::vector<double>& c;
  std::size_t n;
  int k;
  std::size_t start = 0;
  std::vector<char> used;
  double total = 0.0;

  void walk(std::size_t cur, int depth, double prod) {
    const double* row = &c[cur * n];
    if (depth == k) {
      total += prod * row[start];
      return;
    }
    for (std::size_t next = 0; next < n; ++next) {
      if (used[next]) continue;
      used[next] = 1;
      walk(next, depth + 1, prod * row[next]);
      used[next] = 0;
    }
  }
};

}  // namespace detail

// C_{n,k}(G): normalized sum over ordered k-tuples of distinct nodes of the
// centered edge products around the cycle.
inline double signed_cycle_bruteforce(const GraphSample& g, double p_ref, int k) {
  if (k < 3) throw ParameterError("signed_cycle_bruteforce: k must be at least 3");
  detail::check_p_ref(p_ref, "signed_cycle_bruteforce");
  const double work = std::pow(static_cast<double>(g.n()), k);
  if (work > kBruteForceGuard) {
    std::ostringstream msg;
    msg << "signed_cycle_bruteforce: n^k = " << work << " exceeds the enumeration guard of "
        << kBruteForceGuard;
    throw ComplexityError(msg.str());
  }
  const auto c = detail::centered_values(g, p_ref);
  const auto n = static_cast<std::size_t>(g.n());
  detail::CycleWalker walker{c, n, k, 0, std::vector<char>(n, 0)};
  for (std::size_t s = 0; s < walker.n; ++s) {
    walker.start = s;
    walker.used[s] = 1;
    walker.walk(s, 1, 1.0);
    walker.used[s] = 0;
  }
  const double scale = g.n() * p_ref * (1.0 - p_ref);
  return walker.total / std::pow(scale, 0.5 * k);
}

// Tr(M^k) by repeated dense multiplication.
inline double bruteforce_trace(const CenteredMatrix& m, int k) {
  if (k < 1) throw ParameterError("bruteforce_trace: k must be positive");
  if (m.n() > 500) throw ComplexityError("bruteforce_trace: limited to n <= 500");
  Eigen::MatrixXd acc = m.entries();
  for (int i = 1; i < k; ++i) acc = acc * m.entries();
  return acc.trace();
}

// s^-2 sum_{i != j} (x_ij - p)^4 with s = n p (1-p).
inline double t4_correction(const GraphSample& g, double p_ref) {
  detail::check_p_ref(p_ref, "t4_correction");
  const double n = g.n();
  const double edges = static_cast<double>(g.edge_count());
  const double pairs = n * (n - 1.0);
  const double hi = std::pow(1.0 - p_ref, 4), lo = std::pow(p_ref, 4);
  const double sum4 = 2.0 * edges * hi + (pairs - 2.0 * edges) * lo;
  const double s = n * p_ref * (1.0 - p_ref);
  return sum4 / (s * s);
}

// 6 s^-3 sum_{distinct i1,i2,i3} (x_{i1 i2} - p)^4 (x_{i2 i3} - p)^2
//   + s^-3 sum_{i != j} (x_ij - p)^6 + 4
inline double t6_correction(const GraphSample& g, double p_ref) {
  detail::check_p_ref(p_ref, "t6_correction");
  const int n = g.n();
  const double hi = 1.0 - p_ref, lo = -p_ref;
  double mixed = 0.0;  // sum_c F4_c F2_c over centers c
  double sum6 = 0.0;
  for (int c = 0; c < n; ++c) {
    int deg = 0;
    for (int u = 0; u < n; ++u) deg += g.x(c, u);
    const double non = n - 1 - deg;
    const double f2 = deg * hi * hi + non * lo * lo;
    const double f4 = deg * std::pow(hi, 4) + non * std::pow(lo, 4);
    mixed += f4 * f2;
    sum6 += deg * std::pow(hi, 6) + non * std::pow(lo, 6);
  }
  const double s3 = std::pow(n * p_ref * (1.0 - p_ref), 3);
  return 6.0 * (mixed - sum6) / s3 + sum6 / s3 + 4.0;
}

// E[T_{2k}] for half-degrees 0..max_half (entries 0 and 1 are zero).
inline std::vector<double> expected_T_table(int max_half, int n, double p_ref, const TCorrectionMode& mode);

// E[T_{2k}] for the null ER(n, p_ref) graph, half-degree k >= 2.
inline double expected_T(int k, int n, double p_ref, const TCorrectionMode& mode) {
  if (k < 2) throw ParameterError("expected_T: k must be at least 2");
  return expected_T_table(k, n, p_ref, mode)[static_cast<std::size_t>(k)];
}

namespace detail {

// Exact null expectation of the T_4 / T_6 correction statistics.
inline double exact_small_expectation(int k, int n, double p) {
  const double nn = n;
  const double m2 = p * (1.0 - p);
  const double m4 = m2 * (1.0 - 3.0 * p + 3.0 * p * p);
  const double m6 = m2 * (std::pow(1.0 - p, 5) + std::pow(p, 5));
  const double s = nn * m2;
  if (k == 2) return nn * (nn - 1.0) * m4 / (s * s);
  return 6.0 * nn * (nn - 1.0) * (nn - 2.0) * m4 * m2 / (s * s * s) + nn * (nn - 1.0) * m6 / (s * s * s) + 4.0;
}

inline double plug_in_expectation(int k, double p, MomentFactor factor) {
  return to_double(alpha1(k)) + to_double(alpha2(k)) * moment_factor(p, factor);
}

}  // namespace detail

inline std::vector<double> expected_T_table(int max_half, int n, double p_ref, const TCorrectionMode& mode) {
  detail::check_p_ref(p_ref, "expected_T");
  std::vector<double> out(static_cast<std::size_t>(std::max(max_half, 1)) + 1, 0.0);
  if (max_half < 2) return out;
  using Kind = TCorrectionMode::Kind;
  if (mode.kind == Kind::ExactSmall) {
    if (max_half > 3) throw ModeError("expected_T: ExactSmall is only defined for T_4 and T_6");
    for (int k = 2; k <= max_half; ++k) out[static_cast<std::size_t>(k)] = detail::exact_small_expectation(k, n, p_ref);
    return out;
  }
  if (mode.kind == Kind::PlugInExpectation) {
    if (n * p_ref * p_ref < 10.0)
      warn_once("expected_T: n p^2 < 10, the dropped alpha_3/(n p^2) term may bias the plug-in");
    for (int k = 2; k <= max_half; ++k)
      out[static_cast<std::size_t>(k)] = detail::plug_in_expectation(k, p_ref, mode.factor);
    return out;
  }
  // Monte Carlo: E[T_{2k}] = E[Tr(A_cen1^{2k})] - n psi_{2k} + binom(k+1,2) psi_{2k}
  // because the cycle and Tr(A^2) parts of the decomposition are null-centered.
  std::vector<double> mean_trace(out.size(), 0.0);
  for (int rep = 0; rep < mode.reps; ++rep) {
    const auto g = sample_er(n, p_ref, mode.seed, static_cast<std::uint64_t>(rep));
    const auto spec = eigenvalues(center_known(g, p_ref));
    std::vector<double> sq(spec.eigenvalues.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = spec.eigenvalues[i] * spec.eigenvalues[i];
    std::vector<double> pw(sq.size(), 1.0);
    for (int k = 1; k <= max_half; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < sq.size(); ++i) acc += (pw[i] *= sq[i]);
      mean_trace[static_cast<std::size_t>(k)] += acc / mode.reps;
    }
  }
  for (int k = 2; k <= max_half; ++k) {
    const double psi = to_double(catalan_psi(2 * k));
    out[static_cast<std::size_t>(k)] =
        mean_trace[static_cast<std::size_t>(k)] - n * psi + to_double(binomial(k + 1, 2)) * psi;
  }
  return out;
}

inline double cycle_from_lss_odd(const Spectrum& s, int k) {
  if (k < 3 || k % 2 == 0) throw ParameterError("cycle_from_lss_odd: k must be odd and at least 3; use the even variant");
  return chebyshev_lss(s, k);
}

// C_{n,k} ~ Tr P_k - sum_{j=1}^{k/2} P_k[2j] (T_{2j} - binom(j+1,2) psi_{2j}),
// T_2 = 0. ExactSmall takes T_4, T_6 from the graph and plugs in expectations
// above that.
inline double cycle_from_lss_even(const Spectrum& s, const GraphSample& g, double p_ref, int k,
                                  const TCorrectionMode& mode) {
  if (k % 2 != 0) throw ModeError("cycle_from_lss_even: odd k; use cycle_from_lss_odd");
  if (k < 4) throw ParameterError("cycle_from_lss_even: k must be at least 4");
  const int half = k / 2;
  std::vector<double> T;
  if (mode.kind == TCorrectionMode::Kind::ExactSmall) {
    T = expected_T_table(half, g.n(), p_ref, TCorrectionMode::plug_in(mode.factor));
    T[2] = t4_correction(g, p_ref);
    if (half >= 3) T[3] = t6_correction(g, p_ref);
  } else {
    T = expected_T_table(half, g.n(), p_ref, mode);
  }
  const auto& poly = default_tables().chebyshev(k);
  double correction = 0.0;
  for (int j = 1; j <= half; ++j) {
    const double psi = to_double(catalan_psi(2 * j));
    correction += to_double(poly.coeff(2 * j)) * (T[static_cast<std::size_t>(j)] - to_double(binomial(j + 1, 2)) * psi);
  }
  return chebyshev_lss(s, k) - correction;
}

}  // namespace sbmlss
