#pragma once

// Test statistics (L_c, L_a, L_o and the two adaptive statistics), their null
// means and variances, covariance matrices of trace vectors, the decision rule
// and the limiting power curves.

#include <boost/math/distributions/normal.hpp>
#include <Eigen/Dense>
#include "json.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sbmlss/combinatorics.hpp"
#include "sbmlss/csv.hpp"
#include "sbmlss/cycle_oracle.hpp"
#include "sbmlss/errors.hpp"
#include "sbmlss/graph_models.hpp"
#include "sbmlss/spectral_core.hpp"

namespace sbmlss {

// ---------------------------------------------------------------------------
// Normal distribution helpers

inline double normal_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }

inline double normal_upper_tail(double x) {
  return boost::math::cdf(boost::math::complement(boost::math::normal(), x));
}

// z_alpha with P(Z > z_alpha) = alpha.
inline double normal_upper_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("normal_upper_quantile: alpha must lie in (0,1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha));
}

// ---------------------------------------------------------------------------
// Limiting variances and power

namespace detail {
inline void check_contiguous(double t, const char* what) {
  if (!(t >= 0.0)) throw DomainError(std::string(what) + ": t must be nonnegative");
  if (t >= 1.0) throw DomainError(std::string(what) + ": t >= 1 is the singular regime");
}
}  // namespace detail

inline double sigma_sq(double t) {
  detail::check_contiguous(t, "sigma_sq");
  const double t2 = t * t;
  return 0.5 * (-std::log1p(-t2) - t2 - 0.5 * t2 * t2);
}

inline double sigma1_sq(double t) {
  detail::check_contiguous(t, "sigma1_sq");
  const double t2 = t * t;
  return 0.25 * (-std::log((1.0 - t2) / (1.0 + t2)) - 2.0 * t2);
}

inline double optimal_power(double alpha, double t) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("optimal_power: alpha must lie in (0,1)");
  return normal_cdf(-normal_upper_quantile(alpha) + std::sqrt(sigma_sq(t)));
}

inline double optimal_power_odd(double alpha, double t) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("optimal_power_odd: alpha must lie in (0,1)");
  return normal_cdf(-normal_upper_quantile(alpha) + std::sqrt(sigma1_sq(t)));
}

// ---------------------------------------------------------------------------
// Null expectations of Chebyshev traces

// E[T_{2j}] for j = 0..max_half. ExactSmall supplies the exact expectation for
// j = 2, 3 and the plug-in (with the mode's factor) above that.
inline std::vector<double> null_T_expectations(int max_half, int n, double p_ref, const TCorrectionMode& mode) {
  if (mode.kind != TCorrectionMode::Kind::ExactSmall) return expected_T_table(max_half, n, p_ref, mode);
  auto out = expected_T_table(max_half, n, p_ref, TCorrectionMode::plug_in(mode.factor));
  const auto exact = expected_T_table(std::min(max_half, 3), n, p_ref, mode);
  for (int j = 2; j <= std::min(max_half, 3); ++j) out[static_cast<std::size_t>(j)] = exact[static_cast<std::size_t>(j)];
  return out;
}

// E[Tr A^{2k}] = n psi_{2k} - binom(k+1,2) psi_{2k} + E[T_{2k}]: the signed
// cycles and the centered Tr(A^2) part have mean zero under the null.
inline double null_mean_even_trace(int n, double p_ref, int k, const TCorrectionMode& mode) {
  if (k < 2) throw ParameterError("null_mean_even_trace: k must be at least 2");
  const double psi = to_double(catalan_psi(2 * k));
  const auto T = null_T_expectations(k, n, p_ref, mode);
  return n * psi - to_double(binomial(k + 1, 2)) * psi + T[static_cast<std::size_t>(k)];
}

// Null mean of Tr P_d for d = 0..max_degree (zero for odd d and d = 0).
// For even d >= 2 the n psi terms cancel, leaving
//   sum_{j=1}^{d/2} P_d[2j] (E[T_{2j}] - binom(j+1,2) psi_{2j}),  T_2 = 0.
inline std::vector<double> null_chebyshev_means(int max_degree, int n, double p_ref, const TCorrectionMode& mode) {
  if (max_degree < 0) throw ParameterError("null_chebyshev_means: negative degree");
  std::vector<double> out(static_cast<std::size_t>(max_degree) + 1, 0.0);
  if (max_degree < 2) return out;
  const int max_half = max_degree / 2;
  const auto T = null_T_expectations(max_half, n, p_ref, mode);
  std::vector<double> bracket(static_cast<std::size_t>(max_half) + 1, 0.0);
  for (int j = 1; j <= max_half; ++j)
    bracket[static_cast<std::size_t>(j)] =
        T[static_cast<std::size_t>(j)] - to_double(binomial(j + 1, 2)) * to_double(catalan_psi(2 * j));
  const auto& tables = default_tables();
  for (int d = 2; d <= max_degree; d += 2) {
    const auto& coeffs = tables.chebyshev_double(d);
    double acc = 0.0;
    for (int j = 1; j <= d / 2; ++j) acc += coeffs[static_cast<std::size_t>(2 * j)] * bracket[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(d)] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mean corrections

struct MuSeriesMode {
  enum class Kind { ClosedForm, WithAlpha3MC };
  Kind kind = Kind::ClosedForm;
  MomentFactor factor = MomentFactor::BernoulliFourthMoment;
  int reps = 0;
  std::uint64_t seed = 0;
  int mc_max_half = 8;  // alpha_3 is estimated for i <= mc_max_half, dropped above

  static MuSeriesMode closed_form(MomentFactor f = MomentFactor::BernoulliFourthMoment) { return {Kind::ClosedForm, f}; }
  static MuSeriesMode with_alpha3_mc(int reps, std::uint64_t seed, int max_half = 8) {
    if (reps < 1) throw ParameterError("MuSeriesMode: Monte Carlo needs at least one replicate");
    return {Kind::WithAlpha3MC, MomentFactor::BernoulliFourthMoment, reps, seed, max_half};
  }
};

inline constexpr int kMuSeriesMaxTerms = 1000000;
inline constexpr double kMuSeriesTolerance = 1e-15;

// (alpha_1 + alpha_2 * factor - binom(i+1,2) psi_{2i}) / 4^i in closed form,
// stable for large i: 1/2 - c_i (5i+1)/(2i+2) + c_i i(i-1)/((i+1)(i+2)) (factor - 3)
// with c_i = binom(2i,i)/4^i.
inline double scaled_mu_bracket(int i, double central, double factor) {
  const double ii = i;
  return 0.5 - central * (5 * ii + 1) / (2 * ii + 2) + central * ii * (ii - 1) / ((ii + 1) * (ii + 2)) * (factor - 3);
}

// Asymptotic mean of L_a: the i-series in t/(1+t^2) minus log(1+t^2)/2.
inline double mu_npt(int n, double p_ref, double t, const MuSeriesMode& mode = {}) {
  detail::check_contiguous(t, "mu_npt");
  if (!(p_ref > 0.0 && p_ref < 1.0)) throw ParameterError("mu_npt: p_ref must lie in (0,1)");
  const double factor = moment_factor(p_ref, mode.factor);
  std::vector<double> alpha3(1, 0.0);
  if (mode.kind == MuSeriesMode::Kind::WithAlpha3MC) {
    const auto mc = expected_T_table(mode.mc_max_half, n, p_ref, TCorrectionMode::monte_carlo(mode.reps, mode.seed));
    alpha3.assign(mc.size(), 0.0);
    for (int i = 2; i <= mode.mc_max_half; ++i)
      alpha3[static_cast<std::size_t>(i)] =
          mc[static_cast<std::size_t>(i)] - to_double(alpha1(i)) - to_double(alpha2(i)) * factor;
  }
  const double x = t / (1.0 + t * t);
  const double ratio = 4.0 * x * x;  // < 1 for t in [0, 1)
  double sum = 0.0;
  double rpow = 1.0, central = 1.0;
  for (int i = 1; i <= kMuSeriesMaxTerms; ++i) {
    rpow *= ratio;
    central *= (2.0 * i - 1) / (2.0 * i);
    double term;
    if (i == 1) {
      term = -x * x / 4.0;  // T_2 = 0 and psi_2 = 1
    } else {
      term = rpow * scaled_mu_bracket(i, central, factor) / (4.0 * i);
      if (static_cast<std::size_t>(i) < alpha3.size())
        term += std::pow(x, 2 * i) * alpha3[static_cast<std::size_t>(i)] / (4.0 * i);
    }
    sum += term;
    if (std::abs(term) < kMuSeriesTolerance && i > 2) break;
  }
  return sum - 0.5 * std::log1p(t * t);
}

// Finite-k null mean of the uncentered L_a sum:
// sum over even d in [4, k] of t^d E[Tr P_d] / (2d).
inline double la_null_mean(int n, double p_ref, double t, int k, const TCorrectionMode& mode = {}) {
  const auto means = null_chebyshev_means(k, n, p_ref, mode);
  double acc = 0.0;
  for (int d = 4; d <= k; d += 2) acc += std::pow(t, d) * means[static_cast<std::size_t>(d)] / (2.0 * d);
  return acc;
}

// 1 / (2d (log d)^{1/2 + eps}), the adaptive weight of Tr P_d.
inline double adaptive_weight(int d, double epsilon) {
  return 1.0 / (2.0 * d * std::pow(std::log(static_cast<double>(d)), 0.5 + epsilon));
}

struct BarMuOptions {
  // Weight P_{2r}(2j), the polynomial evaluated at 2j, instead of the
  // coefficient P_{2r}[2j].
  bool evaluate_at_2j = false;
  // Weight the degree-2r block by 1/(2r (log r)^{1/2+eps}) rather than by the
  // adaptive weight of degree 2r.
  bool half_degree_weight = false;
};

// Null mean of the adaptive all-degree statistic:
// sum_{r=2}^{floor(k/2)} w_r sum_{j=1}^{r} P_{2r}[2j] (E[T_{2j}] - binom(j+1,2) psi_{2j}).
inline double bar_mu_na(int n, double p_ref, double epsilon, int k, const TCorrectionMode& mode = {},
                        const BarMuOptions& options = {}) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ParameterError("bar_mu_na: epsilon must lie in (0, 1/2]");
  if (!(p_ref > 0.0 && p_ref < 1.0)) throw ParameterError("bar_mu_na: p_ref must lie in (0,1)");
  const int max_half = k / 2;
  if (max_half < 2) return 0.0;
  const auto T = null_T_expectations(max_half, n, p_ref, mode);
  const auto& tables = default_tables();
  double acc = 0.0;
  for (int r = 2; r <= max_half; ++r) {
    const double w = options.half_degree_weight
                         ? 1.0 / (2.0 * r * std::pow(std::log(static_cast<double>(r)), 0.5 + epsilon))
                         : adaptive_weight(2 * r, epsilon);
    const auto& poly = tables.chebyshev(2 * r);
    double inner = 0.0;
    for (int j = 1; j <= r; ++j) {
      const double c = options.evaluate_at_2j ? to_double(poly(BigInt(2 * j))) : to_double(poly.coeff(2 * j));
      inner += c * (T[static_cast<std::size_t>(j)] - to_double(binomial(j + 1, 2)) * to_double(catalan_psi(2 * j)));
    }
    acc += w * inner;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Null variances truncated at maximum degree k

inline double la_null_variance(double t, int k) {
  double acc = 0.0;
  for (int d = 3; d <= k; ++d) acc += std::pow(t, 2 * d) / (2.0 * d);
  return acc;
}

inline double lo_null_variance(double t, int k) {
  double acc = 0.0;
  for (int d = 3; d <= k; d += 2) acc += std::pow(t, 2 * d) / (2.0 * d);
  return acc;
}

inline double adaptive_odd_variance(double epsilon, int k) {
  double acc = 0.0;
  for (int d = 3; d <= k; d += 2) acc += 1.0 / (2.0 * d * std::pow(std::log(static_cast<double>(d)), 1.0 + 2.0 * epsilon));
  return acc;
}

inline double adaptive_all_variance(double epsilon, int k) {
  double acc = 0.0;
  for (int d = 3; d <= k; ++d) acc += 1.0 / (2.0 * d * std::pow(std::log(static_cast<double>(d)), 1.0 + 2.0 * epsilon));
  return acc;
}

// Upper bound on the odd adaptive variance series beyond degree k (k >= 3),
// by the integral test with spacing 2:
//   sum_{odd d > k} g(d) <= (1/2) int_{k-1}^{inf} g,  g(x) = 1 / (2x (log x)^{1+2eps}).
inline double adaptive_odd_tail_bound(double epsilon, int k) {
  if (k < 3) throw ParameterError("adaptive_odd_tail_bound: k must be at least 3");
  return 1.0 / (8.0 * epsilon * std::pow(std::log(k - 1.0), 2.0 * epsilon));
}

// ---------------------------------------------------------------------------
// Statistics

enum class SignMode { Assortative, Disassortative, AutoFromParams };

inline const char* to_string(SignMode s) {
  switch (s) {
    case SignMode::Assortative: return "assortative";
    case SignMode::Disassortative: return "disassortative";
    case SignMode::AutoFromParams: return "auto";
  }
  return "";
}

inline SignMode resolve_sign(SignMode mode, const std::optional<ModelParams>& truth) {
  if (mode != SignMode::AutoFromParams) return mode;
  if (!truth) throw ModeError("sign mode auto needs the generating model parameters");
  return truth->kappa < 2 || truth->p >= truth->q ? SignMode::Assortative : SignMode::Disassortative;
}

namespace detail {
inline double signed_t(double t, SignMode sign) {
  if (sign == SignMode::AutoFromParams) throw ModeError("sign mode must be resolved before evaluating a statistic");
  return sign == SignMode::Disassortative ? -t : t;
}

inline void check_open_t(double t, const char* what) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError(std::string(what) + ": t must lie in (0,1)");
}

inline void check_k(int k, const char* what) {
  if (k < 3) throw ParameterError(std::string(what) + ": k must be at least 3");
}

inline void check_epsilon(double epsilon, const char* what) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ParameterError(std::string(what) + ": epsilon must lie in (0, 1/2]");
}
}  // namespace detail

// sum_{d=3}^{k} t^d Tr P_d / (2d) - mu_value
inline double stat_La(const Spectrum& s, double t, int k, double mu_value, SignMode sign = SignMode::Assortative) {
  detail::check_open_t(t, "stat_La");
  detail::check_k(k, "stat_La");
  const double ts = detail::signed_t(t, sign);
  const auto tr = chebyshev_traces(s, k);
  double acc = 0.0;
  for (int d = 3; d <= k; ++d) acc += std::pow(ts, d) * tr[static_cast<std::size_t>(d)] / (2.0 * d);
  return acc - mu_value;
}

// sum over odd d in [3, k] of t^d Tr P_d / (2d)
inline double stat_Lo(const Spectrum& s, double t, int k, SignMode sign = SignMode::Assortative) {
  detail::check_open_t(t, "stat_Lo");
  detail::check_k(k, "stat_Lo");
  const double ts = detail::signed_t(t, sign);
  const auto tr = chebyshev_traces(s, k);
  double acc = 0.0;
  for (int d = 3; d <= k; d += 2) acc += std::pow(ts, d) * tr[static_cast<std::size_t>(d)] / (2.0 * d);
  return acc;
}

inline double stat_adaptive_odd(const Spectrum& s, double epsilon, int k, SignMode sign = SignMode::Assortative) {
  detail::check_epsilon(epsilon, "stat_adaptive_odd");
  detail::check_k(k, "stat_adaptive_odd");
  const double flip = detail::signed_t(1.0, sign);
  const auto tr = chebyshev_traces(s, k);
  double acc = 0.0;
  for (int d = 3; d <= k; d += 2) acc += adaptive_weight(d, epsilon) * tr[static_cast<std::size_t>(d)];
  return flip * acc;
}

inline double stat_adaptive_all(const Spectrum& s, double epsilon, int k, double bar_mu_value,
                                SignMode sign = SignMode::Assortative) {
  detail::check_epsilon(epsilon, "stat_adaptive_all");
  detail::check_k(k, "stat_adaptive_all");
  const double flip = detail::signed_t(1.0, sign);
  const auto tr = chebyshev_traces(s, k);
  double acc = 0.0;
  for (int d = 3; d <= k; ++d)
    acc += (d % 2 ? flip : 1.0) * adaptive_weight(d, epsilon) * tr[static_cast<std::size_t>(d)];
  return acc - bar_mu_value;
}

// Oracle counterpart of L_a built from enumerated signed cycles.
inline double stat_Lc(const GraphSample& g, double p_ref, double t, int k_max, SignMode sign = SignMode::Assortative) {
  detail::check_open_t(t, "stat_Lc");
  detail::check_k(k_max, "stat_Lc");
  const double ts = detail::signed_t(t, sign);
  double acc = 0.0;
  for (int r = 3; r <= k_max; ++r) acc += std::pow(ts, r) * signed_cycle_bruteforce(g, p_ref, r) / (2.0 * r);
  return acc;
}

// ---------------------------------------------------------------------------
// Covariance matrices and alternative means

struct SigmaMatrix {
  std::vector<int> ks;
  Eigen::MatrixXd entries;
};

// Limiting null covariance of (Tr A^{2k_i+1})_i.
inline SigmaMatrix sigma_matrix_odd(const std::vector<int>& ks) {
  if (ks.empty()) throw ParameterError("sigma_matrix_odd: ks must be nonempty");
  for (int k : ks)
    if (k < 1) throw ParameterError("sigma_matrix_odd: every k must be at least 1");
  const auto l = static_cast<Eigen::Index>(ks.size());
  SigmaMatrix out{ks, Eigen::MatrixXd::Zero(l, l)};
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j) {
      const int mi = 2 * ks[static_cast<std::size_t>(i)] + 1, mj = 2 * ks[static_cast<std::size_t>(j)] + 1;
      double acc = 0.0;
      for (int r = 3; r <= std::min(mi, mj); r += 2)
        acc += 2.0 * to_double(fk_coefficient(mi, r)) * to_double(fk_coefficient(mj, r)) * mi * mj / r;
      out.entries(i, j) = acc;
    }
  return out;
}

// Limiting null covariance of (Tr A^{2k_i})_i under known centering.
inline SigmaMatrix sigma_matrix_even(const std::vector<int>& ks, double p_ref) {
  if (ks.empty()) throw ParameterError("sigma_matrix_even: ks must be nonempty");
  for (int k : ks)
    if (k < 1) throw ParameterError("sigma_matrix_even: every k must be at least 1");
  const double var_factor = moment_factor(p_ref, MomentFactor::BernoulliVariance);
  const auto l = static_cast<Eigen::Index>(ks.size());
  SigmaMatrix out{ks, Eigen::MatrixXd::Zero(l, l)};
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j) {
      const int ki = ks[static_cast<std::size_t>(i)], kj = ks[static_cast<std::size_t>(j)];
      const int mi = 2 * ki, mj = 2 * kj;
      double acc = 0.0;
      for (int r = 4; r <= std::min(mi, mj); r += 2)
        acc += 2.0 * to_double(fk_coefficient(mi, r)) * to_double(fk_coefficient(mj, r)) * mi * mj / r;
      acc += 2.0 * ki * kj * to_double(catalan_psi(mi)) * to_double(catalan_psi(mj)) * var_factor;
      out.entries(i, j) = acc;
    }
  return out;
}

// Alternative mean shift of Tr A^{2k+1}: sum_{odd r=3}^{2k+1} binom(2k+1, (2k+1+r)/2) t^r.
inline double nu_odd(int k, double t, SignMode sign = SignMode::Assortative) {
  if (k < 1) throw ParameterError("nu_odd: k must be at least 1");
  if (!std::isfinite(t) || t < 0.0) throw ParameterError("nu_odd: t must be finite and nonnegative");
  const double ts = detail::signed_t(t, sign);
  const int m = 2 * k + 1;
  double acc = 0.0;
  for (int r = 3; r <= m; r += 2) acc += to_double(binomial(m, (m + r) / 2)) * std::pow(ts, r);
  return acc;
}

// ---------------------------------------------------------------------------
// Tests

enum class StatisticKind { LcOracle, LaOptimal, LoOptimal, AdaptiveOdd, AdaptiveAll };

inline const char* to_string(StatisticKind k) {
  switch (k) {
    case StatisticKind::LcOracle: return "Lc";
    case StatisticKind::LaOptimal: return "La";
    case StatisticKind::LoOptimal: return "Lo";
    case StatisticKind::AdaptiveOdd: return "adaptive_odd";
    case StatisticKind::AdaptiveAll: return "adaptive_all";
  }
  return "";
}

inline StatisticKind parse_statistic_kind(const std::string& s) {
  for (auto k : {StatisticKind::LcOracle, StatisticKind::LaOptimal, StatisticKind::LoOptimal, StatisticKind::AdaptiveOdd,
                 StatisticKind::AdaptiveAll})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown statistic '" + s + "' (expected Lc, La, Lo, adaptive_odd or adaptive_all)");
}

inline Regime regime_of(StatisticKind k) {
  return k == StatisticKind::LoOptimal || k == StatisticKind::AdaptiveOdd ? Regime::OddOnly : Regime::All;
}

// How L_a is re-centered.
enum class LaMean {
  Truncated,  // exact finite-k null mean of the sum
  Series,     // asymptotic mu series
};

struct TestSpec {
  StatisticKind kind = StatisticKind::AdaptiveOdd;
  double alpha = 0.05;
  std::optional<double> t;       // required for Lc, La, Lo
  double epsilon = 0.15;
  std::optional<int> k_n;        // maximum polynomial degree; nullopt selects default_k
  SignMode sign = SignMode::Assortative;
  TCorrectionMode t_correction = TCorrectionMode::plug_in();
  Centering centering = Centering::Estimated;
  std::optional<double> p_known;  // reference probability for Known centering
  LaMean la_mean = LaMean::Truncated;
  BarMuOptions bar_mu;

  bool needs_t() const {
    return kind == StatisticKind::LcOracle || kind == StatisticKind::LaOptimal || kind == StatisticKind::LoOptimal;
  }

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("TestSpec: alpha must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ParameterError("TestSpec: epsilon must lie in (0, 1/2]");
    if (k_n && *k_n < 3) throw ParameterError("TestSpec: k_n must be at least 3");
    if (needs_t()) {
      if (!t) throw ParameterError(std::string("TestSpec: ") + to_string(kind) + " needs t_hypothesized");
      detail::check_open_t(*t, "TestSpec");
    }
    if (centering == Centering::Known && !p_known)
      throw ParameterError("TestSpec: known centering needs the reference probability");
  }
};

struct TestOutcome {
  StatisticKind kind = StatisticKind::AdaptiveOdd;
  int n = 0;
  double p_hat = 0.0;
  std::optional<double> t;
  int k_used = 0;
  double statistic = 0.0;
  double null_mean = 0.0;
  double null_sd = 1.0;
  double z = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::optional<double> theoretical_power;
  Centering centering = Centering::Estimated;
};

// Standardize, take the one-sided upper p-value and compare with alpha.
inline TestOutcome decide(double statistic, double null_mean, double null_sd, double alpha,
                          std::optional<double> t_for_power = std::nullopt, bool odd_only = false) {
  if (!(null_sd > 0.0)) throw ParameterError("decide: null_sd must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("decide: alpha must lie in (0,1)");
  TestOutcome out;
  out.statistic = statistic;
  out.null_mean = null_mean;
  out.null_sd = null_sd;
  out.z = (statistic - null_mean) / null_sd;
  out.p_value = normal_upper_tail(out.z);
  out.reject = out.p_value < alpha;
  out.t = t_for_power;
  if (t_for_power && *t_for_power >= 0.0 && *t_for_power < 1.0)
    out.theoretical_power = odd_only ? optimal_power_odd(alpha, *t_for_power) : optimal_power(alpha, *t_for_power);
  return out;
}

inline int resolve_k(const TestSpec& spec, int n, double p_ref) {
  return spec.k_n ? *spec.k_n : default_k(n, p_ref, regime_of(spec.kind));
}

// Evaluate the configured test on a graph whose centered spectrum is already
// known. `s` must come from centering `g` at `p_ref`.
inline TestOutcome evaluate_test(const Spectrum& s, const GraphSample& g, double p_ref, const TestSpec& spec,
                                 const std::optional<ModelParams>& truth = std::nullopt) {
  spec.validate();
  const SignMode sign = resolve_sign(spec.sign, truth);
  const int n = g.n();
  const int k = resolve_k(spec, n, p_ref);
  double statistic = 0.0, mean = 0.0, var = 0.0;
  bool odd_only = false;
  switch (spec.kind) {
    case StatisticKind::LcOracle:
      statistic = stat_Lc(g, p_ref, *spec.t, k, sign);
      var = la_null_variance(*spec.t, k);
      break;
    case StatisticKind::LaOptimal:
      statistic = stat_La(s, *spec.t, k, 0.0, sign);
      mean = spec.la_mean == LaMean::Truncated ? la_null_mean(n, p_ref, *spec.t, k, spec.t_correction)
                                               : mu_npt(n, p_ref, *spec.t, MuSeriesMode::closed_form(spec.t_correction.factor));
      var = la_null_variance(*spec.t, k);
      break;
    case StatisticKind::LoOptimal:
      statistic = stat_Lo(s, *spec.t, k, sign);
      var = lo_null_variance(*spec.t, k);
      odd_only = true;
      break;
    case StatisticKind::AdaptiveOdd:
      statistic = stat_adaptive_odd(s, spec.epsilon, k, sign);
      var = adaptive_odd_variance(spec.epsilon, k);
      break;
    case StatisticKind::AdaptiveAll:
      statistic = stat_adaptive_all(s, spec.epsilon, k, 0.0, sign);
      mean = bar_mu_na(n, p_ref, spec.epsilon, k, spec.t_correction, spec.bar_mu);
      var = adaptive_all_variance(spec.epsilon, k);
      break;
  }
  auto out = decide(statistic, mean, std::sqrt(var), spec.alpha, spec.needs_t() ? spec.t : std::nullopt, odd_only);
  out.kind = spec.kind;
  out.n = n;
  out.p_hat = estimate_p_hat(g);
  out.t = spec.t;
  out.k_used = k;
  out.centering = spec.centering;
  return out;
}

inline double reference_probability(const GraphSample& g, const TestSpec& spec) {
  return spec.centering == Centering::Known ? *spec.p_known : estimate_p_hat(g);
}

inline TestOutcome run_test(const GraphSample& g, const TestSpec& spec,
                            const std::optional<ModelParams>& truth = std::nullopt) {
  spec.validate();
  const double p_ref = reference_probability(g, spec);
  const CenteredMatrix m(g, p_ref, spec.centering);
  return evaluate_test(eigenvalues(m), g, p_ref, spec, truth);
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json to_json(const TestOutcome& o) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(o.kind);
  j["n"] = o.n;
  j["p_hat"] = o.p_hat;
  j["t"] = o.t ? nlohmann::ordered_json(*o.t) : nlohmann::ordered_json(nullptr);
  j["k"] = o.k_used;
  j["statistic"] = o.statistic;
  j["null_mean"] = o.null_mean;
  j["null_sd"] = o.null_sd;
  j["z"] = o.z;
  j["p_value"] = o.p_value;
  j["reject"] = o.reject;
  j["theoretical_power"] =
      o.theoretical_power ? nlohmann::ordered_json(*o.theoretical_power) : nlohmann::ordered_json(nullptr);
  j["centering"] = to_string(o.centering);
  return j;
}

inline std::vector<std::string> outcome_csv_columns() {
  return {"kind", "n", "p_hat", "t", "k", "statistic", "null_mean", "null_sd", "z", "p_value", "reject",
          "theoretical_power"};
}

inline std::vector<std::string> outcome_csv_fields(const TestOutcome& o) {
  return {to_string(o.kind),        std::to_string(o.n),       format_number(o.p_hat),
          format_optional(o.t),     std::to_string(o.k_used),  format_number(o.statistic),
          format_number(o.null_mean), format_number(o.null_sd), format_number(o.z),
          format_number(o.p_value), o.reject ? "1" : "0",      format_optional(o.theoretical_power)};
}

inline std::string to_csv_header(const TestOutcome&) { return csv_join(outcome_csv_columns()); }
inline std::string to_csv_row(const TestOutcome& o) { return csv_join(outcome_csv_fields(o)); }

}  // namespace sbmlss
