#pragma once

// Centered/rescaled adjacency matrices, their spectrum, and linear spectral
// statistics of powers and Chebyshev polynomials evaluated from it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sbmlss/errors.hpp"
#include "sbmlss/graph_models.hpp"

namespace sbmlss {

enum class Centering { Known, Estimated };

inline const char* to_string(Centering c) { return c == Centering::Known ? "known" : "estimated"; }

// (A - p_ref (11' - I)) / sqrt(n p_ref (1 - p_ref)); zero diagonal.
class CenteredMatrix {
 public:
  CenteredMatrix(const GraphSample& g, double p_ref, Centering mode) : mode_(mode), p_ref_(p_ref) {
    if (!(p_ref > 0.0 && p_ref < 1.0)) {
      std::ostringstream msg;
      msg << "degenerate centering: reference probability " << p_ref << " must lie in (0,1)";
      throw DegenerateCenteringError(msg.str());
    }
    const int n = g.n();
    scale_ = n * p_ref * (1.0 - p_ref);
    const double inv_sqrt = 1.0 / std::sqrt(scale_);
    const double on = (1.0 - p_ref) * inv_sqrt;
    const double off = -p_ref * inv_sqrt;
    entries_.resize(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) entries_(i, j) = i == j ? 0.0 : (g.edge(i, j) ? on : off);
  }

  int n() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  Centering centering() const { return mode_; }
  double p_ref() const { return p_ref_; }
  // n p_ref (1 - p_ref), the squared denominator.
  double scale() const { return scale_; }

 private:
  Eigen::MatrixXd entries_;
  Centering mode_;
  double p_ref_;
  double scale_ = 0.0;
};

inline CenteredMatrix center_known(const GraphSample& g, double p_av) {
  return CenteredMatrix(g, p_av, Centering::Known);
}

inline CenteredMatrix center_estimated(const GraphSample& g) {
  return CenteredMatrix(g, estimate_p_hat(g), Centering::Estimated);
}

struct Spectrum {
  std::vector<double> eigenvalues;  // descending

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

inline Spectrum eigenvalues(const CenteredMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  Spectrum s;
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  for (double v : s.eigenvalues)
    if (!std::isfinite(v)) throw NumericalError("symmetric eigensolver returned a non-finite eigenvalue");
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
  return s;
}

// Tr P_m for m = 0..max_m, each eigenvalue run through q_{j+1} = x q_j - q_{j-1}.
inline std::vector<double> chebyshev_traces(const Spectrum& s, int max_m) {
  if (max_m < 0) throw ParameterError("chebyshev_traces: negative degree");
  std::vector<double> out(static_cast<std::size_t>(max_m) + 1, 0.0);
  for (double x : s.eigenvalues) {
    double prev = 2.0;
    double cur = x;
    out[0] += prev;
    if (max_m >= 1) out[1] += cur;
    for (int m = 2; m <= max_m; ++m) {
      const double next = x * cur - prev;
      prev = cur;
      cur = next;
      out[static_cast<std::size_t>(m)] += cur;
    }
  }
  return out;
}

inline double chebyshev_lss(const Spectrum& s, int m) { return chebyshev_traces(s, m).back(); }

// sum_i lambda_i^k; k = 0 gives n.
inline double power_trace(const Spectrum& s, int k) {
  if (k < 0) throw ParameterError("power_trace: negative power");
  double acc = 0.0;
  for (double x : s.eigenvalues) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= x;
    acc += v;
  }
  return acc;
}

enum class Regime { OddOnly, All };

// Finite-n stand-in for the o(min(log(n p), sqrt(log n))) growth condition
// (log(n^2 p^3) for Regime::All), clamped to [3, 60].
inline int default_k(int n, double p_ref, Regime regime) {
  if (n < 2) throw ParameterError("default_k: n must be at least 2");
  if (!(p_ref > 0.0 && p_ref < 1.0)) throw ParameterError("default_k: p_ref must lie in (0,1)");
  const double nn = n;
  const double log_n = std::log(nn);
  const double density = regime == Regime::OddOnly ? std::log(nn * p_ref) : std::log(nn * nn * p_ref * p_ref * p_ref);
  if (log_n <= 1.0)
    throw RegimeTooSparseError("default_k: log(n) <= 1, growth condition k = o(sqrt(log n)) is void");
  if (density <= 1.0)
    throw RegimeTooSparseError(regime == Regime::OddOnly
                                   ? "default_k: log(n p) <= 1, growth condition k = o(log(n p)) is void"
                                   : "default_k: log(n^2 p^3) <= 1, growth condition k = o(log(n^2 p^3)) is void");
  const double raw = std::floor(std::min(density, std::sqrt(log_n)) - 1.0);
  return std::clamp(static_cast<int>(raw), 3, 60);
}

}  // namespace sbmlss
