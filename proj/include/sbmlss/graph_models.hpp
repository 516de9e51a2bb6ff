#pragma once

// Null (Erdos-Renyi) and alternative (symmetric kappa-block SBM) samplers,
// the average-connection-probability estimate, and the signal-to-noise
// parameterization (a, b, c, t).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbmlss/errors.hpp"
#include "sbmlss/rng.hpp"

namespace sbmlss {

// Undirected simple graph stored as a dense symmetric byte matrix.
class GraphSample {
 public:
  explicit GraphSample(int n) : n_(n) {
    if (n < 2) throw ParameterError("GraphSample: need at least 2 nodes");
    adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  }

  int n() const { return n_; }

  bool edge(int i, int j) const { return adj_[index(i, j)] != 0; }
  std::uint8_t x(int i, int j) const { return adj_[index(i, j)]; }

  void set_edge(int i, int j, bool present = true) {
    if (i == j) throw ParameterError("GraphSample: self loops are not allowed");
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ParameterError("GraphSample: node out of range");
    const std::uint8_t v = present ? 1 : 0;
    adj_[index(i, j)] = v;
    adj_[index(j, i)] = v;
  }

  long long edge_count() const {
    long long twice = 0;
    for (auto v : adj_) twice += v;
    return twice / 2;
  }

  const std::optional<std::vector<int>>& labels() const { return labels_; }
  void set_labels(std::vector<int> labels) { labels_ = std::move(labels); }

  friend bool operator==(const GraphSample&, const GraphSample&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<std::uint8_t> adj_;
  std::optional<std::vector<int>> labels_;  // values in 1..kappa
};

struct ModelParams {
  int n = 0;
  int kappa = 1;  // 1 means Erdos-Renyi with probability p
  double p = 0.0;
  double q = 0.0;

  double p_av() const { return kappa == 1 ? p : (p + (kappa - 1) * q) / kappa; }

  void validate() const {
    if (n < 2) throw ParameterError("ModelParams: n must be at least 2");
    if (kappa < 1) throw ParameterError("ModelParams: kappa must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("ModelParams: p outside [0,1]");
    if (kappa > 1 && !(q >= 0.0 && q <= 1.0)) throw ParameterError("ModelParams: q outside [0,1]");
  }
};

struct SnrSummary {
  double a = 0.0;  // n p
  double b = 0.0;  // n q
  double c = 0.0;  // (a-b)^2 / (a + (kappa-1) b)
  double t = 0.0;  // sqrt(c / (2 (1 - p_av)))
  bool assortative = true;
};

inline GraphSample sample_er(int n, double p, std::uint64_t seed, std::uint64_t stream = 0) {
  if (n < 2) throw ParameterError("sample_er: n must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("sample_er: p outside [0,1]");
  GraphSample g(n);
  auto eng = make_engine(seed, stream);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(eng) < p) g.set_edge(i, j);
  return g;
}

inline GraphSample sample_sbm(int n, int kappa, double p, double q, std::uint64_t seed,
                              std::uint64_t stream = 0) {
  if (n < 2) throw ParameterError("sample_sbm: n must be at least 2");
  if (kappa < 2) throw ParameterError("sample_sbm: kappa must be at least 2");
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
    throw ParameterError("sample_sbm: probabilities outside [0,1]");
  GraphSample g(n);
  auto eng = make_engine(seed, stream);
  std::uniform_int_distribution<int> label(1, kappa);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = label(eng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double prob = labels[i] == labels[j] ? p : q;
      if (unif(eng) < prob) g.set_edge(i, j);
    }
  g.set_labels(std::move(labels));
  return g;
}

// Dispatches on kappa: 1 -> ER(n, p), otherwise SBM(n, kappa, p, q).
inline GraphSample sample_model(const ModelParams& params, std::uint64_t seed, std::uint64_t stream = 0) {
  params.validate();
  if (params.kappa == 1) return sample_er(params.n, params.p, seed, stream);
  return sample_sbm(params.n, params.kappa, params.p, params.q, seed, stream);
}

// Twice the edge count over n(n-1).
inline double estimate_p_hat(const GraphSample& g) {
  const double n = g.n();
  return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

inline SnrSummary snr_summary(const ModelParams& params) {
  params.validate();
  if (params.kappa < 2) throw ParameterError("snr_summary: kappa must be at least 2");
  SnrSummary s;
  s.a = params.n * params.p;
  s.b = params.n * params.q;
  const double denom = s.a + (params.kappa - 1) * s.b;
  if (!(denom > 0.0)) throw ParameterError("snr_summary: a + (kappa-1) b must be positive");
  s.c = (s.a - s.b) * (s.a - s.b) / denom;
  const double p_av = params.p_av();
  if (!(p_av < 1.0)) throw ParameterError("snr_summary: p_av must be below 1");
  s.t = std::sqrt(s.c / (2.0 * (1.0 - p_av)));
  s.assortative = params.p >= params.q;
  return s;
}

// SBM parameters with average probability p_av and signal strength t.
// Disassortative alternatives (p < q) are requested with assortative=false.
inline ModelParams params_from_t(int n, double p_av, double t, int kappa, bool assortative = true) {
  if (n < 2) throw ParameterError("params_from_t: n must be at least 2");
  if (kappa < 2) throw ParameterError("params_from_t: kappa must be at least 2");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("params_from_t: t must be nonnegative");
  if (!(p_av >= 0.0 && p_av <= 1.0)) throw ParameterError("params_from_t: p_av outside [0,1]");
  double gap = t * std::sqrt(2.0 * kappa * p_av * (1.0 - p_av) / n);
  if (!assortative) gap = -gap;
  ModelParams out;
  out.n = n;
  out.kappa = kappa;
  out.p = p_av + (kappa - 1) * gap / kappa;
  out.q = p_av - gap / kappa;
  if (t > 0.0 && (p_av <= 0.0 || p_av >= 1.0))
    throw ParameterError("params_from_t: t > 0 needs p_av strictly inside (0,1)");
  if (out.p < 0.0 || out.p > 1.0 || out.q < 0.0 || out.q > 1.0) {
    std::ostringstream msg;
    msg << "params_from_t: infeasible (p=" << out.p << ", q=" << out.q << ") at t=" << t;
    throw ParameterError(msg.str());
  }
  return out;
}

// Edge-list text format: first line n, then one "i j" pair per line, 0-based.
inline void write_edge_list(const GraphSample& g, std::ostream& os) {
  os << g.n() << '\n';
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (g.edge(i, j)) os << i << ' ' << j << '\n';
}

inline GraphSample read_edge_list(std::istream& is) {
  std::string line;
  long long n = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!(ls >> n)) throw ConfigError("edge list: malformed header line '" + line + "'");
    break;
  }
  if (n < 2) throw ConfigError("edge list: missing or invalid node count");
  GraphSample g(static_cast<int>(n));
  long long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long i = 0, j = 0;
    if (!(ls >> i >> j)) throw ConfigError("edge list: malformed line " + std::to_string(lineno));
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw ConfigError("edge list: node out of range on line " + std::to_string(lineno));
    if (i == j) throw ConfigError("edge list: self loop on line " + std::to_string(lineno));
    g.set_edge(static_cast<int>(i), static_cast<int>(j));
  }
  return g;
}

inline void save_edge_list(const GraphSample& g, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  write_edge_list(g, os);
}

inline GraphSample load_edge_list(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  return read_edge_list(is);
}

}  // namespace sbmlss
