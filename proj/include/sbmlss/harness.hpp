#pragma once

// Monte Carlo driver: flat key=value configuration, seeded replicate fan-out,
// calibration and power tables, oracle comparisons, CSV and SVG emission.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sbmlss/csv.hpp"
#include "sbmlss/cycle_oracle.hpp"
#include "sbmlss/errors.hpp"
#include "sbmlss/graph_models.hpp"
#include "sbmlss/log.hpp"
#include "sbmlss/parallel.hpp"
#include "sbmlss/spectral_core.hpp"
#include "sbmlss/statistics.hpp"
#include "sbmlss/version.hpp"

namespace sbmlss {

enum class Experiment { Calibrate, PowerCurve, OracleCompare, Identities, SingleTest };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Calibrate: return "calibrate";
    case Experiment::PowerCurve: return "power";
    case Experiment::OracleCompare: return "oracle";
    case Experiment::Identities: return "identities";
    case Experiment::SingleTest: return "test";
  }
  return "";
}

struct ExperimentConfig {
  Experiment experiment = Experiment::Calibrate;
  int n = 500;
  double p_av = 0.1;
  std::vector<double> t_grid{0.8};
  int kappa = 2;
  bool assortative = true;
  int reps = 200;
  std::uint64_t seed = 1;
  unsigned threads = default_thread_count();
  std::vector<StatisticKind> statistics{StatisticKind::AdaptiveOdd};
  TestSpec test;  // kind is overwritten per statistic
  std::map<StatisticKind, int> k_by_kind;
  std::vector<int> oracle_ks{3, 4, 5, 6};
  TCorrectionMode oracle_t_correction = TCorrectionMode::exact_small();
  std::string output_path;
  std::string plot_path;
  std::string input_path;
  bool timing = false;

  TestSpec spec_for(StatisticKind kind) const {
    TestSpec s = test;
    s.kind = kind;
    if (auto it = k_by_kind.find(kind); it != k_by_kind.end()) s.k_n = it->second;
    if (s.centering == Centering::Known && !s.p_known) s.p_known = p_av;
    return s;
  }
};

// ---------------------------------------------------------------------------
// Configuration parsing

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(out)) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long out = std::stoull(v, &used, 0);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects a nonnegative integer, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config: " + key + " expects true or false, got '" + v + "'");
}

inline Experiment parse_experiment(const std::string& v) {
  for (auto e : {Experiment::Calibrate, Experiment::PowerCurve, Experiment::OracleCompare, Experiment::Identities,
                 Experiment::SingleTest})
    if (v == to_string(e)) return e;
  throw ConfigError("config: unknown experiment '" + v + "'");
}

inline MomentFactor parse_moment_factor(const std::string& v) {
  if (v == "fourth_moment") return MomentFactor::BernoulliFourthMoment;
  if (v == "variance") return MomentFactor::BernoulliVariance;
  if (v == "vanishing") return MomentFactor::Vanishing;
  throw ConfigError("config: moment_factor must be fourth_moment, variance or vanishing");
}

inline const char* moment_factor_name(MomentFactor f) {
  switch (f) {
    case MomentFactor::BernoulliFourthMoment: return "fourth_moment";
    case MomentFactor::BernoulliVariance: return "variance";
    case MomentFactor::Vanishing: return "vanishing";
  }
  return "";
}

inline const char* t_correction_name(TCorrectionMode::Kind k) {
  switch (k) {
    case TCorrectionMode::Kind::ExactSmall: return "exact_small";
    case TCorrectionMode::Kind::PlugInExpectation: return "plug_in";
    case TCorrectionMode::Kind::MonteCarlo: return "monte_carlo";
  }
  return "";
}

inline TCorrectionMode::Kind parse_t_correction(const std::string& v) {
  if (v == "exact_small") return TCorrectionMode::Kind::ExactSmall;
  if (v == "plug_in") return TCorrectionMode::Kind::PlugInExpectation;
  if (v == "monte_carlo") return TCorrectionMode::Kind::MonteCarlo;
  throw ConfigError("config: t_correction must be exact_small, plug_in or monte_carlo");
}

}  // namespace detail

// Apply one key=value setting. Unknown keys and malformed values raise ConfigError.
inline void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  using namespace detail;
  const std::string key = trim(raw_key), v = trim(raw_value);
  if (key == "experiment") cfg.experiment = parse_experiment(v);
  else if (key == "n") cfg.n = static_cast<int>(parse_int(key, v));
  else if (key == "p_av") cfg.p_av = parse_double(key, v);
  else if (key == "t_grid") {
    cfg.t_grid.clear();
    for (const auto& item : split_list(v)) cfg.t_grid.push_back(parse_double(key, item));
  } else if (key == "t") {
    if (v.empty() || v == "none") cfg.test.t.reset();
    else cfg.test.t = parse_double(key, v);
  } else if (key == "kappa") cfg.kappa = static_cast<int>(parse_int(key, v));
  else if (key == "assortative") cfg.assortative = parse_bool(key, v);
  else if (key == "alpha") cfg.test.alpha = parse_double(key, v);
  else if (key == "reps") cfg.reps = static_cast<int>(parse_int(key, v));
  else if (key == "seed") cfg.seed = parse_u64(key, v);
  else if (key == "threads") {
    const auto t = parse_int(key, v);
    if (t < 1) throw ConfigError("config: threads must be at least 1");
    cfg.threads = static_cast<unsigned>(t);
  } else if (key == "statistics") {
    cfg.statistics.clear();
    for (const auto& item : split_list(v)) cfg.statistics.push_back(parse_statistic_kind(item));
  } else if (key == "epsilon") cfg.test.epsilon = parse_double(key, v);
  else if (key == "k") {
    if (v == "auto") cfg.test.k_n.reset();
    else cfg.test.k_n = static_cast<int>(parse_int(key, v));
  } else if (key.rfind("k.", 0) == 0) {
    const auto kind = parse_statistic_kind(key.substr(2));
    if (v == "auto") cfg.k_by_kind.erase(kind);
    else cfg.k_by_kind[kind] = static_cast<int>(parse_int(key, v));
  } else if (key == "sign") {
    if (v == "assortative") cfg.test.sign = SignMode::Assortative;
    else if (v == "disassortative") cfg.test.sign = SignMode::Disassortative;
    else if (v == "auto") cfg.test.sign = SignMode::AutoFromParams;
    else throw ConfigError("config: sign must be assortative, disassortative or auto");
  } else if (key == "t_correction") cfg.test.t_correction.kind = parse_t_correction(v);
  else if (key == "moment_factor") cfg.test.t_correction.factor = parse_moment_factor(v);
  else if (key == "mc_reps") cfg.test.t_correction.reps = static_cast<int>(parse_int(key, v));
  else if (key == "mc_seed") cfg.test.t_correction.seed = parse_u64(key, v);
  else if (key == "oracle_t_correction") cfg.oracle_t_correction.kind = parse_t_correction(v);
  else if (key == "centering") {
    if (v == "known") cfg.test.centering = Centering::Known;
    else if (v == "estimated") cfg.test.centering = Centering::Estimated;
    else throw ConfigError("config: centering must be known or estimated");
  } else if (key == "p_known") cfg.test.p_known = parse_double(key, v);
  else if (key == "la_mean") {
    if (v == "truncated") cfg.test.la_mean = LaMean::Truncated;
    else if (v == "series") cfg.test.la_mean = LaMean::Series;
    else throw ConfigError("config: la_mean must be truncated or series");
  } else if (key == "bar_mu_weight") {
    if (v == "coefficient") cfg.test.bar_mu.evaluate_at_2j = false;
    else if (v == "evaluation") cfg.test.bar_mu.evaluate_at_2j = true;
    else throw ConfigError("config: bar_mu_weight must be coefficient or evaluation");
  } else if (key == "bar_mu_index") {
    if (v == "degree") cfg.test.bar_mu.half_degree_weight = false;
    else if (v == "half_degree") cfg.test.bar_mu.half_degree_weight = true;
    else throw ConfigError("config: bar_mu_index must be degree or half_degree");
  } else if (key == "oracle_ks") {
    cfg.oracle_ks.clear();
    for (const auto& item : split_list(v)) cfg.oracle_ks.push_back(static_cast<int>(parse_int(key, item)));
  } else if (key == "output") cfg.output_path = v;
  else if (key == "plot") cfg.plot_path = v;
  else if (key == "input") cfg.input_path = v;
  else if (key == "timing") cfg.timing = parse_bool(key, v);
  else throw ConfigError("config: unknown key '" + key + "'");
}

// Parse "key = value" lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> parse_settings(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    out.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return out;
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  for (const auto& [k, v] : parse_settings(is)) apply_setting(cfg, k, v);
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw ConfigError("config: reps must be at least 1");
  if (cfg.n < 2) throw ConfigError("config: n must be at least 2");
  if (!(cfg.p_av > 0.0 && cfg.p_av < 1.0)) throw ConfigError("config: p_av must lie in (0,1)");
  if (cfg.kappa < 1) throw ConfigError("config: kappa must be at least 1");
  if (cfg.statistics.empty()) throw ConfigError("config: no statistics selected");
  if (cfg.experiment == Experiment::PowerCurve) {
    if (cfg.kappa < 2) throw ConfigError("config: power curves need kappa >= 2");
    if (cfg.t_grid.empty()) throw ConfigError("config: t_grid is empty");
    for (double t : cfg.t_grid)
      if (!(t >= 0.0)) throw ConfigError("config: t_grid values must be nonnegative");
  }
  if (cfg.experiment == Experiment::OracleCompare) {
    if (cfg.oracle_ks.empty()) throw ConfigError("config: oracle_ks is empty");
    for (int k : cfg.oracle_ks) {
      if (k < 3) throw ConfigError("config: oracle_ks values must be at least 3");
      if (std::pow(static_cast<double>(cfg.n), k) > kBruteForceGuard)
        throw ConfigError("config: n^k exceeds the brute-force guard for k=" + std::to_string(k) +
                          "; lower n or oracle_ks");
    }
  }
  try {
    for (auto kind : cfg.statistics) {
      TestSpec s = cfg.spec_for(kind);
      if (cfg.experiment == Experiment::PowerCurve && s.needs_t() && !s.t) s.t = 0.5;  // grid supplies t
      s.validate();
    }
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.test.t_correction.kind == TCorrectionMode::Kind::MonteCarlo && cfg.test.t_correction.reps < 1)
    throw ConfigError("config: t_correction=monte_carlo needs mc_reps >= 1");
}

// Canonical description of everything that affects the numbers (not threads
// or output paths).
inline std::string canonical_config(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["experiment"] = to_string(cfg.experiment);
  kv["n"] = std::to_string(cfg.n);
  kv["p_av"] = format_number(cfg.p_av, 17);
  std::string grid;
  for (double t : cfg.t_grid) grid += (grid.empty() ? "" : ",") + format_number(t, 17);
  kv["t_grid"] = grid;
  kv["t"] = cfg.test.t ? format_number(*cfg.test.t, 17) : "none";
  kv["kappa"] = std::to_string(cfg.kappa);
  kv["assortative"] = cfg.assortative ? "true" : "false";
  kv["alpha"] = format_number(cfg.test.alpha, 17);
  kv["reps"] = std::to_string(cfg.reps);
  kv["seed"] = std::to_string(cfg.seed);
  std::string stats;
  for (auto s : cfg.statistics) stats += (stats.empty() ? "" : ",") + std::string(to_string(s));
  kv["statistics"] = stats;
  kv["epsilon"] = format_number(cfg.test.epsilon, 17);
  kv["k"] = cfg.test.k_n ? std::to_string(*cfg.test.k_n) : "auto";
  for (const auto& [kind, k] : cfg.k_by_kind) kv[std::string("k.") + to_string(kind)] = std::to_string(k);
  kv["sign"] = to_string(cfg.test.sign);
  kv["t_correction"] = detail::t_correction_name(cfg.test.t_correction.kind);
  kv["moment_factor"] = detail::moment_factor_name(cfg.test.t_correction.factor);
  kv["mc_reps"] = std::to_string(cfg.test.t_correction.reps);
  kv["mc_seed"] = std::to_string(cfg.test.t_correction.seed);
  kv["oracle_t_correction"] = detail::t_correction_name(cfg.oracle_t_correction.kind);
  kv["centering"] = to_string(cfg.test.centering);
  kv["p_known"] = cfg.test.p_known ? format_number(*cfg.test.p_known, 17) : "none";
  kv["la_mean"] = cfg.test.la_mean == LaMean::Truncated ? "truncated" : "series";
  kv["bar_mu_weight"] = cfg.test.bar_mu.evaluate_at_2j ? "evaluation" : "coefficient";
  kv["bar_mu_index"] = cfg.test.bar_mu.half_degree_weight ? "half_degree" : "degree";
  std::string ks;
  for (int k : cfg.oracle_ks) ks += (ks.empty() ? "" : ",") + std::to_string(k);
  kv["oracle_ks"] = ks;
  kv["input"] = cfg.input_path;
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

// FNV-1a 64 of the canonical config, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---------------------------------------------------------------------------
// Result tables

struct ResultRow {
  std::string experiment;
  std::string statistic;
  std::optional<double> t;
  int n = 0;
  int k = 0;
  int reps_used = 0;
  int rejections = 0;
  double empirical_power = 0.0;  // rejection rate; the type-I error for calibration rows
  double mc_stderr = 0.0;
  std::optional<double> theoretical_power;
  double mean_z = 0.0;
  double var_z = 0.0;
  double mean_statistic = 0.0;
  double var_statistic = 0.0;
  double mean_null_mean = 0.0;
  double null_variance = 0.0;
  bool feasible = true;
  std::string note;
  double wall_time_seconds = 0.0;
};

namespace detail {

struct Moments {
  double mean = 0.0, var = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return m;
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(v.size() - 1);
  return m;
}

inline std::vector<std::optional<TestOutcome>> evaluate_replicate(const GraphSample& g,
                                                                  const std::vector<TestSpec>& specs,
                                                                  const std::optional<ModelParams>& truth) {
  std::vector<std::optional<TestOutcome>> out(specs.size());
  const double p_ref = reference_probability(g, specs.front());
  if (!(p_ref > 0.0 && p_ref < 1.0)) return out;
  const auto spectrum = eigenvalues(CenteredMatrix(g, p_ref, specs.front().centering));
  for (std::size_t i = 0; i < specs.size(); ++i) out[i] = evaluate_test(spectrum, g, p_ref, specs[i], truth);
  return out;
}

inline ResultRow summarize(const std::vector<std::vector<std::optional<TestOutcome>>>& per_rep, std::size_t idx) {
  ResultRow row;
  std::vector<double> z, stat;
  double null_mean_sum = 0.0;
  bool have_k = false;
  for (const auto& rep : per_rep) {
    const auto& o = rep[idx];
    if (!o) continue;
    z.push_back(o->z);
    stat.push_back(o->statistic);
    null_mean_sum += o->null_mean;
    row.rejections += o->reject ? 1 : 0;
    if (!have_k) {
      row.k = o->k_used;
      row.null_variance = o->null_sd * o->null_sd;
      have_k = true;
    }
  }
  row.reps_used = static_cast<int>(z.size());
  const auto skipped = per_rep.size() - z.size();
  if (skipped) row.note = std::to_string(skipped) + " degenerate replicates skipped";
  if (row.reps_used == 0) {
    row.feasible = false;
    row.note = "no usable replicates";
    return row;
  }
  const double reps = row.reps_used;
  row.empirical_power = row.rejections / reps;
  row.mc_stderr = std::sqrt(row.empirical_power * (1.0 - row.empirical_power) / reps);
  const auto mz = moments(z), ms = moments(stat);
  row.mean_z = mz.mean;
  row.var_z = mz.var;
  row.mean_statistic = ms.mean;
  row.var_statistic = ms.var;
  row.mean_null_mean = null_mean_sum / reps;
  return row;
}

inline std::vector<TestSpec> specs_of(const ExperimentConfig& cfg) {
  std::vector<TestSpec> specs;
  for (auto kind : cfg.statistics) specs.push_back(cfg.spec_for(kind));
  return specs;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// Null rejection rates of every configured statistic at level alpha.
inline std::vector<ResultRow> run_calibrate(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto specs = detail::specs_of(cfg);
  std::vector<std::vector<std::optional<TestOutcome>>> per_rep(static_cast<std::size_t>(cfg.reps));
  parallel_for(per_rep.size(), cfg.threads, [&](std::size_t rep) {
    const auto g = sample_er(cfg.n, cfg.p_av, cfg.seed, rep);
    per_rep[rep] = detail::evaluate_replicate(g, specs, std::nullopt);
  });
  const double wall = detail::seconds_since(start);
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto row = detail::summarize(per_rep, i);
    row.experiment = "calibrate";
    row.statistic = to_string(specs[i].kind);
    row.t = specs[i].t;
    row.n = cfg.n;
    row.theoretical_power = cfg.test.alpha;
    row.wall_time_seconds = wall;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rejection rates under a fixed alternative. For statistics that need t, the
// configured t is used if set, otherwise `t_true`. Replicate streams are
// offset by `stream_base` so different alternatives draw independent graphs.
inline std::vector<ResultRow> estimate_power(const ExperimentConfig& cfg, const ModelParams& params,
                                             std::optional<double> t_true, std::uint64_t stream_base) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<TestSpec> specs;
  std::vector<std::string> notes;
  for (auto kind : cfg.statistics) {
    auto s = cfg.spec_for(kind);
    std::string note;
    if (s.needs_t() && !s.t) s.t = t_true;
    try {
      s.validate();
    } catch (const ParameterError& e) {
      note = e.what();
    }
    specs.push_back(s);
    notes.push_back(note);
  }
  std::vector<TestSpec> runnable;
  std::vector<std::size_t> slot(specs.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (notes[i].empty()) {
      slot[i] = runnable.size();
      runnable.push_back(specs[i]);
    }
  std::vector<std::vector<std::optional<TestOutcome>>> per_rep(static_cast<std::size_t>(cfg.reps));
  if (!runnable.empty()) {
    parallel_for(per_rep.size(), cfg.threads, [&](std::size_t rep) {
      const auto g = sample_model(params, cfg.seed, stream_base + rep);
      per_rep[rep] = detail::evaluate_replicate(g, runnable, params);
    });
  }
  const double wall = detail::seconds_since(start);
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ResultRow row;
    if (slot[i] != static_cast<std::size_t>(-1)) row = detail::summarize(per_rep, slot[i]);
    else {
      row.feasible = false;
      row.note = notes[i];
    }
    row.experiment = "power";
    row.statistic = to_string(specs[i].kind);
    row.t = t_true;
    row.n = params.n;
    row.wall_time_seconds = wall;
    if (t_true && *t_true < 1.0) {
      if (specs[i].kind == StatisticKind::LaOptimal || specs[i].kind == StatisticKind::LcOracle)
        row.theoretical_power = optimal_power(cfg.test.alpha, *t_true);
      else if (specs[i].kind == StatisticKind::LoOptimal)
        row.theoretical_power = optimal_power_odd(cfg.test.alpha, *t_true);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Empirical power over the t grid against kappa-block alternatives with
// average probability p_av. Infeasible (p, q) yield marked rows.
inline std::vector<ResultRow> run_power_curve(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<ResultRow> rows;
  for (std::size_t ti = 0; ti < cfg.t_grid.size(); ++ti) {
    const double t = cfg.t_grid[ti];
    ModelParams params;
    try {
      params = params_from_t(cfg.n, cfg.p_av, t, cfg.kappa, cfg.assortative);
    } catch (const ParameterError& e) {
      for (auto kind : cfg.statistics) {
        ResultRow row;
        row.experiment = "power";
        row.statistic = to_string(kind);
        row.t = t;
        row.n = cfg.n;
        row.feasible = false;
        row.note = e.what();
        rows.push_back(std::move(row));
      }
      continue;
    }
    auto block = estimate_power(cfg, params, t, (static_cast<std::uint64_t>(ti) + 1) << 32);
    for (auto& r : block) rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<std::string> result_csv_columns(bool timing) {
  std::vector<std::string> cols{"experiment",   "statistic",      "t",          "n",
                                "k",            "reps_used",      "rejections", "empirical_power",
                                "mc_stderr",    "theoretical_power", "mean_z",  "var_z",
                                "mean_statistic", "var_statistic", "null_mean", "null_variance",
                                "feasible",     "note"};
  if (timing) cols.push_back("wall_time_seconds");
  for (const char* c : {"config_hash", "seed", "version"}) cols.emplace_back(c);
  return cols;
}

inline void write_result_rows(std::ostream& os, const std::vector<ResultRow>& rows, const ExperimentConfig& cfg) {
  const auto hash = config_hash(cfg);
  os << csv_join(result_csv_columns(cfg.timing)) << '\n';
  for (const auto& r : rows) {
    std::vector<std::string> f{r.experiment,
                               r.statistic,
                               format_optional(r.t),
                               std::to_string(r.n),
                               std::to_string(r.k),
                               std::to_string(r.reps_used),
                               std::to_string(r.rejections),
                               format_number(r.empirical_power),
                               format_number(r.mc_stderr),
                               format_optional(r.theoretical_power),
                               format_number(r.mean_z),
                               format_number(r.var_z),
                               format_number(r.mean_statistic),
                               format_number(r.var_statistic),
                               format_number(r.mean_null_mean),
                               format_number(r.null_variance),
                               r.feasible ? "1" : "0",
                               r.note};
    if (cfg.timing) f.push_back(format_number(r.wall_time_seconds, 4));
    f.push_back(hash);
    f.push_back(std::to_string(cfg.seed));
    f.push_back(kVersion);
    os << csv_join(f) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Oracle comparison

struct OracleRow {
  int rep = 0;
  int k = 0;
  double cycle_bruteforce = 0.0;
  double cycle_from_lss = 0.0;
  double diff = 0.0;
};

struct OracleSummary {
  int k = 0;
  int reps_used = 0;
  double sd_diff = 0.0;
  double sd_bruteforce = 0.0;
  double correlation = 0.0;
  double max_abs_diff = 0.0;
};

struct OracleTable {
  std::vector<OracleRow> rows;
  std::vector<OracleSummary> summaries;
  int skipped = 0;
};

// Brute-force signed cycles against their LSS reconstructions on null graphs.
inline OracleTable run_oracle_compare(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto& ks = cfg.oracle_ks;
  std::vector<std::optional<std::vector<OracleRow>>> per_rep(static_cast<std::size_t>(cfg.reps));
  const Centering centering = cfg.test.centering;
  parallel_for(per_rep.size(), cfg.threads, [&](std::size_t rep) {
    const auto g = sample_er(cfg.n, cfg.p_av, cfg.seed, rep);
    const double p_ref = centering == Centering::Known ? cfg.test.p_known.value_or(cfg.p_av) : estimate_p_hat(g);
    if (!(p_ref > 0.0 && p_ref < 1.0)) {
      warn("oracle: replicate " + std::to_string(rep) + " skipped, degenerate centering p=" + format_number(p_ref));
      return;
    }
    const auto spectrum = eigenvalues(CenteredMatrix(g, p_ref, centering));
    std::vector<OracleRow> rows;
    for (int k : ks) {
      OracleRow r;
      r.rep = static_cast<int>(rep);
      r.k = k;
      r.cycle_bruteforce = signed_cycle_bruteforce(g, p_ref, k);
      r.cycle_from_lss = k % 2 ? cycle_from_lss_odd(spectrum, k)
                               : cycle_from_lss_even(spectrum, g, p_ref, k, cfg.oracle_t_correction);
      r.diff = r.cycle_from_lss - r.cycle_bruteforce;
      rows.push_back(r);
    }
    per_rep[rep] = std::move(rows);
  });
  OracleTable table;
  for (auto& rep : per_rep) {
    if (!rep) {
      ++table.skipped;
      continue;
    }
    for (auto& r : *rep) table.rows.push_back(r);
  }
  for (int k : ks) {
    std::vector<double> brute, lss, diff;
    for (const auto& r : table.rows)
      if (r.k == k) {
        brute.push_back(r.cycle_bruteforce);
        lss.push_back(r.cycle_from_lss);
        diff.push_back(r.diff);
      }
    OracleSummary s;
    s.k = k;
    s.reps_used = static_cast<int>(brute.size());
    const auto mb = detail::moments(brute), ml = detail::moments(lss), md = detail::moments(diff);
    s.sd_diff = std::sqrt(md.var);
    s.sd_bruteforce = std::sqrt(mb.var);
    double cov = 0.0;
    for (std::size_t i = 0; i < brute.size(); ++i) cov += (brute[i] - mb.mean) * (lss[i] - ml.mean);
    if (brute.size() > 1) cov /= static_cast<double>(brute.size() - 1);
    s.correlation = mb.var > 0 && ml.var > 0 ? cov / std::sqrt(mb.var * ml.var) : 0.0;
    for (double d : diff) s.max_abs_diff = std::max(s.max_abs_diff, std::abs(d));
    table.summaries.push_back(s);
  }
  return table;
}

inline void write_oracle_rows(std::ostream& os, const OracleTable& table, const ExperimentConfig& cfg) {
  const auto hash = config_hash(cfg);
  os << "rep,k,cycle_bruteforce,cycle_from_lss,diff,config_hash,seed,version\n";
  for (const auto& r : table.rows)
    os << csv_join({std::to_string(r.rep), std::to_string(r.k), format_number(r.cycle_bruteforce, 15),
                    format_number(r.cycle_from_lss, 15), format_number(r.diff, 15), hash, std::to_string(cfg.seed),
                    kVersion})
       << '\n';
}

inline void write_oracle_summary(std::ostream& os, const OracleTable& table) {
  os << "k,reps_used,sd_diff,sd_bruteforce,correlation,max_abs_diff\n";
  for (const auto& s : table.summaries)
    os << csv_join({std::to_string(s.k), std::to_string(s.reps_used), format_number(s.sd_diff),
                    format_number(s.sd_bruteforce), format_number(s.correlation), format_number(s.max_abs_diff)})
       << '\n';
}

// ---------------------------------------------------------------------------
// SVG power plot

inline void write_power_svg(std::ostream& os, const std::vector<ResultRow>& rows, double alpha) {
  const double w = 640, h = 440, left = 60, right = 150, top = 20, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  double t_max = 1.0;
  for (const auto& r : rows)
    if (r.t) t_max = std::max(t_max, *r.t);
  auto X = [&](double t) { return left + pw * t / t_max; };
  auto Y = [&](double p) { return top + ph * (1.0 - p); };
  auto curve = [&](auto power, const char* colour, const char* dash) {
    std::string pts;
    for (int i = 0; i <= 198; ++i) {
      const double t = 0.99 * i / 198.0;
      pts += format_number(X(t), 6) + "," + format_number(Y(power(t)), 6) + " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-dasharray=\"" << dash << "\" points=\"" << pts
       << "\"/>\n";
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << Y(0) << "\" x2=\"" << left + pw << "\" y2=\"" << Y(0) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << Y(0) << "\" x2=\"" << left << "\" y2=\"" << Y(1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    os << "<text x=\"" << left - 8 << "\" y=\"" << Y(v) + 4 << "\" text-anchor=\"end\">" << format_number(v, 2) << "</text>\n";
    os << "<text x=\"" << X(v * t_max) << "\" y=\"" << Y(0) + 16 << "\" text-anchor=\"middle\">"
       << format_number(v * t_max, 2) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">t</text>\n";
  os << "<text x=\"15\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 15 " << top + ph / 2
     << ")\" text-anchor=\"middle\">power</text>\n";
  curve([&](double t) { return optimal_power(alpha, t); }, "black", "none");
  curve([&](double t) { return optimal_power_odd(alpha, t); }, "gray", "6,3");
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::vector<std::string> names;
  for (const auto& r : rows)
    if (std::find(names.begin(), names.end(), r.statistic) == names.end()) names.push_back(r.statistic);
  for (std::size_t s = 0; s < names.size(); ++s) {
    const char* colour = palette[s % 5];
    for (const auto& r : rows) {
      if (r.statistic != names[s] || !r.feasible || !r.t) continue;
      const double x = X(*r.t), y = Y(r.empirical_power);
      const double lo = Y(std::max(0.0, r.empirical_power - 2 * r.mc_stderr));
      const double hi = Y(std::min(1.0, r.empirical_power + 2 * r.mc_stderr));
      os << "<line x1=\"" << x << "\" y1=\"" << lo << "\" x2=\"" << x << "\" y2=\"" << hi << "\" stroke=\"" << colour << "\"/>\n";
      os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = top + 20 + 18 * s;
    os << "<circle cx=\"" << left + pw + 20 << "\" cy=\"" << ly << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    os << "<text x=\"" << left + pw + 30 << "\" y=\"" << ly + 4 << "\">" << names[s] << "</text>\n";
  }
  const double ly = top + 20 + 18 * names.size();
  os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 28 << "\" y2=\"" << ly << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + pw + 30 << "\" y=\"" << ly + 4 << "\">optimal, all</text>\n";
  os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly + 18 << "\" x2=\"" << left + pw + 28 << "\" y2=\"" << ly + 18
     << "\" stroke=\"gray\" stroke-dasharray=\"6,3\"/>\n";
  os << "<text x=\"" << left + pw + 30 << "\" y=\"" << ly + 22 << "\">optimal, odd</text>\n";
  os << "</svg>\n";
}

}  // namespace sbmlss
