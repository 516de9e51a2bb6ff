// sbmlss: generate graphs, run single tests, and drive Monte Carlo
// calibration, power and oracle experiments.
//
// Exit codes: 0 ok, 1 identity failure, 2 config error, 3 numerical error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbmlss/graph_models.hpp"
#include "sbmlss/harness.hpp"
#include "sbmlss/identities.hpp"
#include "sbmlss/statistics.hpp"
#include "sbmlss/version.hpp"

namespace {

enum ExitCode { kOk = 0, kIdentityFailure = 1, kConfigError = 2, kNumericalError = 3 };

// Flags that map one-to-one onto config keys. Each is stored as text and
// applied after the config file so flags win.
struct SettingFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::vector<std::string> extra;  // --set key=value

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    options[key] = app->add_option(flag, values[key], help);
  }

  void apply(sbmlss::ExperimentConfig& cfg) const {
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) sbmlss::apply_setting(cfg, key, values.at(key));
    for (const auto& kv : extra) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw sbmlss::ConfigError("--set expects key=value, got '" + kv + "'");
      sbmlss::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
};

std::uint64_t default_seed() {
  const char* env = std::getenv(sbmlss::kSeedEnvVar);
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw sbmlss::ConfigError(std::string(sbmlss::kSeedEnvVar) + " must be a nonnegative integer");
  }
}

void add_common(CLI::App* app, SettingFlags& flags, std::string& config_path) {
  app->add_option("-c,--config", config_path, "key=value config file");
  flags.add(app, "--n", "n", "number of nodes");
  flags.add(app, "--p-av", "p_av", "average edge probability");
  flags.add(app, "--reps", "reps", "Monte Carlo replicates");
  flags.add(app, "--seed", "seed", "base seed (default from $SBMLSS_SEED, else 1)");
  flags.add(app, "--threads", "threads", "worker threads");
  flags.add(app, "--statistics", "statistics", "comma list of Lc, La, Lo, adaptive_odd, adaptive_all");
  flags.add(app, "--t", "t", "hypothesized t for Lc, La, Lo");
  flags.add(app, "--alpha", "alpha", "test level");
  flags.add(app, "--epsilon", "epsilon", "adaptive exponent in (0, 0.5]");
  flags.add(app, "--k", "k", "maximum polynomial degree or 'auto'");
  flags.add(app, "--sign", "sign", "assortative, disassortative or auto");
  flags.add(app, "--centering", "centering", "estimated or known");
  flags.add(app, "--t-correction", "t_correction", "exact_small, plug_in or monte_carlo");
  flags.add(app, "--output", "output", "output CSV path (default stdout)");
  app->add_option("--set", flags.extra, "extra key=value settings")->take_all();
}

sbmlss::ExperimentConfig build_config(sbmlss::Experiment exp, const std::string& config_path, const SettingFlags& flags) {
  sbmlss::ExperimentConfig cfg;
  cfg.seed = default_seed();
  if (!config_path.empty()) sbmlss::load_config_file(cfg, config_path);
  flags.apply(cfg);
  cfg.experiment = exp;
  return cfg;
}

// Writes to the configured output path or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw sbmlss::ConfigError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral tests of Erdos-Renyi graphs against stochastic block models"};
  app.set_version_flag("--version", std::string(sbmlss::kVersion));
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a graph and write it as an edge list");
  int gen_n = 500, gen_kappa = 1;
  double gen_p = 0.1;
  std::optional<double> gen_t, gen_q;
  bool gen_disassortative = false;
  std::string gen_out, gen_labels;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--n", gen_n, "number of nodes");
  gen->add_option("--p-av,--p", gen_p, "edge probability (average probability when --t is given, within-block when --q is given)");
  gen->add_option("--kappa", gen_kappa, "number of blocks; 1 samples Erdos-Renyi");
  gen->add_option("--t", gen_t, "signal strength; sets p and q from p_av");
  gen->add_option("--q", gen_q, "across-block probability");
  gen->add_flag("--disassortative", gen_disassortative, "p < q when built from --t");
  gen->add_option("--seed", gen_seed, "seed (default from $SBMLSS_SEED, else 1)");
  gen->add_option("-o,--output", gen_out, "edge list path (default stdout)");
  gen->add_option("--labels", gen_labels, "write block labels, one per line");

  // test
  auto* test = app.add_subcommand("test", "run one test on an edge-list graph");
  std::string test_input, test_format = "json", test_stat = "adaptive_odd", test_config;
  SettingFlags test_flags;
  test->add_option("input", test_input, "edge-list file")->required();
  test->add_option("-c,--config", test_config, "key=value config file");
  test->add_option("--statistic", test_stat, "Lc, La, Lo, adaptive_odd or adaptive_all");
  test->add_option("--format", test_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  test_flags.add(test, "--t", "t", "hypothesized t");
  test_flags.add(test, "--alpha", "alpha", "test level");
  test_flags.add(test, "--epsilon", "epsilon", "adaptive exponent");
  test_flags.add(test, "--k", "k", "maximum polynomial degree or 'auto'");
  test_flags.add(test, "--sign", "sign", "assortative or disassortative");
  test_flags.add(test, "--centering", "centering", "estimated or known");
  test_flags.add(test, "--p-known", "p_known", "reference probability for known centering");
  test_flags.add(test, "--t-correction", "t_correction", "exact_small, plug_in or monte_carlo");
  test->add_option("--set", test_flags.extra, "extra key=value settings")->take_all();

  // calibrate / power / oracle
  auto* cal = app.add_subcommand("calibrate", "null rejection rates of the configured statistics");
  SettingFlags cal_flags;
  std::string cal_config;
  add_common(cal, cal_flags, cal_config);

  auto* pow = app.add_subcommand("power", "empirical power curve against block-model alternatives");
  SettingFlags pow_flags;
  std::string pow_config, plot_path;
  add_common(pow, pow_flags, pow_config);
  pow_flags.add(pow, "--t-grid", "t_grid", "comma list of signal strengths");
  pow_flags.add(pow, "--kappa", "kappa", "number of blocks");
  pow->add_option("--plot", plot_path, "write an SVG power plot");

  auto* ora = app.add_subcommand("oracle", "brute-force signed cycles versus their spectral reconstructions");
  SettingFlags ora_flags;
  std::string ora_config, ora_summary;
  add_common(ora, ora_flags, ora_config);
  ora_flags.add(ora, "--ks", "oracle_ks", "comma list of cycle lengths");
  ora->add_option("--summary", ora_summary, "write the per-k summary CSV here (default stderr)");

  auto* ids = app.add_subcommand("identities", "check the exact combinatorial identities");
  int table_degree = 0;
  ids->add_option("--tables", table_degree, "also print coefficient tables up to this degree as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) {
      const std::uint64_t seed = gen_seed ? *gen_seed : default_seed();
      std::optional<sbmlss::GraphSample> g;
      if (gen_kappa <= 1) {
        g = sbmlss::sample_er(gen_n, gen_p, seed);
      } else {
        sbmlss::ModelParams params;
        if (gen_t) {
          params = sbmlss::params_from_t(gen_n, gen_p, *gen_t, gen_kappa, !gen_disassortative);
        } else {
          if (!gen_q) throw sbmlss::ConfigError("generate: kappa > 1 needs --t or --q");
          params = {gen_n, gen_kappa, gen_p, *gen_q};
        }
        g = sbmlss::sample_model(params, seed);
      }
      Output out(gen_out);
      sbmlss::write_edge_list(*g, out.stream());
      if (!gen_labels.empty() && g->labels()) {
        std::ofstream lf(gen_labels);
        if (!lf) throw sbmlss::ConfigError("cannot open " + gen_labels + " for writing");
        for (int l : *g->labels()) lf << l << '\n';
      }
      return kOk;
    }

    if (*test) {
      sbmlss::ExperimentConfig cfg;
      cfg.seed = default_seed();
      if (!test_config.empty()) sbmlss::load_config_file(cfg, test_config);
      test_flags.apply(cfg);
      const auto g = sbmlss::load_edge_list(test_input);
      auto spec = cfg.spec_for(sbmlss::parse_statistic_kind(test_stat));
      if (spec.centering == sbmlss::Centering::Known && !cfg.test.p_known)
        throw sbmlss::ConfigError("test: known centering needs --p-known");
      try {
        spec.validate();
      } catch (const sbmlss::ParameterError& e) {
        throw sbmlss::ConfigError(e.what());
      }
      const auto outcome = sbmlss::run_test(g, spec);
      if (test_format == "json") {
        std::cout << sbmlss::to_json(outcome).dump() << '\n';
      } else {
        auto cols = sbmlss::outcome_csv_columns();
        auto fields = sbmlss::outcome_csv_fields(outcome);
        cols.insert(cols.end(), {"config_hash", "seed", "version"});
        fields.insert(fields.end(), {sbmlss::config_hash(cfg), std::to_string(cfg.seed), sbmlss::kVersion});
        std::cout << sbmlss::csv_join(cols) << '\n' << sbmlss::csv_join(fields) << '\n';
      }
      return kOk;
    }

    if (*cal) {
      const auto cfg = build_config(sbmlss::Experiment::Calibrate, cal_config, cal_flags);
      const auto rows = sbmlss::run_calibrate(cfg);
      Output out(cfg.output_path);
      sbmlss::write_result_rows(out.stream(), rows, cfg);
      return kOk;
    }

    if (*pow) {
      auto cfg = build_config(sbmlss::Experiment::PowerCurve, pow_config, pow_flags);
      if (!plot_path.empty()) cfg.plot_path = plot_path;
      const auto rows = sbmlss::run_power_curve(cfg);
      Output out(cfg.output_path);
      sbmlss::write_result_rows(out.stream(), rows, cfg);
      if (!cfg.plot_path.empty()) {
        std::ofstream svg(cfg.plot_path);
        if (!svg) throw sbmlss::ConfigError("cannot open " + cfg.plot_path + " for writing");
        sbmlss::write_power_svg(svg, rows, cfg.test.alpha);
      }
      return kOk;
    }

    if (*ora) {
      auto cfg = build_config(sbmlss::Experiment::OracleCompare, ora_config, ora_flags);
      if (ora_flags.options.at("n")->count() == 0 && ora_config.empty()) cfg.n = 20;
      const auto table = sbmlss::run_oracle_compare(cfg);
      Output out(cfg.output_path);
      sbmlss::write_oracle_rows(out.stream(), table, cfg);
      if (!ora_summary.empty()) {
        std::ofstream sf(ora_summary);
        if (!sf) throw sbmlss::ConfigError("cannot open " + ora_summary + " for writing");
        sbmlss::write_oracle_summary(sf, table);
      } else {
        sbmlss::write_oracle_summary(std::cerr, table);
      }
      return kOk;
    }

    if (*ids) {
      const bool ok = sbmlss::print_identities(sbmlss::run_identities(), std::cout);
      if (table_degree > 0) sbmlss::write_coefficient_tables(std::cout, table_degree);
      return ok ? kOk : kIdentityFailure;
    }
  } catch (const sbmlss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const sbmlss::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kConfigError;
  } catch (const sbmlss::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kOk;
}
