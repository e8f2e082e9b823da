#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spde_bayes/config.hpp"
#include "spde_bayes/csv.hpp"
#include "spde_bayes/diagnostics.hpp"
#include "spde_bayes/errors.hpp"
#include "spde_bayes/estimators.hpp"
#include "spde_bayes/experiment.hpp"
#include "spde_bayes/mle.hpp"
#include "spde_bayes/monte_carlo.hpp"
#include "spde_bayes/path_simulator.hpp"
#include "spde_bayes/posterior.hpp"
#include "spde_bayes/prior_loss.hpp"

namespace sb = spde_bayes;

namespace {

struct SourceOptions {
  std::string set = "I-a0";
  std::string config;
};

void add_source(CLI::App *cmd, SourceOptions &src) {
  cmd->add_option("--set", src.set, "Built-in parameter set: I-a0, I-a0999, II")
      ->capture_default_str();
  cmd->add_option("--config", src.config, "Experiment config file (overrides --set)");
}

sb::ExperimentConfig load(const SourceOptions &src) {
  if (!src.config.empty()) {
    return sb::load_experiment_config(src.config);
  }
  return sb::builtin_config(sb::parse_parameter_set(src.set));
}

std::filesystem::path default_out_root() {
  if (const char *env = std::getenv("SPDE_BAYES_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "out";
}

// Writes to `file`, or stdout when empty.
void emit(const sb::CsvTable &table, const std::string &file) {
  if (file.empty()) {
    std::cout << table.str();
  } else {
    table.write(file);
  }
}

double fisher_from(const sb::ExperimentConfig &cfg, std::optional<double> fisher, int n_modes) {
  if (fisher) {
    return *fisher;
  }
  return sb::fisher_info(cfg.model.build(), n_modes);
}

int run(int argc, char **argv) {
  CLI::App app{"Drift-parameter inference for diagonalizable parabolic SPDEs"};
  app.require_subcommand(1);

  // simulate
  SourceOptions sim_src;
  std::uint64_t sim_seed = 1;
  int sim_modes = 4;
  std::optional<double> sim_dt;
  std::string sim_out;
  auto *simulate = app.add_subcommand("simulate", "Simulate Fourier modes and write paths as CSV");
  add_source(simulate, sim_src);
  simulate->add_option("--seed", sim_seed)->capture_default_str();
  simulate->add_option("--n-modes", sim_modes)->capture_default_str();
  simulate->add_option("--dt", sim_dt, "Time step (default from config)");
  simulate->add_option("--out", sim_out, "Output CSV (default stdout)");

  // estimate
  SourceOptions est_src;
  std::string est_route = "increments";
  int est_modes = 20;
  std::vector<std::uint64_t> est_seeds{1};
  std::optional<double> est_dt;
  auto *estimate = app.add_subcommand("estimate", "MLE of theta from simulated modes");
  add_source(estimate, est_src);
  estimate->add_option("--route", est_route, "increments | endpoints | oracle")
      ->capture_default_str();
  estimate->add_option("--n-modes", est_modes)->capture_default_str();
  estimate->add_option("--seed", est_seeds, "One or more seeds")->capture_default_str();
  estimate->add_option("--dt", est_dt, "Time step (default from config)");

  // posterior / bayes / bvm share theta-hat and Fisher inputs
  SourceOptions post_src;
  double post_theta_hat = 0.3;
  std::optional<double> post_fisher;
  int post_modes = 2;
  std::string post_prior = "uniform";
  double post_min = 0.0, post_max = 1.0;
  int post_points = 401;
  auto *posterior = app.add_subcommand("posterior", "Posterior density on a theta grid");
  add_source(posterior, post_src);
  posterior->add_option("--theta-hat", post_theta_hat)->capture_default_str();
  posterior->add_option("--fisher", post_fisher, "Fisher information (default from --n-modes)");
  posterior->add_option("--n-modes", post_modes)->capture_default_str();
  posterior->add_option("--prior", post_prior, "uniform | tnormal:mu0,var0")
      ->capture_default_str();
  posterior->add_option("--min", post_min)->capture_default_str();
  posterior->add_option("--max", post_max)->capture_default_str();
  posterior->add_option("--points", post_points)->capture_default_str();

  SourceOptions bayes_src;
  double bayes_theta_hat = 0.3;
  std::optional<double> bayes_fisher;
  int bayes_modes = 2;
  std::string bayes_prior = "uniform";
  std::string bayes_loss = "quadratic";
  bool bayes_scaled = false;
  auto *bayes = app.add_subcommand("bayes", "Bayes estimator for a posterior and loss");
  add_source(bayes, bayes_src);
  bayes->add_option("--theta-hat", bayes_theta_hat)->capture_default_str();
  bayes->add_option("--fisher", bayes_fisher, "Fisher information (default from --n-modes)");
  bayes->add_option("--n-modes", bayes_modes)->capture_default_str();
  bayes->add_option("--prior", bayes_prior)->capture_default_str();
  bayes->add_option("--loss", bayes_loss, "quadratic | power:a | exp-power:r")
      ->capture_default_str();
  bayes->add_flag("--scaled", bayes_scaled, "Minimize the sqrt(I_N)-scaled loss");

  SourceOptions bvm_src;
  double bvm_theta_hat = 0.3;
  std::vector<int> bvm_modes{1, 2, 4, 8, 16, 20};
  std::string bvm_prior = "uniform";
  auto *bvm = app.add_subcommand("bvm", "L1 distance of the rescaled posterior to N(0,1)");
  add_source(bvm, bvm_src);
  bvm->add_option("--theta-hat", bvm_theta_hat)->capture_default_str();
  bvm->add_option("--n-modes", bvm_modes)->capture_default_str();
  bvm->add_option("--prior", bvm_prior)->capture_default_str();

  // experiment
  SourceOptions exp_src;
  std::string exp_out;
  int exp_workers = -1;
  auto *experiment = app.add_subcommand("experiment", "Run a parameter set and write its tables");
  add_source(experiment, exp_src);
  experiment->add_option("--out", exp_out,
                         "Output directory (default $SPDE_BAYES_OUT/<config dir>)");
  experiment->add_option("--workers", exp_workers, "Worker threads (0 = all cores)");

  // mc
  SourceOptions mc_src;
  std::string mc_suite;
  int mc_replicates = 0;
  std::string mc_route;
  std::string mc_out;
  int mc_workers = -1;
  auto *mc = app.add_subcommand("mc", "Monte Carlo validation suites");
  add_source(mc, mc_src);
  mc->add_option("--suite", mc_suite, "pivot | consistency | gap | routes")
      ->required()
      ->check(CLI::IsMember({"pivot", "consistency", "gap", "routes"}));
  mc->add_option("--replicates", mc_replicates, "Replicate count (default from config)");
  mc->add_option("--route", mc_route, "Estimator route (pivot/consistency default oracle)");
  mc->add_option("--out", mc_out, "Output CSV (default stdout)");
  mc->add_option("--workers", mc_workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*simulate) {
    auto cfg = load(sim_src);
    const auto model = cfg.model.build();
    const auto grid = sb::SimulationGrid::from_dt(sim_dt.value_or(cfg.dt), cfg.model.horizon);
    const auto u0 = cfg.initial.materialize(sim_modes);
    const auto paths = sb::simulate_modes(model, cfg.theta_true, u0, grid, sim_seed);
    if (sim_out.empty()) {
      sb::write_path_csv(paths, std::cout);
    } else {
      std::ofstream out(sim_out, std::ios::binary);
      sb::write_path_csv(paths, out);
      if (!out) {
        throw sb::IoError("cannot write " + sim_out);
      }
    }
  } else if (*estimate) {
    auto cfg = load(est_src);
    const auto model = cfg.model.build();
    const auto route = sb::parse_mle_route(est_route);
    const auto grid = sb::SimulationGrid::from_dt(est_dt.value_or(cfg.dt), cfg.model.horizon);
    const auto u0 = cfg.initial.materialize(est_modes);
    sb::CsvTable t({"seed", "route", "N", "theta_hat", "theta_hat_mle", "fisher", "pivot"});
    for (auto seed : est_seeds) {
      const auto paths = sb::simulate_modes(model, cfg.theta_true, u0, grid, seed,
                                            sb::StorageMode::StatisticsOnly);
      const auto r = route == sb::MleRoute::Oracle
                         ? sb::oracle::estimate_theta(model, paths, est_modes, route)
                         : sb::estimate_theta(model, paths.observable_only(), est_modes, route);
      t.add_row({std::to_string(seed), std::string(sb::to_string(route)),
                 std::to_string(est_modes), sb::format_double(r.theta_hat),
                 sb::format_double(r.theta_hat_mle), sb::format_double(r.fisher),
                 sb::format_double(sb::pivot(r, cfg.theta_true))});
    }
    std::cout << t.str();
  } else if (*posterior) {
    auto cfg = load(post_src);
    const sb::Posterior post(post_theta_hat, fisher_from(cfg, post_fisher, post_modes),
                             sb::parse_prior(post_prior));
    if (post_points < 2 || !(post_max > post_min)) {
      throw sb::ConfigError("posterior: need --max > --min and --points >= 2");
    }
    sb::CsvTable t({"theta", "density"});
    const double step = (post_max - post_min) / (post_points - 1);
    for (int j = 0; j < post_points; ++j) {
      const double theta = post_min + step * j;
      t.add_row({sb::format_double(theta), sb::format_double(post.density(theta))});
    }
    std::cout << t.str();
  } else if (*bayes) {
    auto cfg = load(bayes_src);
    const sb::Posterior post(bayes_theta_hat, fisher_from(cfg, bayes_fisher, bayes_modes),
                             sb::parse_prior(bayes_prior));
    const auto est = sb::bayes_estimator(post, sb::parse_loss(bayes_loss), bayes_scaled);
    sb::CsvTable t({"beta", "scaled", "loss", "prior", "risk", "iterations", "tolerance",
                    "boundary", "locally_optimal"});
    t.add_row({sb::format_double(est.beta), est.scaled ? "1" : "0", est.loss.describe(),
               post.prior().describe(), sb::format_double(est.risk_at_min),
               std::to_string(est.optimizer_iterations), sb::format_double(est.bracket_tolerance),
               est.boundary ? "1" : "0", est.locally_optimal ? "1" : "0"});
    std::cout << t.str();
  } else if (*bvm) {
    auto cfg = load(bvm_src);
    const auto model = cfg.model.build();
    const auto prior = sb::parse_prior(bvm_prior);
    sb::CsvTable t({"N", "distance"});
    for (int n : bvm_modes) {
      const sb::Posterior post(bvm_theta_hat, sb::fisher_info(model, n), prior);
      t.add_row({std::to_string(n), sb::format_double(sb::bvm_distance(post))});
    }
    std::cout << t.str();
  } else if (*experiment) {
    auto cfg = load(exp_src);
    if (exp_workers >= 0) {
      cfg.workers = exp_workers;
    }
    const std::filesystem::path dir =
        exp_out.empty() ? default_out_root() / cfg.output_dir : std::filesystem::path(exp_out);
    const auto result = sb::run_experiment(cfg);
    for (const auto &file : sb::emit_plot_data(result, sb::PlotKind::All, dir)) {
      std::cout << file.string() << "\n";
    }
  } else if (*mc) {
    auto cfg = load(mc_src);
    if (mc_replicates > 0) {
      cfg.replicates = mc_replicates;
    }
    if (mc_workers >= 0) {
      cfg.workers = mc_workers;
    }
    if (mc_suite == "pivot") {
      const auto route = mc_route.empty() ? sb::MleRoute::Oracle : sb::parse_mle_route(mc_route);
      emit(sb::mc_pivot_suite(cfg, route).to_csv(), mc_out);
    } else if (mc_suite == "consistency") {
      const auto route = mc_route.empty() ? sb::MleRoute::Oracle : sb::parse_mle_route(mc_route);
      emit(sb::mc_consistency_suite(cfg, route).to_csv(), mc_out);
    } else if (mc_suite == "gap") {
      if (!mc_route.empty()) {
        cfg.route = sb::parse_mle_route(mc_route);
      }
      emit(sb::mc_gap_suite(cfg).to_csv(), mc_out);
    } else {
      const int n = cfg.n_list.back();
      emit(sb::mc_route_gap_suite(cfg, n, {cfg.dt, cfg.dt / 2}, cfg.replicates, cfg.replicates)
               .to_csv(),
           mc_out);
    }
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const sb::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const sb::NumericError &e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const sb::IoError &e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::logic_error &e) {
    // Domain, range and capability violations are input problems.
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
