#include "spde_bayes/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spde_bayes/diagnostics.hpp"
#include "spde_bayes/errors.hpp"
#include "spde_bayes/estimators.hpp"
#include "spde_bayes/experiment.hpp"
#include "spde_bayes/ks.hpp"
#include "spde_bayes/parallel.hpp"
#include "spde_bayes/path_simulator.hpp"
#include "spde_bayes/posterior.hpp"
#include "spde_bayes/prior_loss.hpp"
#include "spde_bayes/summation.hpp"

namespace spde_bayes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Pilot replicates live in a separate index range so they never coincide
// with the acceptance seeds.
constexpr std::uint64_t kPilotOffset = std::uint64_t{1} << 40;

SimulationGrid grid_for(const ExperimentConfig &c, MleRoute route) {
  if (route == MleRoute::Increments) {
    return SimulationGrid::from_dt(c.dt, c.model.horizon);
  }
  return SimulationGrid::from_steps(1, c.model.horizon);
}

// θ̂_N for every N in n_list and every replicate: [n index][replicate].
std::vector<std::vector<double>> theta_hat_table(const ExperimentConfig &c, MleRoute route,
                                                 std::vector<double> &fisher) {
  c.validate();
  const auto model = c.model.build();
  const auto u0 = c.initial.materialize(c.max_modes());
  const auto grid = grid_for(c, route);
  const auto reps = static_cast<std::size_t>(c.replicates);
  std::vector<std::vector<double>> table(c.n_list.size(), std::vector<double>(reps));
  parallel_for(reps, c.workers, [&](std::size_t r) {
    const auto paths = simulate_modes(model, c.theta_true, u0, grid,
                                      replicate_seed(c.master_seed, r),
                                      StorageMode::StatisticsOnly);
    for (std::size_t i = 0; i < c.n_list.size(); ++i) {
      table[i][r] = oracle::estimate_theta(model, paths, c.n_list[i], route).theta_hat;
    }
  });
  fisher.clear();
  for (int n : c.n_list) {
    fisher.push_back(fisher_info(model, n));
  }
  return table;
}

} // namespace

CsvTable PivotSuiteResult::to_csv() const {
  CsvTable t({"N", "route", "replicates", "fisher", "ks", "critical", "mean", "variance",
              "exact_level", "pass"});
  for (const auto &r : rows) {
    t.add_row({std::to_string(r.n), std::string(to_string(r.route)),
               std::to_string(r.replicates), format_double(r.fisher), format_double(r.ks),
               format_double(r.critical), format_double(r.mean), format_double(r.variance),
               r.exact_level ? "1" : "0", r.pass ? "1" : "0"});
  }
  return t;
}

PivotSuiteResult mc_pivot_suite(const ExperimentConfig &config, MleRoute route,
                                int min_replicates) {
  if (!(config.model.sigma > 0.0)) {
    throw ConfigError("pivot suite: sigma = 0 leaves the pivot undefined");
  }
  if (config.replicates < min_replicates) {
    throw ConfigError("pivot suite: needs at least " + std::to_string(min_replicates) +
                      " replicates");
  }
  std::vector<double> fisher;
  const auto table = theta_hat_table(config, route, fisher);
  PivotSuiteResult out;
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    std::vector<double> pivots;
    pivots.reserve(table[i].size());
    const double root = std::sqrt(fisher[i]);
    for (double th : table[i]) {
      pivots.push_back(root * (th - config.theta_true));
    }
    const double m = static_cast<double>(pivots.size());
    PivotSuiteRow row;
    row.n = config.n_list[i];
    row.route = route;
    row.replicates = static_cast<int>(pivots.size());
    row.fisher = fisher[i];
    row.ks = ks_statistic(pivots);
    row.critical = ks_critical_1pct(pivots.size());
    row.mean = compensated_sum(pivots) / m;
    CompensatedSum ss;
    for (double z : pivots) {
      ss += (z - row.mean) * (z - row.mean);
    }
    row.variance = ss.value() / (m - 1.0);
    row.exact_level = route == MleRoute::Oracle;
    row.pass = row.ks < row.critical;
    out.rows.push_back(row);
  }
  return out;
}

CsvTable ConsistencyResult::to_csv() const {
  CsvTable t({"N", "replicates", "fisher", "bound", "fraction_within", "max_abs_error",
              "q99_abs_error"});
  for (const auto &r : rows) {
    t.add_row({std::to_string(r.n), std::to_string(r.replicates), format_double(r.fisher),
               format_double(r.bound), format_double(r.fraction_within),
               format_double(r.max_abs_error), format_double(r.q99_abs_error)});
  }
  return t;
}

ConsistencyResult mc_consistency_suite(const ExperimentConfig &config, MleRoute route,
                                       double multiple) {
  std::vector<double> fisher;
  const auto table = theta_hat_table(config, route, fisher);
  ConsistencyResult out;
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    ConsistencyRow row;
    row.n = config.n_list[i];
    row.replicates = static_cast<int>(table[i].size());
    row.fisher = fisher[i];
    row.bound = multiple / std::sqrt(fisher[i]);
    std::vector<double> errors;
    int within = 0;
    for (double th : table[i]) {
      const double e = std::abs(th - config.theta_true);
      errors.push_back(e);
      within += e < row.bound ? 1 : 0;
    }
    row.fraction_within = static_cast<double>(within) / static_cast<double>(errors.size());
    row.max_abs_error = *std::max_element(errors.begin(), errors.end());
    row.q99_abs_error = sample_quantile(errors, 0.99);
    out.rows.push_back(row);
  }
  return out;
}

const GapSuiteRow &GapSuiteResult::find(int n, std::string_view prior,
                                        std::string_view loss) const {
  for (const auto &r : rows) {
    if (r.n == n && r.prior == prior && r.loss == loss) {
      return r;
    }
  }
  throw std::out_of_range("gap suite has no row for the requested key");
}

CsvTable GapSuiteResult::to_csv() const {
  CsvTable t({"N", "prior", "loss", "replicates", "median_gap_tilde", "median_gap_hat",
              "median_lhs", "rhs", "median_abs_diff"});
  for (const auto &r : rows) {
    t.add_row({std::to_string(r.n), r.prior, r.loss, std::to_string(r.replicates),
               format_double(r.median_gap_tilde), format_double(r.median_gap_hat),
               format_double(r.median_lhs), format_double(r.rhs),
               format_double(r.median_abs_diff)});
  }
  return t;
}

GapSuiteResult mc_gap_suite(const ExperimentConfig &config) {
  config.validate();
  const auto model = config.model.build();
  const auto u0 = config.initial.materialize(config.max_modes());
  const auto grid = grid_for(config, config.route);
  std::vector<Prior> priors;
  std::vector<LossFunction> losses;
  for (const auto &p : config.priors) {
    priors.push_back(parse_prior(p));
  }
  for (const auto &l : config.losses) {
    losses.push_back(parse_loss(l));
  }
  const auto reps = static_cast<std::size_t>(config.replicates);
  const auto nn = config.n_list.size();
  const auto np = priors.size();
  const auto nl = losses.size();
  // [((i·np + p)·nl + l)][replicate] for each tracked quantity.
  const auto cells = nn * np * nl;
  std::vector<std::vector<double>> tilde(cells, std::vector<double>(reps));
  std::vector<std::vector<double>> hat = tilde, lhs = tilde, diff = tilde;
  std::vector<double> rhs(cells, kNaN);

  parallel_for(reps, config.workers, [&](std::size_t r) {
    const auto paths = simulate_modes(model, config.theta_true, u0, grid,
                                      replicate_seed(config.master_seed, r),
                                      StorageMode::StatisticsOnly);
    for (std::size_t i = 0; i < nn; ++i) {
      const auto mle = oracle::estimate_theta(model, paths, config.n_list[i], config.route);
      const double root = std::sqrt(mle.fisher);
      for (std::size_t p = 0; p < np; ++p) {
        const auto post = posterior_from_mle(mle, priors[p]);
        for (std::size_t l = 0; l < nl; ++l) {
          const auto cell = (i * np + p) * nl + l;
          const auto bt = bayes_estimator(post, losses[l], true);
          const auto bh = bayes_estimator(post, losses[l], false);
          tilde[cell][r] = root * std::abs(bt.beta - mle.theta_hat);
          hat[cell][r] = root * std::abs(bh.beta - mle.theta_hat);
          if (losses[l].kind() == LossFunction::Kind::ExpPower) {
            const auto diag = scaled_risk_diagnostic(post, bh);
            lhs[cell][r] = diag.lhs;
            diff[cell][r] = std::abs(diag.lhs - diag.rhs);
            if (r == 0) {
              rhs[cell] = diag.rhs;
            }
          } else {
            lhs[cell][r] = kNaN;
            diff[cell][r] = kNaN;
          }
        }
      }
    }
  });

  GapSuiteResult out;
  for (std::size_t i = 0; i < nn; ++i) {
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t l = 0; l < nl; ++l) {
        const auto cell = (i * np + p) * nl + l;
        const bool risk = losses[l].kind() == LossFunction::Kind::ExpPower;
        GapSuiteRow row;
        row.n = config.n_list[i];
        row.prior = config.priors[p];
        row.loss = config.losses[l];
        row.replicates = static_cast<int>(reps);
        row.median_gap_tilde = sample_median(tilde[cell]);
        row.median_gap_hat = sample_median(hat[cell]);
        row.median_lhs = risk ? sample_median(lhs[cell]) : kNaN;
        row.rhs = rhs[cell];
        row.median_abs_diff = risk ? sample_median(diff[cell]) : kNaN;
        out.rows.push_back(row);
      }
    }
  }
  return out;
}

CsvTable RouteGapResult::to_csv() const {
  CsvTable t({"N", "dt", "seeds", "median_gap", "pilot_threshold", "fraction_within_threshold",
              "endpoints_max_rel_error"});
  for (std::size_t i = 0; i < dts.size(); ++i) {
    t.add_row({std::to_string(n), format_double(dts[i]), std::to_string(seeds),
               format_double(median_gap[i]), format_double(pilot_threshold),
               format_double(fraction_within_threshold),
               format_double(endpoints_max_rel_error)});
  }
  return t;
}

RouteGapResult mc_route_gap_suite(const ExperimentConfig &config, int n,
                                  const std::vector<double> &dts, int seeds, int pilot_seeds) {
  config.validate();
  if (dts.empty() || seeds < 1 || pilot_seeds < 1) {
    throw ConfigError("route gap suite: needs at least one dt, seed and pilot seed");
  }
  const auto model = config.model.build();
  const auto u0 = config.initial.materialize(n);

  struct Sample {
    double gap = 0.0;
    double rel = 0.0;
  };
  auto run = [&](double dt, std::uint64_t offset, int count) {
    const auto grid = SimulationGrid::from_dt(dt, config.model.horizon);
    std::vector<Sample> samples(static_cast<std::size_t>(count));
    parallel_for(samples.size(), config.workers, [&](std::size_t r) {
      const auto paths = simulate_modes(model, config.theta_true, u0, grid,
                                        replicate_seed(config.master_seed, offset + r),
                                        StorageMode::StatisticsOnly);
      const double th_or = oracle::mle_oracle(model, paths, n).theta_hat;
      const double th_inc = mle_increments(model, paths, n).theta_hat;
      const double th_end = mle_endpoints(model, paths, n).theta_hat;
      samples[r] = {std::abs(th_inc - th_or), std::abs(th_end - th_or) / std::abs(th_or)};
    });
    return samples;
  };

  RouteGapResult out;
  out.n = n;
  out.seeds = seeds;
  out.dts = dts;
  std::vector<double> pilot;
  for (const auto &s : run(dts.front(), kPilotOffset, pilot_seeds)) {
    pilot.push_back(s.gap);
  }
  out.pilot_threshold = sample_quantile(pilot, 0.99);

  for (std::size_t d = 0; d < dts.size(); ++d) {
    const auto samples = run(dts[d], 0, seeds);
    std::vector<double> gaps;
    for (const auto &s : samples) {
      gaps.push_back(s.gap);
      out.endpoints_max_rel_error = std::max(out.endpoints_max_rel_error, s.rel);
    }
    if (d == 0) {
      const auto within = std::count_if(gaps.begin(), gaps.end(),
                                        [&](double g) { return g <= out.pilot_threshold; });
      out.fraction_within_threshold =
          static_cast<double>(within) / static_cast<double>(gaps.size());
    }
    out.median_gap.push_back(sample_median(gaps));
  }
  for (std::size_t d = 0; d + 1 < out.median_gap.size(); ++d) {
    out.decay_ratios.push_back(out.median_gap[d] / out.median_gap[d + 1]);
  }
  return out;
}

} // namespace spde_bayes
