#include "spde_bayes/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "spde_bayes/errors.hpp"
#include "spde_bayes/estimators.hpp"
#include "spde_bayes/ks.hpp"
#include "spde_bayes/mle.hpp"
#include "spde_bayes/parallel.hpp"
#include "spde_bayes/posterior.hpp"
#include "spde_bayes/prior_loss.hpp"
#include "spde_bayes/summation.hpp"

namespace spde_bayes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Setup {
  SpectralModel model;
  std::vector<Prior> priors;
  std::vector<LossFunction> losses;
  std::vector<double> u0;
  SimulationGrid grid;
};

Setup make_setup(const ExperimentConfig &c) {
  c.validate();
  Setup s{c.model.build(), {}, {}, {}, SimulationGrid::from_dt(c.dt, c.model.horizon)};
  for (const auto &p : c.priors) {
    s.priors.push_back(parse_prior(p));
  }
  for (const auto &l : c.losses) {
    s.losses.push_back(parse_loss(l));
  }
  s.u0 = c.initial.materialize(c.max_modes());
  return s;
}

ModePathSet simulate_replicate(const ExperimentConfig &c, const Setup &s, int r) {
  return simulate_modes(s.model, c.theta_true, s.u0, s.grid,
                        replicate_seed(c.master_seed, static_cast<std::uint64_t>(r)),
                        StorageMode::StatisticsOnly);
}

MleResult observable_estimate(const ExperimentConfig &c, const Setup &s, const ModePathSet &paths,
                              int n) {
  if (c.route == MleRoute::Oracle) {
    return oracle::estimate_theta(s.model, paths, n, c.route);
  }
  return estimate_theta(s.model, paths.observable_only(), n, c.route);
}

ReplicateOutcome run_replicate(const ExperimentConfig &c, const Setup &s, const ModePathSet &paths) {
  const auto nn = c.n_list.size();
  ReplicateOutcome out;
  out.theta_hat.resize(nn);
  out.fisher.resize(nn);
  out.beta_tilde.assign(s.priors.size(),
                        std::vector<std::vector<double>>(s.losses.size(), std::vector<double>(nn)));
  out.beta_hat = out.beta_tilde;
  for (std::size_t i = 0; i < nn; ++i) {
    const auto mle = observable_estimate(c, s, paths, c.n_list[i]);
    out.theta_hat[i] = mle.theta_hat;
    out.fisher[i] = mle.fisher;
    for (std::size_t p = 0; p < s.priors.size(); ++p) {
      const auto post = posterior_from_mle(mle, s.priors[p]);
      for (std::size_t l = 0; l < s.losses.size(); ++l) {
        out.beta_tilde[p][l][i] = bayes_estimator(post, s.losses[l], true).beta;
        out.beta_hat[p][l][i] = bayes_estimator(post, s.losses[l], false).beta;
      }
    }
  }
  return out;
}

ReportRow summarize(int n, std::string estimator, std::string prior, std::string loss,
                    const std::vector<double> &estimates, const std::vector<double> &theta_hat,
                    double fisher, double theta0, bool gaps) {
  ReportRow row;
  row.n = n;
  row.estimator = std::move(estimator);
  row.prior = std::move(prior);
  row.loss = std::move(loss);
  row.replicates = static_cast<int>(estimates.size());
  const double m = static_cast<double>(estimates.size());
  row.mean = compensated_sum(estimates) / m;
  CompensatedSum ss;
  for (double x : estimates) {
    ss += (x - row.mean) * (x - row.mean);
  }
  row.sd = estimates.size() > 1 ? std::sqrt(ss.value() / (m - 1.0)) : kNaN;
  const double root = std::sqrt(fisher);
  std::vector<double> pivots, errors, gap;
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    pivots.push_back(root * (estimates[j] - theta0));
    errors.push_back(std::abs(estimates[j] - theta0));
    gap.push_back(root * std::abs(estimates[j] - theta_hat[j]));
  }
  row.ks_pivot = pivots.size() >= 2 ? ks_statistic(pivots) : kNaN;
  row.abs_err_q50 = sample_quantile(errors, 0.5);
  row.abs_err_q90 = sample_quantile(errors, 0.9);
  row.abs_err_q99 = sample_quantile(errors, 0.99);
  row.gap_q50 = gaps ? sample_quantile(gap, 0.5) : kNaN;
  row.gap_q90 = gaps ? sample_quantile(gap, 0.9) : kNaN;
  return row;
}

std::string file_suffix(const Setup &s, std::size_t p, std::size_t l,
                        const ExperimentConfig &c) {
  auto out = s.priors[p].label();
  if (s.losses.size() > 1) {
    out += "_" + spec_label(c.losses[l]);
  }
  return out;
}

} // namespace

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) {
    return kNaN;
  }
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double sample_median(std::vector<double> values) { return sample_quantile(std::move(values), 0.5); }

std::string spec_label(std::string_view spec) {
  std::string out(spec);
  for (char &ch : out) {
    if (ch == ':' || ch == ',' || ch == ' ' || ch == '/') {
      ch = '-';
    }
  }
  return out;
}

const ReportRow &MonteCarloReport::find(int n, std::string_view estimator, std::string_view prior,
                                        std::string_view loss) const {
  for (const auto &row : rows) {
    if (row.n == n && row.estimator == estimator && row.prior == prior && row.loss == loss) {
      return row;
    }
  }
  throw std::out_of_range("report has no row for the requested key");
}

CsvTable MonteCarloReport::to_csv() const {
  CsvTable t({"N", "estimator", "prior", "loss", "replicates", "mean", "sd", "ks_pivot",
              "abs_err_q50", "abs_err_q90", "abs_err_q99", "gap_q50", "gap_q90"});
  for (const auto &r : rows) {
    t.add_row({std::to_string(r.n), r.estimator, r.prior, r.loss, std::to_string(r.replicates),
               format_double(r.mean), format_double(r.sd), format_double(r.ks_pivot),
               format_double(r.abs_err_q50), format_double(r.abs_err_q90),
               format_double(r.abs_err_q99), format_double(r.gap_q50),
               format_double(r.gap_q90)});
  }
  return t;
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
  const auto setup = make_setup(config);
  ExperimentResult result;
  result.config = config;
  const auto reps = static_cast<std::size_t>(config.replicates);
  result.outcomes.resize(reps);

  parallel_for(reps, config.workers, [&](std::size_t r) {
    const auto paths = simulate_replicate(config, setup, static_cast<int>(r));
    result.outcomes[r] = run_replicate(config, setup, paths);
    if (r == 0) {
      for (int k = 1; k <= paths.n_modes(); ++k) {
        result.archived_statistics.push_back(paths.statistics(k));
      }
      result.archived_u0.assign(paths.u0().begin(), paths.u0().end());
      for (int n : config.posterior_n) {
        result.posterior_theta_hat[n] = observable_estimate(config, setup, paths, n).theta_hat;
      }
    }
  });

  auto &rows = result.report.rows;
  result.report.name = config.name;
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    const int n = config.n_list[i];
    const double fisher = result.outcomes[0].fisher[i];
    std::vector<double> theta_hat(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      theta_hat[r] = result.outcomes[r].theta_hat[i];
    }
    rows.push_back(summarize(n, "theta_hat", "-", "-", theta_hat, theta_hat, fisher,
                             config.theta_true, false));
    for (std::size_t p = 0; p < setup.priors.size(); ++p) {
      for (std::size_t l = 0; l < setup.losses.size(); ++l) {
        std::vector<double> tilde(reps), hat(reps);
        for (std::size_t r = 0; r < reps; ++r) {
          tilde[r] = result.outcomes[r].beta_tilde[p][l][i];
          hat[r] = result.outcomes[r].beta_hat[p][l][i];
        }
        rows.push_back(summarize(n, "beta_tilde", config.priors[p], config.losses[l], tilde,
                                 theta_hat, fisher, config.theta_true, true));
        rows.push_back(summarize(n, "beta_hat", config.priors[p], config.losses[l], hat,
                                 theta_hat, fisher, config.theta_true, true));
      }
    }
  }
  return result;
}

ExperimentResult run_parameter_set(ParameterSet which) {
  return run_experiment(builtin_config(which));
}

std::map<std::string, CsvTable> plot_tables(const ExperimentResult &result, PlotKind kind) {
  const auto &c = result.config;
  const auto setup = make_setup(c);
  const auto want = [kind](PlotKind k) { return kind == PlotKind::All || kind == k; };
  std::map<std::string, CsvTable> tables;

  if (want(PlotKind::Posterior)) {
    std::vector<std::string> header{"theta"};
    for (const auto &p : setup.priors) {
      header.push_back("density_" + p.label());
    }
    for (int n : c.posterior_n) {
      const double fisher = fisher_info(setup.model, n);
      std::vector<Posterior> posts;
      for (const auto &p : setup.priors) {
        posts.emplace_back(result.posterior_theta_hat.at(n), fisher, p);
      }
      CsvTable t(header);
      const double step =
          (c.posterior_theta_max - c.posterior_theta_min) / (c.posterior_points - 1);
      for (int j = 0; j < c.posterior_points; ++j) {
        const double theta = c.posterior_theta_min + step * j;
        std::vector<std::string> row{format_double(theta)};
        for (const auto &post : posts) {
          row.push_back(format_double(post.density(theta)));
        }
        t.add_row(std::move(row));
      }
      tables.emplace("posterior_N" + std::to_string(n) + ".csv", std::move(t));
    }
  }

  const auto &first = result.outcomes.at(0);
  for (std::size_t p = 0; p < setup.priors.size(); ++p) {
    for (std::size_t l = 0; l < setup.losses.size(); ++l) {
      const auto suffix = file_suffix(setup, p, l, c);
      if (want(PlotKind::Estimators)) {
        CsvTable t({"N", "theta_hat", "beta_tilde", "beta_hat", "fisher"});
        for (std::size_t i = 0; i < c.n_list.size(); ++i) {
          t.add_row({std::to_string(c.n_list[i]), format_double(first.theta_hat[i]),
                     format_double(first.beta_tilde[p][l][i]),
                     format_double(first.beta_hat[p][l][i]), format_double(first.fisher[i])});
        }
        tables.emplace("estimators_" + suffix + ".csv", std::move(t));
      }
      if (want(PlotKind::Gap)) {
        CsvTable t({"N", "sqrtI_gap_tilde", "sqrtI_gap_hat"});
        for (std::size_t i = 0; i < c.n_list.size(); ++i) {
          const double root = std::sqrt(first.fisher[i]);
          t.add_row({std::to_string(c.n_list[i]),
                     format_double(root * std::abs(first.beta_tilde[p][l][i] - first.theta_hat[i])),
                     format_double(root * std::abs(first.beta_hat[p][l][i] - first.theta_hat[i]))});
        }
        tables.emplace("gap_" + suffix + ".csv", std::move(t));
      }
    }
  }

  if (want(PlotKind::Report)) {
    tables.emplace("report.csv", result.report.to_csv());
  }
  if (want(PlotKind::Statistics)) {
    CsvTable t({"k", "u0", "ito_sum", "log_endpoint"});
    for (std::size_t k = 0; k < result.archived_statistics.size(); ++k) {
      t.add_row({std::to_string(k + 1), format_double(result.archived_u0[k]),
                 format_double(result.archived_statistics[k].ito_sum),
                 format_double(result.archived_statistics[k].log_endpoint)});
    }
    tables.emplace("statistics.csv", std::move(t));
  }
  return tables;
}

std::vector<std::filesystem::path> emit_plot_data(const ExperimentResult &result, PlotKind kind,
                                                  const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  std::vector<std::filesystem::path> written;
  for (const auto &[name, table] : plot_tables(result, kind)) {
    table.write(dir / name);
    written.push_back(dir / name);
  }
  if (kind == PlotKind::All || kind == PlotKind::Config) {
    const auto file = dir / "config.cfg";
    std::ofstream out(file, std::ios::binary);
    out << "# Effective configuration of this run.\n" << to_config_text(result.config);
    if (!out) {
      throw IoError("cannot write " + file.string());
    }
    written.push_back(file);
  }
  return written;
}

} // namespace spde_bayes
