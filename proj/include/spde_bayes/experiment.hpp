#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spde_bayes/config.hpp"
#include "spde_bayes/csv.hpp"
#include "spde_bayes/path_simulator.hpp"

namespace spde_bayes {

struct ReportRow {
  int n = 0;
  /// "theta_hat", "beta_tilde" or "beta_hat".
  std::string estimator;
  /// "-" for the MLE rows.
  std::string prior;
  std::string loss;
  int replicates = 0;
  double mean = 0.0;
  double sd = 0.0;
  /// KS distance of √I_N(estimate − θ₀) to N(0, 1); NaN below two replicates.
  double ks_pivot = 0.0;
  double abs_err_q50 = 0.0;
  double abs_err_q90 = 0.0;
  double abs_err_q99 = 0.0;
  /// Quantiles of √I_N|β − θ̂_N|; NaN for the MLE rows.
  double gap_q50 = 0.0;
  double gap_q90 = 0.0;
};

struct MonteCarloReport {
  std::string name;
  std::vector<ReportRow> rows;

  const ReportRow &find(int n, std::string_view estimator, std::string_view prior = "-",
                        std::string_view loss = "-") const;
  CsvTable to_csv() const;
};

/// Estimates of one replicate. Bayes arrays are indexed [prior][loss][n_list index].
struct ReplicateOutcome {
  std::vector<double> theta_hat;
  std::vector<double> fisher;
  std::vector<std::vector<std::vector<double>>> beta_tilde;
  std::vector<std::vector<std::vector<double>>> beta_hat;
};

struct ExperimentResult {
  ExperimentConfig config;
  MonteCarloReport report;
  std::vector<ReplicateOutcome> outcomes;
  /// Observable statistics of replicate 0, from which the figure tables are built.
  std::vector<double> archived_u0;
  std::vector<ModeStatistics> archived_statistics;
  /// θ̂_N of replicate 0 for every N in posterior_n.
  std::map<int, double> posterior_theta_hat;
};

ExperimentResult run_experiment(const ExperimentConfig &config);
ExperimentResult run_parameter_set(ParameterSet which);

enum class PlotKind { Posterior, Estimators, Gap, Report, Statistics, Config, All };

/// File name → table for the requested kind, deterministic in content and order.
///   posterior_N{n}.csv        theta,density_<prior>...
///   estimators_<prior>[_<loss>].csv  N,theta_hat,beta_tilde,beta_hat,fisher
///   gap_<prior>[_<loss>].csv  N,sqrtI_gap_tilde,sqrtI_gap_hat
///   report.csv, statistics.csv (k,u0,ito_sum,log_endpoint)
std::map<std::string, CsvTable> plot_tables(const ExperimentResult &result, PlotKind kind);

/// Writes plot_tables(result, kind) (plus the effective config for All/Config)
/// under `dir`. Throws IoError when the directory is not writable.
std::vector<std::filesystem::path> emit_plot_data(const ExperimentResult &result, PlotKind kind,
                                                  const std::filesystem::path &dir);

/// Sample quantile with linear interpolation (type 7).
double sample_quantile(std::vector<double> values, double p);
double sample_median(std::vector<double> values);

/// File-name friendly form of a prior/loss spec ("exp-power:1.5" → "exp-power-1.5").
std::string spec_label(std::string_view spec);

} // namespace spde_bayes
