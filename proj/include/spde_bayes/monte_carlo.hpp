#pragma once

#include <string>
#include <vector>

#include "spde_bayes/config.hpp"
#include "spde_bayes/csv.hpp"
#include "spde_bayes/mle.hpp"

namespace spde_bayes {

struct PivotSuiteRow {
  int n = 0;
  MleRoute route = MleRoute::Oracle;
  int replicates = 0;
  double fisher = 0.0;
  double ks = 0.0;
  /// 1.63/√M.
  double critical = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  /// Only the oracle route is held to the exact-law level; other routes are diagnostic.
  bool exact_level = false;
  bool pass = false;
};

struct PivotSuiteResult {
  std::vector<PivotSuiteRow> rows;
  CsvTable to_csv() const;
};

/// KS test of √I_N(θ̂_N − θ₀) against N(0, 1) for every N in config.n_list,
/// over config.replicates seeded replicates. Routes other than increments are
/// exact in law, so they are simulated on a single-step grid.
/// Throws ConfigError for σ = 0 or fewer than `min_replicates` replicates.
PivotSuiteResult mc_pivot_suite(const ExperimentConfig &config, MleRoute route,
                                int min_replicates = 500);

struct ConsistencyRow {
  int n = 0;
  int replicates = 0;
  double fisher = 0.0;
  /// multiple / √I_N.
  double bound = 0.0;
  double fraction_within = 0.0;
  double max_abs_error = 0.0;
  double q99_abs_error = 0.0;
};

struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;
  CsvTable to_csv() const;
};

/// Fraction of replicates with |θ̂_N − θ₀| < multiple·I_N^{-1/2}, per N.
ConsistencyResult mc_consistency_suite(const ExperimentConfig &config,
                                       MleRoute route = MleRoute::Oracle, double multiple = 5.0);

struct GapSuiteRow {
  int n = 0;
  std::string prior;
  std::string loss;
  int replicates = 0;
  double median_gap_tilde = 0.0;
  double median_gap_hat = 0.0;
  /// Risk-limit check for ExpPower losses, NaN otherwise.
  double median_lhs = 0.0;
  double rhs = 0.0;
  double median_abs_diff = 0.0;
};

struct GapSuiteResult {
  std::vector<GapSuiteRow> rows;
  const GapSuiteRow &find(int n, std::string_view prior, std::string_view loss) const;
  CsvTable to_csv() const;
};

/// Medians over replicates of √I_N|β̃_N − θ̂_N|, √I_N|β̂_N − θ̂_N| and, for
/// ExpPower(r), of |I_N^{r/2} R(β̂_N) − E|Z|^r|.
GapSuiteResult mc_gap_suite(const ExperimentConfig &config);

struct RouteGapResult {
  int n = 0;
  int seeds = 0;
  /// max over seeds of |θ̂_endpoints − θ̂_oracle| / |θ̂_oracle|.
  double endpoints_max_rel_error = 0.0;
  /// 99th percentile of |θ̂_increments − θ̂_oracle| over the pilot block at dts[0].
  double pilot_threshold = 0.0;
  /// Share of the seeds whose gap at dts[0] is within the pilot threshold.
  double fraction_within_threshold = 0.0;
  std::vector<double> dts;
  std::vector<double> median_gap;
  /// median_gap[i] / median_gap[i + 1].
  std::vector<double> decay_ratios;
  CsvTable to_csv() const;
};

/// Compares the observable routes with the oracle on `seeds` replicates (and
/// a disjoint pilot block of `pilot_seeds`) at each dt in `dts`.
RouteGapResult mc_route_gap_suite(const ExperimentConfig &config, int n,
                                  const std::vector<double> &dts, int seeds, int pilot_seeds);

} // namespace spde_bayes
