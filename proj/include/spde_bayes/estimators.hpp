#pragma once

#include "spde_bayes/posterior.hpp"
#include "spde_bayes/prior_loss.hpp"

namespace spde_bayes {

struct OptimizerOptions {
  /// Golden-section stopping width, in posterior standard deviations 1/√I_N.
  double relative_tolerance = 1e-6;
  /// Smallest admissible β; the parameter space (0, ∞) is open.
  double beta_floor = 1e-12;
  /// Initial bracket θ̂ ± bracket_halfwidth/√I_N.
  double bracket_halfwidth = 8.0;
  /// Risk samples used to verify unimodality across the bracket.
  int scan_points = 33;
  int max_expansions = 40;
};

struct BayesEstimate {
  double beta = 0.0;
  /// β̃_N (loss ℓ(√I_N x)) when true, β̂_N (loss ℓ(x)) otherwise.
  bool scaled = false;
  LossFunction loss = LossFunction::quadratic();
  double risk_at_min = 0.0;
  int optimizer_iterations = 0;
  /// Absolute golden-section tolerance actually used.
  double bracket_tolerance = 0.0;
  /// Minimum sits at beta_floor: the infimum over (0, ∞) is not attained.
  bool boundary = false;
  /// R(β ± δ) ≥ R(β) for δ ∈ {1, 2, 4}·bracket_tolerance.
  bool locally_optimal = false;
};

/// R(β) = ∫ ℓ(s (η − β)) p(η | U_N) dη with s = √I_N when scaled, else 1.
/// ExpPower losses are accumulated in log space so that scaled arguments far
/// beyond exp-overflow are fine.
double posterior_expected_loss(const Posterior &post, const LossFunction &loss, double beta,
                               bool scaled);

/// argmin over β > 0 of posterior_expected_loss. The risk is sampled across
/// the bracket first; a non-unimodal profile throws OptimizationError.
BayesEstimate bayes_estimator(const Posterior &post, const LossFunction &loss, bool scaled,
                              const OptimizerOptions &options = {});

} // namespace spde_bayes
