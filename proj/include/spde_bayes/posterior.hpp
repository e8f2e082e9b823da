#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spde_bayes/mle.hpp"
#include "spde_bayes/prior_loss.hpp"

namespace spde_bayes {

/// N(mean, var) conditioned on (0, ∞).
struct TruncatedNormalLaw {
  double location = 0.0;
  double scale2 = 1.0;

  double truncated_mean() const;
  double truncated_variance() const;
  /// log ∫_0^∞ exp(−(x − location)²/(2 scale2)) dx
  double log_kernel_mass() const;
};

/// p(θ | U_N) ∝ exp(−I_N (θ − θ̂_N)²/2) ϱ(θ) on (0, ∞).
///
/// The normalizer is closed form for the uniform and truncated-normal priors
/// and adaptive Gauss–Legendre quadrature otherwise.
class Posterior {
public:
  Posterior(double theta_hat, double fisher, Prior prior);

  double theta_hat() const { return theta_hat_; }
  double fisher() const { return fisher_; }
  double sqrt_fisher() const { return sqrt_fisher_; }
  const Prior &prior() const { return prior_; }

  /// ∫_0^∞ exp(−I_N (η − θ̂_N)²/2) ϱ(η) dη and its log.
  double normalizer() const;
  double log_normalizer() const { return log_normalizer_; }
  /// C_N = √I_N · normalizer, the λ-scale normalizer.
  double log_lambda_normalizer() const;

  double log_kernel(double theta) const;
  double density(double theta) const;
  double log_density(double theta) const;

  /// Closed-form posterior law for the conjugate priors; empty for Custom.
  std::optional<TruncatedNormalLaw> conjugate_law() const;

  /// Centre and spread used to place quadrature panels: the conjugate law
  /// when known, the likelihood otherwise.
  double window_centre() const;
  double window_scale() const;

  /// Integration breakpoints covering the posterior mass: window_centre() ±
  /// W·window_scale() clipped to (0, ∞), with W the smallest half-width ≥ 12
  /// such that extra_log_growth(W·scale) + prior growth − W²/2 < −40.
  std::vector<double> breaks(const std::function<double(double)> &extra_log_growth = {},
                             std::span<const double> splits = {}) const;

private:
  double theta_hat_;
  double fisher_;
  double sqrt_fisher_;
  Prior prior_;
  double log_normalizer_ = 0.0;
};

/// Posterior built from an MLE result. Rejects a non-positive or infinite
/// Fisher information.
Posterior posterior_from_mle(const MleResult &result, Prior prior);

/// p̃(λ | U_N) = C_N⁻¹ ϱ(λ/√I_N + θ̂_N) e^{−λ²/2}, zero for λ ≤ −√I_N θ̂_N.
double lambda_density(const Posterior &post, double lambda);

struct PosteriorMoments {
  double log_normalizer = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Normalizer, mean and variance by quadrature, whatever the prior.
PosteriorMoments quadrature_moments(const Posterior &post);

} // namespace spde_bayes
