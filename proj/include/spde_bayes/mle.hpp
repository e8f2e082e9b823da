#pragma once

#include <string_view>

#include "spde_bayes/path_simulator.hpp"
#include "spde_bayes/spectral_model.hpp"

namespace spde_bayes {

enum class MleRoute { Increments, Endpoints, Oracle };

std::string_view to_string(MleRoute route);
/// Parses "increments" | "endpoints" | "oracle"; ConfigError otherwise.
MleRoute parse_mle_route(std::string_view text);

struct MleResult {
  /// Signed estimator θ̂_N; the Bayesian posterior is centred here.
  double theta_hat = 0.0;
  /// θ̂_N when positive, else 0 (with `truncated` set).
  double theta_hat_mle = 0.0;
  MleRoute route = MleRoute::Increments;
  int n_modes = 0;
  /// I_N, or +inf for the noise-free model.
  double fisher = 0.0;
  bool truncated = false;
};

/// θ̂_N from Itô sums of du_k/u_k:
///   −Σ μ_k q_k⁻² ∫du_k/u_k / (T Σ μ_k² q_k⁻²).
MleResult mle_increments(const SpectralModel &model, const ModePathSet &paths, int n);

/// θ̂_N from log-endpoints only:
///   −Σ μ_k (q_k⁻² log(u_k(T)/u_k(0)) + σ²T/2) / (T Σ μ_k² q_k⁻²).
MleResult mle_endpoints(const SpectralModel &model, const ModePathSet &paths, int n);

/// Observable-data dispatcher; the oracle route is not reachable from here.
MleResult estimate_theta(const SpectralModel &model, const ModePathSet &paths, int n,
                         MleRoute route);

namespace oracle {

/// θ₀ − (σ/T) Σ μ_k q_k⁻¹ w_k(T) / Σ μ_k² q_k⁻², built from the stored truth.
/// Throws CapabilityError on an observable-only path set.
MleResult mle_oracle(const SpectralModel &model, const ModePathSet &paths, int n);

/// Any route, including the oracle one.
MleResult estimate_theta(const SpectralModel &model, const ModePathSet &paths, int n,
                         MleRoute route);

} // namespace oracle

/// √I_N (θ̂_N − θ₀). Exactly N(0, 1) for the oracle route.
double pivot(const MleResult &result, double theta0);

/// log dP^θ/dP^{θ_ref} of the first n modes.
double log_likelihood_ratio(const SpectralModel &model, const ModePathSet &paths, int n,
                            double theta, double theta_ref);

} // namespace spde_bayes
