#include "spde_bayes/mle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spde_bayes/errors.hpp"
#include "spde_bayes/summation.hpp"

namespace spde_bayes {

std::string_view to_string(MleRoute route) {
  switch (route) {
  case MleRoute::Increments:
    return "increments";
  case MleRoute::Endpoints:
    return "endpoints";
  case MleRoute::Oracle:
    return "oracle";
  }
  return "unknown";
}

MleRoute parse_mle_route(std::string_view text) {
  if (text == "increments") {
    return MleRoute::Increments;
  }
  if (text == "endpoints") {
    return MleRoute::Endpoints;
  }
  if (text == "oracle") {
    return MleRoute::Oracle;
  }
  throw ConfigError("unknown estimator route '" + std::string(text) + "'");
}

namespace {

void check_modes(const SpectralModel &model, const ModePathSet &paths, int n) {
  if (n < 1 || n > paths.n_modes() || n > model.k_max()) {
    throw std::out_of_range("MLE: mode count " + std::to_string(n) + " exceeds available modes");
  }
}

// Σ_{k≤n} μ_k² q_k⁻²
double information_sum(const SpectralModel &model, int n) {
  CompensatedSum acc;
  for (int k = 1; k <= n; ++k) {
    const double r = model.mu(k) / model.q(k);
    acc += r * r;
  }
  return acc.value();
}

MleResult finish(const SpectralModel &model, int n, MleRoute route, double theta_hat) {
  MleResult r;
  r.theta_hat = theta_hat;
  r.truncated = !(theta_hat > 0.0);
  r.theta_hat_mle = r.truncated ? 0.0 : theta_hat;
  r.route = route;
  r.n_modes = n;
  r.fisher = model.sigma() > 0.0 ? fisher_info(model, n)
                                 : std::numeric_limits<double>::infinity();
  return r;
}

} // namespace

MleResult mle_increments(const SpectralModel &model, const ModePathSet &paths, int n) {
  check_modes(model, paths, n);
  CompensatedSum num;
  for (int k = 1; k <= n; ++k) {
    const double q = model.q(k);
    num += model.mu(k) / (q * q) * ito_log_integral(paths, k);
  }
  const double theta_hat = -num.value() / (model.horizon() * information_sum(model, n));
  return finish(model, n, MleRoute::Increments, theta_hat);
}

MleResult mle_endpoints(const SpectralModel &model, const ModePathSet &paths, int n) {
  check_modes(model, paths, n);
  const double half_s2t = 0.5 * model.sigma() * model.sigma() * model.horizon();
  CompensatedSum num;
  for (int k = 1; k <= n; ++k) {
    const double q = model.q(k);
    num += model.mu(k) * (log_endpoint_statistic(paths, k) / (q * q) + half_s2t);
  }
  const double theta_hat = -num.value() / (model.horizon() * information_sum(model, n));
  return finish(model, n, MleRoute::Endpoints, theta_hat);
}

MleResult estimate_theta(const SpectralModel &model, const ModePathSet &paths, int n,
                         MleRoute route) {
  switch (route) {
  case MleRoute::Increments:
    return mle_increments(model, paths, n);
  case MleRoute::Endpoints:
    return mle_endpoints(model, paths, n);
  case MleRoute::Oracle:
    break;
  }
  throw CapabilityError("the oracle route is not part of the observable estimator API");
}

namespace oracle {

MleResult mle_oracle(const SpectralModel &model, const ModePathSet &paths, int n) {
  check_modes(model, paths, n);
  const auto &truth = paths.oracle();
  CompensatedSum num;
  for (int k = 1; k <= n; ++k) {
    num += model.mu(k) / model.q(k) * truth.w_terminal[static_cast<std::size_t>(k - 1)];
  }
  const double theta_hat = truth.theta_true - model.sigma() / model.horizon() * num.value() /
                                                  information_sum(model, n);
  return finish(model, n, MleRoute::Oracle, theta_hat);
}

MleResult estimate_theta(const SpectralModel &model, const ModePathSet &paths, int n,
                         MleRoute route) {
  if (route == MleRoute::Oracle) {
    return mle_oracle(model, paths, n);
  }
  return spde_bayes::estimate_theta(model, paths, n, route);
}

} // namespace oracle

double pivot(const MleResult &result, double theta0) {
  if (!std::isfinite(result.fisher) || !(result.fisher > 0.0)) {
    throw std::domain_error("pivot: Fisher information must be finite and positive");
  }
  return std::sqrt(result.fisher) * (result.theta_hat - theta0);
}

double log_likelihood_ratio(const SpectralModel &model, const ModePathSet &paths, int n,
                            double theta, double theta_ref) {
  if (!(theta > 0.0) || !(theta_ref > 0.0)) {
    throw std::domain_error("log_likelihood_ratio: parameters must be positive");
  }
  if (model.sigma() == 0.0) {
    throw std::domain_error("log_likelihood_ratio: undefined for sigma = 0");
  }
  check_modes(model, paths, n);
  CompensatedSum score;
  for (int k = 1; k <= n; ++k) {
    const double q = model.q(k);
    score += model.mu(k) / (q * q) * ito_log_integral(paths, k);
  }
  const double s2 = model.sigma() * model.sigma();
  return (theta_ref - theta) / s2 * score.value() +
         (theta_ref * theta_ref - theta * theta) * model.horizon() / (2.0 * s2) *
             information_sum(model, n);
}

} // namespace spde_bayes
