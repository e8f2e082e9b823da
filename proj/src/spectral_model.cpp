#include "spde_bayes/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spde_bayes/errors.hpp"
#include "spde_bayes/summation.hpp"

namespace spde_bayes {

namespace {

void require_scalars(double sigma, double horizon) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("spectral model: sigma must be a finite non-negative number");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("spectral model: horizon T must be positive");
  }
}

// σ² q_k² / μ_k for a (possibly un-materialized) power-law index.
double power_law_ratio(const PowerLawFamily &fam, double sigma, double k) {
  return sigma * sigma * std::pow(k, 2.0 * fam.alpha - fam.p);
}

} // namespace

SpectralModel::SpectralModel(std::vector<double> mu, std::vector<double> q, double sigma,
                             double horizon, std::optional<PowerLawFamily> family)
    : mu_(std::move(mu)), q_(std::move(q)), sigma_(sigma), horizon_(horizon),
      family_(family) {}

SpectralModel SpectralModel::power_law(double p, double alpha, int k_max, double sigma,
                                       double horizon) {
  if (k_max < 1) {
    throw ConfigError("spectral model: k_max must be at least 1");
  }
  if (!(p > 0.0)) {
    throw ConfigError("spectral model: power-law exponent p must be positive (mu_k -> inf)");
  }
  if (!std::isfinite(alpha)) {
    throw ConfigError("spectral model: alpha must be finite");
  }
  require_scalars(sigma, horizon);
  std::vector<double> mu(static_cast<std::size_t>(k_max));
  std::vector<double> q(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    mu[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), p);
    q[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), alpha);
  }
  return SpectralModel(std::move(mu), std::move(q), sigma, horizon, PowerLawFamily{p, alpha});
}

SpectralModel SpectralModel::from_arrays(std::vector<double> mu, std::vector<double> q,
                                         double sigma, double horizon) {
  if (mu.empty() || mu.size() != q.size()) {
    throw ConfigError("spectral model: mu and q must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) {
      throw ConfigError("spectral model: mu_" + std::to_string(i + 1) + " must be positive");
    }
    if (!(q[i] > 0.0) || !std::isfinite(q[i])) {
      throw ConfigError("spectral model: q_" + std::to_string(i + 1) + " must be positive");
    }
  }
  require_scalars(sigma, horizon);
  return SpectralModel(std::move(mu), std::move(q), sigma, horizon, std::nullopt);
}

double fisher_info(const SpectralModel &model, int n) {
  if (n < 1 || n > model.k_max()) {
    throw std::out_of_range("fisher_info: mode count " + std::to_string(n) + " outside [1, " +
                            std::to_string(model.k_max()) + "]");
  }
  if (model.sigma() == 0.0) {
    throw std::domain_error("fisher_info: undefined for sigma = 0");
  }
  CompensatedSum acc;
  for (int k = 1; k <= n; ++k) {
    const double ratio = model.mu(k) / model.q(k);
    acc += ratio * ratio;
  }
  return model.horizon() / (model.sigma() * model.sigma()) * acc.value();
}

SpectralModel heat_model_1d(double alpha, int k_max, double sigma, double horizon) {
  return SpectralModel::power_law(2.0, alpha, k_max, sigma, horizon);
}

std::string_view to_string(WellPosednessRoute route) {
  switch (route) {
  case WellPosednessRoute::E1PowerLaw:
    return "E1_power_law";
  case WellPosednessRoute::E2BoundedRatio:
    return "E2_bounded_ratio";
  case WellPosednessRoute::NumericScan:
    return "numeric_scan";
  }
  return "unknown";
}

namespace {

std::vector<double> scan_margins(const SpectralModel &model, double theta, std::int64_t k_last) {
  std::vector<double> margins(static_cast<std::size_t>(k_last));
  const double s2 = model.sigma() * model.sigma();
  for (std::int64_t k = 1; k <= k_last; ++k) {
    double ratio;
    if (model.family()) {
      ratio = power_law_ratio(*model.family(), model.sigma(), static_cast<double>(k));
    } else {
      const double qk = model.q(static_cast<int>(k));
      ratio = s2 * qk * qk / model.mu(static_cast<int>(k));
    }
    margins[static_cast<std::size_t>(k - 1)] = 2.0 * theta - ratio;
  }
  return margins;
}

std::int64_t scan_bound(const SpectralModel &model, std::optional<std::int64_t> k_scan) {
  if (!k_scan || *k_scan < 1) {
    throw ConfigError("check_wellposed: a positive scan bound is required for this spectrum");
  }
  // Explicit spectra are only known up to k_max.
  return model.family() ? *k_scan : std::min<std::int64_t>(*k_scan, model.k_max());
}

bool analytic(const SpectralModel &model) {
  return model.family() && 2.0 * model.family()->alpha <= model.family()->p;
}

} // namespace

WellPosednessReport check_wellposed(const SpectralModel &model, double theta,
                                    std::optional<std::int64_t> k_scan) {
  if (!(theta > 0.0)) {
    throw std::domain_error("check_wellposed: theta must be positive");
  }
  WellPosednessReport report;
  const double s2 = model.sigma() * model.sigma();

  if (analytic(model)) {
    const auto &fam = *model.family();
    const double exponent = 2.0 * fam.alpha - fam.p;
    if (exponent == 0.0) {
      report.route = WellPosednessRoute::E2BoundedRatio;
      report.margin = 2.0 * theta - s2;
      report.n0 = 1;
      report.holds = report.margin > 0.0;
      return report;
    }
    // E1: σ² k^{exponent} decreases to 0, so the smallest admissible k
    // attains the infimum of the margin over the tail.
    report.route = WellPosednessRoute::E1PowerLaw;
    auto margin_at = [&](std::int64_t k) {
      return 2.0 * theta - power_law_ratio(fam, model.sigma(), static_cast<double>(k));
    };
    std::int64_t n0 = 1;
    if (s2 > 0.0 && !(margin_at(1) > 0.0)) {
      const double kstar = std::pow(s2 / (2.0 * theta), 1.0 / -exponent);
      if (!(kstar < 9.0e15)) {
        throw std::overflow_error("check_wellposed: N0 exceeds the representable index range");
      }
      n0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(kstar)));
      while (n0 > 1 && margin_at(n0 - 1) > 0.0) {
        --n0;
      }
      while (!(margin_at(n0) > 0.0)) {
        ++n0;
      }
    }
    report.n0 = n0;
    report.margin = margin_at(n0);
    report.holds = true;
    return report;
  }

  report.route = WellPosednessRoute::NumericScan;
  report.finite_scan_caveat = true;
  const std::int64_t k_last = scan_bound(model, k_scan);
  const auto margins = scan_margins(model, theta, k_last);
  // suffix minima: inf_{j ≥ k} margin_j within the scanned window
  std::vector<double> suffix(margins.size());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = margins.size(); i-- > 0;) {
    running = std::min(running, margins[i]);
    suffix[i] = running;
  }
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    if (suffix[i] > 0.0) {
      report.holds = true;
      report.n0 = static_cast<std::int64_t>(i + 1);
      report.margin = suffix[i];
      return report;
    }
  }
  report.holds = false;
  report.n0 = k_last;
  report.margin = margins.back();
  return report;
}

double wellposed_margin_from(const SpectralModel &model, double theta, std::int64_t n0,
                             std::optional<std::int64_t> k_scan) {
  if (n0 < 1) {
    throw std::out_of_range("wellposed_margin_from: n0 must be at least 1");
  }
  if (analytic(model)) {
    // Ratio is non-increasing in k, so the infimum sits at n0.
    return 2.0 * theta -
           power_law_ratio(*model.family(), model.sigma(), static_cast<double>(n0));
  }
  const std::int64_t k_last = scan_bound(model, k_scan);
  if (n0 > k_last) {
    throw std::out_of_range("wellposed_margin_from: n0 beyond the scan window");
  }
  const auto margins = scan_margins(model, theta, k_last);
  return *std::min_element(margins.begin() + (n0 - 1), margins.end());
}

} // namespace spde_bayes
