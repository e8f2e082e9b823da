#include "spde_bayes/posterior.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spde_bayes/errors.hpp"
#include "spde_bayes/quadrature.hpp"
#include "spde_bayes/special_functions.hpp"

namespace spde_bayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinHalfWidth = 12.0;
constexpr double kTailLog = -40.0;

} // namespace

double TruncatedNormalLaw::truncated_mean() const {
  const double s = std::sqrt(scale2);
  return location + s * normal_hazard(location / s);
}

double TruncatedNormalLaw::truncated_variance() const {
  const double s = std::sqrt(scale2);
  const double z = location / s;
  const double h = normal_hazard(z);
  return scale2 * (1.0 - z * h - h * h);
}

double TruncatedNormalLaw::log_kernel_mass() const {
  return 0.5 * std::log(2.0 * std::numbers::pi * scale2) +
         log_normal_cdf(location / std::sqrt(scale2));
}

Posterior::Posterior(double theta_hat, double fisher, Prior prior)
    : theta_hat_(theta_hat), fisher_(fisher), sqrt_fisher_(std::sqrt(fisher)),
      prior_(std::move(prior)) {
  if (!(fisher > 0.0) || !std::isfinite(fisher)) {
    throw std::domain_error("posterior: Fisher information must be finite and positive");
  }
  if (!std::isfinite(theta_hat)) {
    throw std::domain_error("posterior: centre must be finite");
  }
  switch (prior_.kind()) {
  case Prior::Kind::UniformPositive:
    log_normalizer_ = conjugate_law()->log_kernel_mass();
    break;
  case Prior::Kind::TruncatedNormal: {
    // exp(−I(η−θ̂)²/2)·exp(−(η−μ0)²/(2v0)) = exp(−(η−m)²/(2v))·exp(−(θ̂−μ0)²/(2(v0+1/I)))
    const double v0 = prior_.var0();
    const double d = theta_hat_ - prior_.mu0();
    log_normalizer_ = prior_.log_normalization() - 0.5 * d * d / (v0 + 1.0 / fisher_) +
                      conjugate_law()->log_kernel_mass();
    break;
  }
  case Prior::Kind::Custom: {
    const auto grid = breaks();
    // Scale out the peak so the linear-space adaptive rule sees O(1) values.
    double peak = kNegInf;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      for (double x : {grid[i], 0.5 * (grid[i] + grid[i + 1]), grid[i + 1]}) {
        peak = std::max(peak, log_kernel(x));
      }
    }
    if (!std::isfinite(peak)) {
      throw NumericError("posterior: kernel vanishes on the integration window");
    }
    const double mass =
        integrate_adaptive([&](double x) { return std::exp(log_kernel(x) - peak); }, grid);
    if (!(mass > 0.0)) {
      throw NumericError("posterior: non-positive normalizer from quadrature");
    }
    log_normalizer_ = peak + std::log(mass);
    break;
  }
  }
}

double Posterior::window_centre() const {
  const auto law = conjugate_law();
  return law ? law->location : theta_hat_;
}

double Posterior::window_scale() const {
  const auto law = conjugate_law();
  return law ? std::sqrt(law->scale2) : 1.0 / sqrt_fisher_;
}

double Posterior::normalizer() const { return std::exp(log_normalizer_); }

double Posterior::log_lambda_normalizer() const {
  return 0.5 * std::log(fisher_) + log_normalizer_;
}

double Posterior::log_kernel(double theta) const {
  const double lp = prior_.log_density(theta);
  if (lp == kNegInf) {
    return kNegInf;
  }
  const double d = theta - theta_hat_;
  return -0.5 * fisher_ * d * d + lp;
}

double Posterior::log_density(double theta) const { return log_kernel(theta) - log_normalizer_; }

double Posterior::density(double theta) const {
  const double lv = log_density(theta);
  return lv == kNegInf ? 0.0 : std::exp(lv);
}

std::optional<TruncatedNormalLaw> Posterior::conjugate_law() const {
  const double inv_i = 1.0 / fisher_;
  switch (prior_.kind()) {
  case Prior::Kind::UniformPositive:
    return TruncatedNormalLaw{theta_hat_, inv_i};
  case Prior::Kind::TruncatedNormal: {
    const double v0 = prior_.var0();
    return TruncatedNormalLaw{(v0 * theta_hat_ + inv_i * prior_.mu0()) / (v0 + inv_i),
                              v0 * inv_i / (v0 + inv_i)};
  }
  case Prior::Kind::Custom:
    break;
  }
  return std::nullopt;
}

std::vector<double> Posterior::breaks(const std::function<double(double)> &extra_log_growth,
                                      std::span<const double> splits) const {
  const double centre = window_centre();
  const double scale = window_scale();
  const auto &g = prior_.growth();
  double w = kMinHalfWidth;
  for (;; w += 0.5) {
    double log_growth = g.c2 > 0.0 ? g.c2 * std::pow(std::abs(centre) + w * scale, g.r) : 0.0;
    if (extra_log_growth) {
      log_growth += extra_log_growth(w * scale);
    }
    if (log_growth - 0.5 * w * w < kTailLog) {
      break;
    }
    if (w > 1e4) {
      throw NumericError("posterior: integrand tail does not decay (growth exponent too large)");
    }
  }
  double lo = centre - w * scale;
  double hi = centre + w * scale;
  if (lo <= 0.0) {
    lo = 0.0;
    if (centre < 0.0) {
      // Mass piles up at the boundary; the kernel drops by e^{−w²/2} once
      // (η − c)² = c² + w² s².
      hi = centre + std::sqrt(centre * centre + w * w * scale * scale);
    }
  }
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * w));
  return panel_breaks(lo, hi, panels, splits);
}

Posterior posterior_from_mle(const MleResult &result, Prior prior) {
  return Posterior(result.theta_hat, result.fisher, std::move(prior));
}

double lambda_density(const Posterior &post, double lambda) {
  const double theta = lambda / post.sqrt_fisher() + post.theta_hat();
  if (!(theta > 0.0)) {
    return 0.0;
  }
  const double lp = post.prior().log_density(theta);
  return std::exp(lp - 0.5 * lambda * lambda - post.log_lambda_normalizer());
}

PosteriorMoments quadrature_moments(const Posterior &post) {
  const auto grid = post.breaks();
  // Integrate against the density shifted by the closed or current log
  // normalizer so that everything is O(1).
  const double shift = post.log_normalizer();
  auto weight = [&](double x) { return std::exp(post.log_kernel(x) - shift); };
  const double m0 = integrate_adaptive(weight, grid);
  const double m1 = integrate_adaptive([&](double x) { return x * weight(x); }, grid) / m0;
  const double m2c =
      integrate_adaptive([&](double x) { return (x - m1) * (x - m1) * weight(x); }, grid) / m0;
  return PosteriorMoments{shift + std::log(m0), m1, m2c};
}

} // namespace spde_bayes
