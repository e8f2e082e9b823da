#include "spde_bayes/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spde_bayes/errors.hpp"
#include "spde_bayes/minimize.hpp"
#include "spde_bayes/quadrature.hpp"

namespace spde_bayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

} // namespace

double posterior_expected_loss(const Posterior &post, const LossFunction &loss, double beta,
                               bool scaled) {
  const double s = scaled ? post.sqrt_fisher() : 1.0;
  const double offset = std::abs(post.window_centre() - beta);
  auto growth = [&](double delta) { return loss.log_value(s * (delta + offset)); };
  const double kink[] = {beta};
  const auto grid = post.breaks(growth, loss.kinked_at_zero() ? std::span<const double>(kink)
                                                              : std::span<const double>());
  const double log_z = post.log_normalizer();

  if (loss.prefers_log_space()) {
    const double log_risk = log_integrate_composite(
        [&](double eta) {
          const double lk = post.log_kernel(eta);
          if (lk == kNegInf) {
            return kNegInf;
          }
          return loss.log_value(s * (eta - beta)) + lk - log_z;
        },
        grid);
    return std::exp(log_risk);
  }
  return integrate_composite(
      [&](double eta) {
        const double lk = post.log_kernel(eta);
        if (lk == kNegInf) {
          return 0.0;
        }
        return loss(s * (eta - beta)) * std::exp(lk - log_z);
      },
      grid);
}

BayesEstimate bayes_estimator(const Posterior &post, const LossFunction &loss, bool scaled,
                              const OptimizerOptions &options) {
  const double sd = 1.0 / post.sqrt_fisher();
  const double tol = options.relative_tolerance * sd;
  const double floor = options.beta_floor;
  auto risk = [&](double b) { return posterior_expected_loss(post, loss, b, scaled); };

  double lo = std::max(floor, post.theta_hat() - options.bracket_halfwidth * sd);
  double hi = post.theta_hat() + options.bracket_halfwidth * sd;
  if (hi <= lo) {
    hi = lo + 2.0 * options.bracket_halfwidth * sd;
  }

  const int m = std::max(options.scan_points, 5);
  std::vector<double> xs(static_cast<std::size_t>(m));
  std::vector<double> fs(static_cast<std::size_t>(m));
  std::size_t best = 0;
  for (int expansion = 0;; ++expansion) {
    for (int i = 0; i < m; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      xs[idx] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
      fs[idx] = risk(xs[idx]);
      if (!std::isfinite(fs[idx])) {
        throw OptimizationError("bayes_estimator: risk is not finite at beta = " +
                                std::to_string(xs[idx]));
      }
    }
    if (!is_unimodal(fs)) {
      throw OptimizationError("bayes_estimator: posterior risk is not unimodal on [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    best = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const bool at_lo = best == 0 && lo > floor;
    const bool at_hi = best + 1 == xs.size();
    if (!at_lo && !at_hi) {
      break;
    }
    if (expansion >= options.max_expansions) {
      throw OptimizationError("bayes_estimator: minimum keeps touching the bracket edge");
    }
    const double width = hi - lo;
    if (at_lo) {
      lo = std::max(floor, lo - width);
    } else {
      hi += width;
    }
  }

  // Three-point bracket around the best sample, then golden section down to
  // tol/4 so the local-optimality probes at ±tol sit strictly uphill.
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[std::min(best + 1, xs.size() - 1)];
  const auto min = golden_section_minimize(risk, a, b, 0.25 * tol);

  BayesEstimate est;
  est.scaled = scaled;
  est.loss = loss;
  est.bracket_tolerance = tol;
  est.optimizer_iterations = min.iterations;
  est.beta = min.x;
  est.risk_at_min = min.fx;
  if (best == 0 && est.beta - floor <= tol) {
    est.boundary = true;
    est.beta = floor;
    est.risk_at_min = risk(floor);
  }

  est.locally_optimal = true;
  for (double k : {1.0, 2.0, 4.0}) {
    const double up = risk(est.beta + k * tol);
    const double down_x = est.beta - k * tol;
    const double down = down_x >= floor ? risk(down_x) : std::numeric_limits<double>::infinity();
    if (up < est.risk_at_min || down < est.risk_at_min) {
      est.locally_optimal = false;
    }
  }
  return est;
}

} // namespace spde_bayes
