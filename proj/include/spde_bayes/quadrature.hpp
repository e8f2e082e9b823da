#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "spde_bayes/summation.hpp"

namespace spde_bayes {

/// Gauss–Legendre nodes and weights on [-1, 1].
class GaussLegendreRule {
public:
  explicit GaussLegendreRule(std::size_t order);

  /// The 64-point rule used for every posterior integral.
  static const GaussLegendreRule &standard();

  std::size_t order() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F> double integrate(F &&f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    CompensatedSum acc;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      acc += weights_[i] * f(mid + half * nodes_[i]);
    }
    return half * acc.value();
  }

  /// log ∫ exp(log_f(x)) dx over [lo, hi], accumulated with a running
  /// log-sum-exp so that integrands far beyond the double range are fine.
  template <class F> double log_integrate(F &&log_f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    std::vector<double> terms(nodes_.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      terms[i] = std::log(weights_[i]) + log_f(mid + half * nodes_[i]);
      if (terms[i] > peak) {
        peak = terms[i];
      }
    }
    if (peak == -std::numeric_limits<double>::infinity()) {
      return peak;
    }
    CompensatedSum acc;
    for (double t : terms) {
      acc += std::exp(t - peak);
    }
    return peak + std::log(acc.value() * half);
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Sorted panel boundaries covering [lo, hi] with `panels` equal panels plus
/// any interior `splits` (kinks or jumps of the integrand).
std::vector<double> panel_breaks(double lo, double hi, std::size_t panels,
                                 std::span<const double> splits = {});

/// Composite rule over consecutive breakpoints.
template <class F> double integrate_composite(F &&f, std::span<const double> breaks) {
  const auto &rule = GaussLegendreRule::standard();
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    acc += rule.integrate(f, breaks[i], breaks[i + 1]);
  }
  return acc.value();
}

template <class F> double log_integrate_composite(F &&log_f, std::span<const double> breaks) {
  const auto &rule = GaussLegendreRule::standard();
  std::vector<double> parts;
  parts.reserve(breaks.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    parts.push_back(rule.log_integrate(log_f, breaks[i], breaks[i + 1]));
    if (parts.back() > peak) {
      peak = parts.back();
    }
  }
  if (peak == -std::numeric_limits<double>::infinity()) {
    return peak;
  }
  CompensatedSum acc;
  for (double p : parts) {
    acc += std::exp(p - peak);
  }
  return peak + std::log(acc.value());
}

namespace detail {
template <class F>
double adaptive_step(F &f, const GaussLegendreRule &rule, double lo, double hi, double whole,
                     double abs_tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double left = rule.integrate(f, lo, mid);
  const double right = rule.integrate(f, mid, hi);
  if (depth <= 0 || std::abs(left + right - whole) <= abs_tol) {
    return left + right;
  }
  return adaptive_step(f, rule, lo, mid, left, 0.5 * abs_tol, depth - 1) +
         adaptive_step(f, rule, mid, hi, right, 0.5 * abs_tol, depth - 1);
}
} // namespace detail

/// Adaptive bisection on top of the composite rule: each panel is split until
/// its two halves agree with the parent to `rel_tol` of the running total.
template <class F>
double integrate_adaptive(F &&f, std::span<const double> breaks, double rel_tol = 1e-13,
                          int max_depth = 12) {
  const auto &rule = GaussLegendreRule::standard();
  std::vector<double> coarse;
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    coarse.push_back(rule.integrate(f, breaks[i], breaks[i + 1]));
    scale += std::abs(coarse.back());
  }
  CompensatedSum acc;
  const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    acc += detail::adaptive_step(f, rule, breaks[i], breaks[i + 1], coarse[i], tol, max_depth);
  }
  return acc.value();
}

} // namespace spde_bayes
