#include "spde_bayes/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace spde_bayes {

GaussLegendreRule::GaussLegendreRule(std::size_t order) : nodes_(order), weights_(order) {
  if (order < 1) {
    throw std::invalid_argument("GaussLegendreRule: order must be positive");
  }
  const std::size_t n = order;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th root, refined by Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p0 = 1.0;
        p1 = x;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    nodes_[n / 2] = 0.0;
  }
}

const GaussLegendreRule &GaussLegendreRule::standard() {
  static const GaussLegendreRule rule(64);
  return rule;
}

std::vector<double> panel_breaks(double lo, double hi, std::size_t panels,
                                 std::span<const double> splits) {
  if (!(hi > lo) || panels == 0) {
    throw std::invalid_argument("panel_breaks: empty interval");
  }
  std::vector<double> breaks;
  breaks.reserve(panels + 1 + splits.size());
  const double width = (hi - lo) / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) {
    breaks.push_back(lo + width * static_cast<double>(i));
  }
  breaks.push_back(hi);
  for (double s : splits) {
    if (s > lo && s < hi) {
      breaks.push_back(s);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

} // namespace spde_bayes
