#include "spde_bayes/ks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spde_bayes/special_functions.hpp"

namespace spde_bayes {

double ks_statistic(std::span<const double> sample) {
  if (sample.size() < 2) {
    throw std::domain_error("ks_statistic: need at least two observations");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

} // namespace spde_bayes
