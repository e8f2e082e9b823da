#pragma once

#include <span>

namespace spde_bayes {

/// Two-sided Kolmogorov–Smirnov distance between the empirical CDF of
/// `sample` and Φ:  max_i max(i/n − Φ(x_(i)), Φ(x_(i)) − (i−1)/n).
/// Throws std::domain_error for fewer than two points.
double ks_statistic(std::span<const double> sample);

/// 1% critical value 1.63/√n of the asymptotic Kolmogorov law.
double ks_critical_1pct(std::size_t n);

} // namespace spde_bayes
