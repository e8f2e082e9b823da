#pragma once

#include <functional>
#include <span>

namespace spde_bayes {

struct ScalarMinimum {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Golden-section search for a minimum of a unimodal f on [lo, hi]. Stops
/// once the bracket is narrower than `tol` and reports its midpoint. Derivative free, so it is valid
/// for kinked objectives such as E|X − β|.
ScalarMinimum golden_section_minimize(const std::function<double(double)> &f, double lo,
                                      double hi, double tol, int max_iter = 500);

/// True when the sampled values decrease (weakly, within `rel_slack` of the
/// range) to a single trough and then increase.
bool is_unimodal(std::span<const double> values, double rel_slack = 1e-12);

} // namespace spde_bayes
