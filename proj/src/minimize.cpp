#include "spde_bayes/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spde_bayes {

ScalarMinimum golden_section_minimize(const std::function<double(double)> &f, double lo,
                                      double hi, double tol, int max_iter) {
  if (!(hi > lo) || !(tol > 0.0)) {
    throw std::invalid_argument("golden_section_minimize: bad bracket or tolerance");
  }
  constexpr double inv_phi = 0.61803398874989484820; // (√5 − 1)/2
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while ((b - a) > tol && it < max_iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  ScalarMinimum out;
  out.iterations = it;
  out.x = 0.5 * (a + b);
  out.fx = f(out.x);
  // The midpoint can lose to an interior probe only through rounding noise.
  if (fc < out.fx) {
    out.x = c;
    out.fx = fc;
  }
  if (fd < out.fx) {
    out.x = d;
    out.fx = fd;
  }
  return out;
}

bool is_unimodal(std::span<const double> values, double rel_slack) {
  if (values.size() < 3) {
    return true;
  }
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double slack = rel_slack * std::max(std::abs(*mx), std::abs(*mn));
  const auto trough = static_cast<std::size_t>(mn - values.begin());
  for (std::size_t i = 1; i <= trough; ++i) {
    if (values[i] > values[i - 1] + slack) {
      return false;
    }
  }
  for (std::size_t i = trough + 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1] - slack) {
      return false;
    }
  }
  return true;
}

} // namespace spde_bayes
