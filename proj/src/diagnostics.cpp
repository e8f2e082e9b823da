#include "spde_bayes/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "spde_bayes/errors.hpp"
#include "spde_bayes/quadrature.hpp"
#include "spde_bayes/special_functions.hpp"

namespace spde_bayes {

TestFunction TestFunction::constant_one() {
  TestFunction t;
  t.f_ = [](double) { return 1.0; };
  t.growth_ = {1.0, 0.0, 0.0};
  t.name_ = "one";
  return t;
}

TestFunction TestFunction::from_loss(const LossFunction &loss) {
  TestFunction t;
  t.f_ = [loss](double x) { return loss(x); };
  t.growth_ = loss.growth();
  if (loss.kind() == LossFunction::Kind::Quadratic || loss.kind() == LossFunction::Kind::Power) {
    // polynomial: dominated by exp(|x|) for any window we use
    t.growth_ = {1.0, 1.0, 1.0};
  }
  t.name_ = loss.describe();
  return t;
}

TestFunction TestFunction::custom(std::function<double(double)> f, GrowthCertificate growth,
                                  std::string name) {
  if (!f) {
    throw ConfigError("test function: empty callable");
  }
  if (!(growth.r >= 0.0 && growth.r < 2.0) || !(growth.c2 >= 0.0)) {
    throw ConfigError("test function: growth exponent must lie in [0, 2)");
  }
  TestFunction t;
  t.f_ = std::move(f);
  t.growth_ = growth;
  t.name_ = std::move(name);
  return t;
}

double bvm_distance(const Posterior &post, const TestFunction &f) {
  const auto &g = f.growth();
  double half = 20.0;
  while (g.c2 * std::pow(half, g.r) - 0.5 * half * half >= -40.0) {
    half += 1.0;
    if (half > 1e4) {
      throw NumericError("bvm_distance: test function grows too fast");
    }
  }
  const double edge = -post.sqrt_fisher() * post.theta_hat();
  const double splits[] = {edge};
  const auto grid =
      panel_breaks(-half, half, static_cast<std::size_t>(std::ceil(8.0 * half)), splits);
  return integrate_composite(
      [&](double lambda) {
        return f(lambda) * std::abs(lambda_density(post, lambda) - normal_pdf(lambda));
      },
      grid);
}

std::vector<double> default_psi_grid() {
  std::vector<double> r;
  for (int k = 0; k <= 10; ++k) {
    const double v = std::ldexp(1.0, -k);
    r.push_back(-v);
    r.push_back(v);
  }
  for (double v : {-2.0, -1.0, 1.0, 2.0}) {
    r.push_back(v);
  }
  return r;
}

namespace {

double psi(const LossFunction &loss, double shift) {
  double half = 12.0 + std::abs(shift);
  while (loss.log_value(half + std::abs(shift)) - 0.5 * (half - std::abs(shift)) *
                                                      (half - std::abs(shift)) >=
         -50.0) {
    half += 1.0;
    if (half > 1e4) {
      throw NumericError("psi_profile: loss grows too fast for the Gaussian weight");
    }
  }
  const double splits[] = {-shift};
  const auto grid =
      panel_breaks(-half, half, static_cast<std::size_t>(std::ceil(4.0 * half)), splits);
  if (loss.prefers_log_space()) {
    return std::exp(log_integrate_composite(
        [&](double l) { return loss.log_value(l + shift) - 0.5 * l * l - kLogSqrt2Pi; }, grid));
  }
  return integrate_composite([&](double l) { return loss(l + shift) * normal_pdf(l); }, grid);
}

} // namespace

PsiProfile psi_profile(const LossFunction &loss, const std::vector<double> &r_values) {
  PsiProfile out;
  out.psi_at_zero = psi(loss, 0.0);
  double min_nonzero = std::numeric_limits<double>::infinity();
  for (double r : r_values) {
    const double v = r == 0.0 ? out.psi_at_zero : psi(loss, r);
    out.values.emplace_back(r, v);
    if (r != 0.0) {
      min_nonzero = std::min(min_nonzero, v);
    }
  }
  out.strict_min_at_zero = out.psi_at_zero < min_nonzero;
  return out;
}

RiskLimitDiagnostic scaled_risk_diagnostic(const Posterior &post, const BayesEstimate &beta_hat) {
  if (beta_hat.loss.kind() != LossFunction::Kind::ExpPower || beta_hat.scaled) {
    throw ConfigError("scaled_risk_diagnostic: needs the unscaled exp-power estimate");
  }
  const double r = beta_hat.loss.exponent();
  RiskLimitDiagnostic d;
  d.lhs = std::pow(post.fisher(), 0.5 * r) *
          posterior_expected_loss(post, beta_hat.loss, beta_hat.beta, false);
  d.rhs = normal_abs_moment(r);
  return d;
}

RiskLimitDiagnostic scaled_risk_diagnostic(const Posterior &post, double r) {
  return scaled_risk_diagnostic(post, bayes_estimator(post, LossFunction::exp_power(r), false));
}

} // namespace spde_bayes
