#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "spde_bayes/diagnostics.hpp"
#include "spde_bayes/errors.hpp"

using namespace spde_bayes;

namespace {

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

} // namespace

TEST(BvmDistance, UniformClosedForm) {
  for (double I : {1.0, 17.0, 354.0, 2870.0}) {
    for (double th : {0.3, 0.05, -0.1}) {
      const Posterior post(th, I, Prior::uniform_positive());
      EXPECT_NEAR(bvm_distance(post), 2.0 * (1.0 - Phi(std::sqrt(I) * th)), 1e-6)
          << "I = " << I << " th = " << th;
    }
  }
  EXPECT_NEAR(bvm_distance(Posterior(0.3, 17.0, Prior::uniform_positive())), 0.2161, 1e-4);
  EXPECT_LT(bvm_distance(Posterior(0.3, 722666.0, Prior::uniform_positive())), 1e-12);
}

TEST(BvmDistance, DecreasesWithInformation) {
  for (const auto &prior : {Prior::uniform_positive(), Prior::truncated_normal(1.0, 0.1),
                            Prior::truncated_normal(3.0, 0.05)}) {
    double prev = INFINITY;
    for (double I : {17.0, 354.0, 722666.0}) {
      const double d = bvm_distance(Posterior(0.3, I, prior));
      EXPECT_LT(d, prev) << prior.describe() << " I = " << I;
      prev = d;
    }
  }
}

TEST(BvmDistance, WeightedByLoss) {
  const Posterior post(0.3, 17.0, Prior::uniform_positive());
  const auto f = TestFunction::from_loss(LossFunction::exp_power(1.5));
  EXPECT_TRUE(std::isfinite(bvm_distance(post, f)));
  EXPECT_THROW(TestFunction::custom([](double x) { return std::exp(x * x); }, {1, 1, 2}),
               ConfigError);
}

TEST(Psi, QuadraticAndAbsolute) {
  const auto prof = psi_profile(LossFunction::quadratic(), {-2.0, -0.5, 0.0, 1.0, 3.0});
  for (const auto &[r, v] : prof.values) {
    EXPECT_NEAR(v, 1.0 + r * r, 1e-12) << r;
  }
  EXPECT_NEAR(prof.psi_at_zero, 1.0, 1e-12);
  EXPECT_TRUE(prof.strict_min_at_zero);
  EXPECT_NEAR(psi_profile(LossFunction::power(1.0), {1.0}).psi_at_zero,
              std::sqrt(2.0 / std::numbers::pi), 1e-12);
}

TEST(Psi, ExpPowerStrictMinimumOnDefaultGrid) {
  const auto grid = default_psi_grid();
  EXPECT_EQ(grid.size(), 26u);
  const auto prof = psi_profile(LossFunction::exp_power(1.5), grid);
  EXPECT_TRUE(prof.strict_min_at_zero);
  for (const auto &[r, v] : prof.values) {
    EXPECT_GT(v, prof.psi_at_zero) << r;
  }
}

TEST(RiskLimit, RhsValuesAndConvergence) {
  const Posterior post(0.505, 2870.0, Prior::uniform_positive());
  const auto d15 = scaled_risk_diagnostic(post, 1.5);
  EXPECT_NEAR(d15.rhs, 0.8600399873245195, 1e-12);
  EXPECT_NEAR(scaled_risk_diagnostic(post, 1.0).rhs, std::sqrt(2.0 / std::numbers::pi), 1e-12);
  // Sharp posterior far from the boundary: lhs ≈ E|Z|^r (1 + O(I^{-r/2})).
  const auto sharp = scaled_risk_diagnostic(Posterior(0.505, 1e8, Prior::uniform_positive()), 1.5);
  EXPECT_NEAR(sharp.lhs, sharp.rhs, 1e-4);
  EXPECT_LT(std::abs(sharp.lhs - sharp.rhs), std::abs(d15.lhs - d15.rhs));
}

TEST(RiskLimit, RequiresUnscaledExpPowerEstimate) {
  const Posterior post(0.505, 30.0, Prior::uniform_positive());
  const auto scaled = bayes_estimator(post, LossFunction::exp_power(1.5), true);
  EXPECT_THROW(scaled_risk_diagnostic(post, scaled), ConfigError);
  const auto quad = bayes_estimator(post, LossFunction::quadratic(), false);
  EXPECT_THROW(scaled_risk_diagnostic(post, quad), ConfigError);
}
