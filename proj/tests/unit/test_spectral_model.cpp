#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "spde_bayes/errors.hpp"
#include "spde_bayes/spectral_model.hpp"

using namespace spde_bayes;

namespace {

// Least-squares slope of log I_N on log N over N = 50..500.
double fisher_slope(double alpha) {
  const auto model = heat_model_1d(alpha, 500, 1.0, 1.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (int n = 50; n <= 500; ++n) {
    const double x = std::log(n), y = std::log(fisher_info(model, n));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace

TEST(SpectralModel, PowerLawArrays) {
  const auto m = heat_model_1d(0.0, 20, 1.0, 1.0);
  EXPECT_EQ(m.k_max(), 20);
  for (int k = 1; k <= 20; ++k) {
    EXPECT_DOUBLE_EQ(m.mu(k), k * k);
    EXPECT_DOUBLE_EQ(m.q(k), 1.0);
  }
  const auto m2 = SpectralModel::power_law(2, 1.0, 2, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(m2.q(1), 1.0);
  EXPECT_DOUBLE_EQ(m2.q(2), 2.0);
}

TEST(SpectralModel, RejectsIllFormedInput) {
  EXPECT_THROW(SpectralModel::power_law(0.0, 0.0, 5, 1.0, 1.0), ConfigError);
  EXPECT_THROW(SpectralModel::power_law(2.0, 0.0, 0, 1.0, 1.0), ConfigError);
  EXPECT_THROW(SpectralModel::power_law(2.0, 0.0, 5, -1.0, 1.0), ConfigError);
  EXPECT_THROW(SpectralModel::power_law(2.0, 0.0, 5, 1.0, 0.0), ConfigError);
  EXPECT_THROW(SpectralModel::from_arrays({1.0, 0.0}, {1.0, 1.0}, 1.0, 1.0), ConfigError);
  EXPECT_THROW(SpectralModel::from_arrays({1.0}, {1.0, 1.0}, 1.0, 1.0), ConfigError);
  EXPECT_NO_THROW(SpectralModel::power_law(2.0, 0.0, 5, 0.0, 1.0));
}

TEST(FisherInfo, ClosedFormSums) {
  EXPECT_DOUBLE_EQ(fisher_info(heat_model_1d(0.0, 20, 1.0, 1.0), 2), 17.0);
  EXPECT_DOUBLE_EQ(fisher_info(SpectralModel::from_arrays({1.0}, {1.0}, 1.0, 1.0), 1), 1.0);
  EXPECT_DOUBLE_EQ(fisher_info(heat_model_1d(1.0, 20, 1.0, 1.0), 20), 2870.0);
  // Σ_{k≤20} k⁴
  EXPECT_DOUBLE_EQ(fisher_info(heat_model_1d(0.0, 20, 1.0, 1.0), 20), 722666.0);
  // T/σ² scaling
  EXPECT_DOUBLE_EQ(fisher_info(heat_model_1d(0.0, 20, 2.0, 3.0), 2), 17.0 * 3.0 / 4.0);
}

TEST(FisherInfo, IncrementIdentity) {
  for (double alpha : {0.0, 0.999, 1.0, 1.7}) {
    const auto m = heat_model_1d(alpha, 40, 0.7, 2.5);
    for (int n = 1; n < 40; ++n) {
      const double step = m.horizon() / (m.sigma() * m.sigma()) * m.mu(n + 1) * m.mu(n + 1) /
                          (m.q(n + 1) * m.q(n + 1));
      EXPECT_NEAR(fisher_info(m, n + 1) - fisher_info(m, n), step, 1e-12 * fisher_info(m, n + 1));
    }
  }
}

TEST(FisherInfo, Errors) {
  const auto m = heat_model_1d(0.0, 5, 1.0, 1.0);
  EXPECT_THROW(fisher_info(m, 0), std::out_of_range);
  EXPECT_THROW(fisher_info(m, 6), std::out_of_range);
  EXPECT_THROW(fisher_info(heat_model_1d(0.0, 5, 0.0, 1.0), 2), std::domain_error);
}

TEST(FisherInfo, PowerLawSlope) {
  EXPECT_NEAR(fisher_slope(0.0), 5.0, 0.02 * 5.0);
  EXPECT_NEAR(fisher_slope(0.999), 3.002, 0.02 * 3.002);
  EXPECT_NEAR(fisher_slope(1.0), 3.0, 0.02 * 3.0);
}

TEST(WellPosedness, RouteE2) {
  const auto m = heat_model_1d(1.0, 20, 1.0, 1.0);
  const auto r = check_wellposed(m, 0.505);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.margin, 0.01, 1e-12);
  EXPECT_EQ(r.route, WellPosednessRoute::E2BoundedRatio);
  const auto bad = check_wellposed(m, 0.3);
  EXPECT_FALSE(bad.holds);
  EXPECT_NEAR(bad.margin, -0.4, 1e-12);
}

TEST(WellPosedness, RouteE1) {
  const auto r = check_wellposed(heat_model_1d(0.0, 20, 1.0, 1.0), 0.3);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.n0, 2);
  EXPECT_NEAR(r.margin, 0.35, 1e-12);
  EXPECT_EQ(r.route, WellPosednessRoute::E1PowerLaw);
  EXPECT_FALSE(r.finite_scan_caveat);
}

TEST(WellPosedness, NumericScanCarriesCaveat) {
  const auto m = SpectralModel::from_arrays({1, 4, 9, 16}, {1, 1, 1, 1}, 1.0, 1.0);
  const auto r = check_wellposed(m, 0.3, 4);
  EXPECT_EQ(r.route, WellPosednessRoute::NumericScan);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.finite_scan_caveat);
  EXPECT_EQ(r.n0, 2);
  // q grows faster than √μ: only a finite scan is possible and it is required.
  const auto steep = SpectralModel::power_law(2.0, 1.5, 10, 1.0, 1.0);
  EXPECT_THROW(check_wellposed(steep, 0.3), ConfigError);
  EXPECT_FALSE(check_wellposed(steep, 0.3, 10).holds);
}

TEST(WellPosedness, MonotoneInThetaAtFixedN0) {
  const auto models = {heat_model_1d(0.0, 20, 1.0, 1.0), heat_model_1d(1.0, 20, 1.0, 1.0),
                       SpectralModel::from_arrays({1, 3, 2, 8}, {1, 1, 2, 1}, 1.3, 1.0)};
  for (const auto &m : models) {
    for (double theta = 0.05; theta < 2.0; theta += 0.05) {
      const auto r = check_wellposed(m, theta, 4);
      const auto r2 = check_wellposed(m, theta + 0.05, 4);
      if (r.holds) {
        EXPECT_TRUE(r2.holds);
      }
      for (std::int64_t n0 = 1; n0 <= 4; ++n0) {
        EXPECT_GE(wellposed_margin_from(m, theta + 0.05, n0, 4),
                  wellposed_margin_from(m, theta, n0, 4));
      }
    }
  }
}
