#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "spde_bayes/ks.hpp"
#include "spde_bayes/special_functions.hpp"

using namespace spde_bayes;

TEST(Ks, OptimalQuantileSample) {
  std::vector<double> x;
  for (int i = 1; i <= 1000; ++i) {
    x.push_back(normal_quantile((i - 0.5) / 1000.0));
  }
  EXPECT_LE(ks_statistic(x), 0.5 / 1000 + 1e-6);
}

TEST(Ks, DegenerateSamples) {
  EXPECT_DOUBLE_EQ(ks_statistic(std::vector<double>(50, 0.0)), 0.5);
  EXPECT_NEAR(ks_statistic(std::vector<double>(50, -10.0)), 1.0, 1e-20);
}

TEST(Ks, OrderInvariantAndSmallSampleErrors) {
  std::vector<double> a{0.3, -1.2, 2.0, 0.0, 0.9};
  std::vector<double> b{2.0, 0.9, 0.3, 0.0, -1.2};
  EXPECT_EQ(ks_statistic(a), ks_statistic(b));
  EXPECT_THROW(ks_statistic(std::vector<double>{}), std::domain_error);
  EXPECT_THROW(ks_statistic(std::vector<double>{1.0}), std::domain_error);
}

TEST(Ks, Critical) { EXPECT_NEAR(ks_critical_1pct(2000), 0.036448, 1e-6); }
