#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "spde_bayes/posterior.hpp"
#include "spde_bayes/quadrature.hpp"

using namespace spde_bayes;

namespace {

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

struct ClosedForm {
  double normalizer, mean, variance;
};

// N(m, s2) kernel truncated to (0, ∞) with an extra constant factor.
ClosedForm truncated(double m, double s2, double factor) {
  const double s = std::sqrt(s2);
  const double z = m / s;
  const double h = phi(z) / Phi(z);
  return {factor * std::sqrt(2 * std::numbers::pi * s2) * Phi(z), m + s * h,
          s2 * (1 - z * h - h * h)};
}

ClosedForm uniform_closed(double th, double I) { return truncated(th, 1.0 / I, 1.0); }

// Remark-4.1 conjugate update, prior N(mu0, v0) restricted to (0, ∞).
ClosedForm tnormal_closed(double th, double I, double mu0, double v0) {
  const double m = (v0 * th + mu0 / I) / (v0 + 1.0 / I);
  const double s2 = (v0 / I) / (v0 + 1.0 / I);
  // exp(−I(θ−θ̂)²/2)·exp(−(θ−μ0)²/(2 v0)) = exp(−(θ̂−μ0)²/(2(v0+1/I)))·exp(−(θ−m)²/(2 s2))
  const double prior_norm = 1.0 / (std::sqrt(2 * std::numbers::pi * v0) * Phi(mu0 / std::sqrt(v0)));
  const double factor = prior_norm * std::exp(-0.5 * (th - mu0) * (th - mu0) / (v0 + 1.0 / I));
  return truncated(m, s2, factor);
}

void expect_rel(double got, double want, double tol, const char *what, double I) {
  EXPECT_NEAR(got / want, 1.0, tol) << what << " at I = " << I;
}

} // namespace

TEST(Posterior, ConjugacyAgainstClosedForms) {
  for (double I : {1.0, 17.0, 2870.0, 722666.0}) {
    for (double th : {0.3, 0.505, -0.01}) {
      const Posterior u(th, I, Prior::uniform_positive());
      const auto cu = uniform_closed(th, I);
      const auto qu = quadrature_moments(u);
      expect_rel(u.normalizer(), cu.normalizer, 1e-12, "uniform normalizer", I);
      expect_rel(std::exp(qu.log_normalizer), cu.normalizer, 1e-8, "uniform quad normalizer", I);
      expect_rel(qu.mean, cu.mean, 1e-8, "uniform mean", I);
      expect_rel(qu.variance, cu.variance, 1e-8, "uniform variance", I);

      const Posterior t(th, I, Prior::truncated_normal(1.0, 0.1));
      const auto ct = tnormal_closed(th, I, 1.0, 0.1);
      const auto qt = quadrature_moments(t);
      expect_rel(t.normalizer(), ct.normalizer, 1e-12, "tnormal normalizer", I);
      expect_rel(std::exp(qt.log_normalizer), ct.normalizer, 1e-8, "tnormal quad normalizer", I);
      expect_rel(qt.mean, ct.mean, 1e-8, "tnormal mean", I);
      expect_rel(qt.variance, ct.variance, 1e-8, "tnormal variance", I);
      const auto law = t.conjugate_law();
      ASSERT_TRUE(law.has_value());
      EXPECT_NEAR(law->truncated_mean() / ct.mean, 1.0, 1e-11);
    }
  }
}

TEST(Posterior, WidePriorRecoversUniform) {
  const Posterior u(0.3, 17.0, Prior::uniform_positive());
  const Posterior t(0.3, 17.0, Prior::truncated_normal(1.0, 1e12));
  const auto lu = *u.conjugate_law();
  const auto lt = *t.conjugate_law();
  EXPECT_NEAR(lt.location, lu.location, 1e-10);
  EXPECT_NEAR(lt.scale2, lu.scale2, 1e-12);
  EXPECT_NEAR(t.density(0.4) / u.density(0.4), 1.0, 1e-6);
}

TEST(Posterior, NormalizesForEveryPriorKind) {
  const std::vector<Prior> priors{
      Prior::uniform_positive(), Prior::truncated_normal(1.0, 0.1),
      Prior::custom([](double t) { return std::exp(std::pow(t, 1.5)); }, {1.0, 1.0, 1.5}, "e15"),
      Prior::custom([](double t) { return 1.0 + t * t; }, {2.0, 1.0, 1.0}, "poly")};
  for (const auto &p : priors) {
    for (double I : {1.0, 17.0, 722666.0}) {
      const Posterior post(0.3, I, p);
      const auto b = post.breaks();
      const double mass =
          integrate_adaptive([&](double t) { return post.density(t); }, std::span<const double>(b));
      EXPECT_NEAR(mass, 1.0, 1e-10) << p.describe() << " I = " << I;
    }
  }
}

TEST(Posterior, DensityZeroOffSupport) {
  const Posterior post(0.3, 17.0, Prior::uniform_positive());
  EXPECT_EQ(post.density(0.0), 0.0);
  EXPECT_EQ(post.density(-0.1), 0.0);
  EXPECT_GT(post.density(0.3), 0.0);
  EXPECT_THROW(Posterior(0.3, 0.0, Prior::uniform_positive()), std::domain_error);
  EXPECT_THROW(Posterior(0.3, INFINITY, Prior::uniform_positive()), std::domain_error);
}

TEST(LambdaDensity, UniformClosedFormAndMass) {
  for (double I : {17.0, 2870.0}) {
    const Posterior post(0.3, I, Prior::uniform_positive());
    const double cut = -std::sqrt(I) * 0.3;
    for (double lam : {cut + 0.1, -1.0, 0.0, 0.7, 3.0}) {
      EXPECT_NEAR(lambda_density(post, lam), phi(lam) / Phi(-cut), 1e-14);
    }
    EXPECT_EQ(lambda_density(post, cut - 1e-9), 0.0);
    const auto b = panel_breaks(cut, 40.0, 200);
    EXPECT_NEAR(integrate_composite([&](double l) { return lambda_density(post, l); }, b), 1.0,
                1e-10);
  }
  const Posterior tn(0.3, 17.0, Prior::truncated_normal(1.0, 0.1));
  const auto b = panel_breaks(-std::sqrt(17.0) * 0.3, 40.0, 200);
  EXPECT_NEAR(integrate_composite([&](double l) { return lambda_density(tn, l); }, b), 1.0, 1e-10);
}

TEST(Posterior, FromMle) {
  MleResult r;
  r.theta_hat = 0.4;
  r.fisher = 30.0;
  const auto post = posterior_from_mle(r, Prior::uniform_positive());
  EXPECT_EQ(post.theta_hat(), 0.4);
  EXPECT_EQ(post.fisher(), 30.0);
  r.fisher = INFINITY;
  EXPECT_THROW(posterior_from_mle(r, Prior::uniform_positive()), std::domain_error);
}
