#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "spde_bayes/estimators.hpp"
#include "spde_bayes/posterior.hpp"

namespace spde_bayes {

/// Non-negative weight f for the BvM integral with a declared growth
/// f(x) ≤ c1·exp(c2·|x|^r), r < 2.
class TestFunction {
public:
  static TestFunction constant_one();
  /// Weight equal to a loss function (its certificate is reused).
  static TestFunction from_loss(const LossFunction &loss);
  /// Throws ConfigError when the certificate has r ≥ 2.
  static TestFunction custom(std::function<double(double)> f, GrowthCertificate growth,
                             std::string name = "custom");

  double operator()(double x) const { return f_(x); }
  const GrowthCertificate &growth() const { return growth_; }
  const std::string &name() const { return name_; }

private:
  TestFunction() = default;
  std::function<double(double)> f_;
  GrowthCertificate growth_;
  std::string name_;
};

/// ∫_{−L}^{L} f(λ)|p̃(λ | U_N) − φ(λ)| dλ with L ≥ 20 chosen such that
/// c2 L^r − L²/2 < −40.
double bvm_distance(const Posterior &post, const TestFunction &f = TestFunction::constant_one());

struct PsiProfile {
  /// (r, ψ(r)) with ψ(r) = ∫ ℓ(λ + r) φ(λ) dλ.
  std::vector<std::pair<double, double>> values;
  double psi_at_zero = 0.0;
  /// ψ(0) strictly below ψ at every non-zero grid point.
  bool strict_min_at_zero = false;
};

PsiProfile psi_profile(const LossFunction &loss, const std::vector<double> &r_values);

/// Grid {±2^{−k}}_{k=0..10} ∪ {±1, ±2}.
std::vector<double> default_psi_grid();

struct RiskLimitDiagnostic {
  /// I_N^{r/2} ∫ (exp(|θ − β̂_N|^r) − 1) p(θ | U_N) dθ
  double lhs = 0.0;
  /// E|Z|^r = 2^{r/2} Γ((r+1)/2)/√π
  double rhs = 0.0;
};

/// Uses an already computed unscaled ExpPower(r) estimate.
RiskLimitDiagnostic scaled_risk_diagnostic(const Posterior &post, const BayesEstimate &beta_hat);
/// Computes β̂_N for ExpPower(r) first.
RiskLimitDiagnostic scaled_risk_diagnostic(const Posterior &post, double r);

} // namespace spde_bayes
