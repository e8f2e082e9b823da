#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace spde_bayes {

/// Declared majorant f(x) ≤ c1·exp(c2·|x|^r). Everything that integrates
/// against the Gaussian posterior kernel needs r < 2.
struct GrowthCertificate {
  double c1 = 1.0;
  double c2 = 0.0;
  double r = 0.0;
};

/// Prior density on (0, ∞).
class Prior {
public:
  enum class Kind { UniformPositive, TruncatedNormal, Custom };
  /// Q_p: polynomial majorant. Q_e2: exp(c θ^r) majorant with r < 2.
  enum class GrowthClass { Qp, Qe2 };

  /// ϱ ≡ 1 on (0, ∞). Improper, but the posterior still normalizes.
  static Prior uniform_positive();
  /// N(mu0, var0) conditioned on (0, ∞), normalized.
  static Prior truncated_normal(double mu0, double var0);
  /// User density, positive and continuous on (0, ∞). Rejects r ≥ 2.
  static Prior custom(std::function<double(double)> density, GrowthCertificate growth,
                      std::string name = "custom");

  Kind kind() const { return kind_; }
  GrowthClass growth_class() const { return growth_class_; }
  const GrowthCertificate &growth() const { return growth_; }
  double mu0() const { return mu0_; }
  double var0() const { return var0_; }
  /// log of the density's normalizing factor (0 for the improper uniform).
  double log_normalization() const { return log_norm_; }

  /// log ϱ(θ); −inf for θ ≤ 0.
  double log_density(double theta) const;
  double density(double theta) const;

  /// "uniform", "tnormal:mu0,var0", or the custom name.
  std::string describe() const;
  /// File-name friendly label: "uniform", "tnormal", or the custom name.
  std::string label() const;

private:
  Prior() = default;

  Kind kind_ = Kind::UniformPositive;
  GrowthClass growth_class_ = GrowthClass::Qp;
  GrowthCertificate growth_;
  double mu0_ = 0.0;
  double var0_ = 1.0;
  double log_norm_ = 0.0;
  std::function<double(double)> custom_;
  std::string name_;
};

/// "uniform" | "tnormal:mu0,var0". The second tnormal parameter is a variance.
Prior parse_prior(std::string_view text);

/// Symmetric loss, non-decreasing on [0, ∞), ℓ(0) = 0.
class LossFunction {
public:
  enum class Kind { Quadratic, Power, ExpPower, Custom };
  /// W_p: polynomial majorant. W_e2: exp(c|x|^r), r < 2. W_prime: monotone
  /// in |x| and locally bounded only.
  enum class LossClass { Wp, We2, WPrime };

  static LossFunction quadratic();
  /// |x|^a, a > 0.
  static LossFunction power(double a);
  /// exp(|x|^r) − 1, r ∈ (0, 2).
  static LossFunction exp_power(double r);
  static LossFunction custom(std::function<double(double)> fn, GrowthCertificate growth,
                             LossClass cls, std::string name = "custom");

  Kind kind() const { return kind_; }
  LossClass loss_class() const { return class_; }
  const GrowthCertificate &growth() const { return growth_; }
  /// a for Power, r for ExpPower.
  double exponent() const { return exponent_; }

  double operator()(double x) const;
  /// log ℓ(x); −inf where ℓ vanishes. Finite for ExpPower even when ℓ(x)
  /// overflows a double.
  double log_value(double x) const;
  /// True when risks should be accumulated in log space.
  bool prefers_log_space() const { return kind_ == Kind::ExpPower; }
  /// True when ℓ has a kink or jump at 0 that quadrature should split at.
  bool kinked_at_zero() const { return kind_ != Kind::Quadratic; }

  /// "quadratic", "power:a", "exp-power:r", or the custom name.
  std::string describe() const;

private:
  LossFunction() = default;

  Kind kind_ = Kind::Quadratic;
  LossClass class_ = LossClass::Wp;
  GrowthCertificate growth_;
  double exponent_ = 2.0;
  std::function<double(double)> custom_;
  std::string name_;
};

/// "quadratic" | "power:a" | "exp-power:r".
LossFunction parse_loss(std::string_view text);

} // namespace spde_bayes
