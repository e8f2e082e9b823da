#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace spde_bayes {

/// μ_k = k^p, q_k = k^α.
struct PowerLawFamily {
  double p = 2.0;
  double alpha = 0.0;
};

/// Spectral data of a diagonalizable linear SPDE
///   du + θ A u dt = σ Σ_k q_k u_k h_k dw_k
/// truncated to the first k_max modes. Immutable once built.
///
/// σ = 0 is accepted so the noise-free flow can be simulated, but every
/// inference quantity (Fisher information, pivot) requires σ > 0.
class SpectralModel {
public:
  static SpectralModel power_law(double p, double alpha, int k_max, double sigma, double horizon);
  static SpectralModel from_arrays(std::vector<double> mu, std::vector<double> q, double sigma,
                                   double horizon);

  std::span<const double> mu() const { return mu_; }
  std::span<const double> q() const { return q_; }
  double mu(int k) const { return mu_.at(static_cast<std::size_t>(k - 1)); }
  double q(int k) const { return q_.at(static_cast<std::size_t>(k - 1)); }
  double sigma() const { return sigma_; }
  double horizon() const { return horizon_; }
  int k_max() const { return static_cast<int>(mu_.size()); }
  const std::optional<PowerLawFamily> &family() const { return family_; }

private:
  SpectralModel(std::vector<double> mu, std::vector<double> q, double sigma, double horizon,
                std::optional<PowerLawFamily> family);

  std::vector<double> mu_;
  std::vector<double> q_;
  double sigma_;
  double horizon_;
  std::optional<PowerLawFamily> family_;
};

/// I_N = (T/σ²) Σ_{k≤n} μ_k² / q_k². Throws std::out_of_range unless
/// 1 ≤ n ≤ k_max and std::domain_error when σ = 0.
double fisher_info(const SpectralModel &model, int n);

/// Heat equation on [0, π] with Dirichlet conditions: μ_k = k², q_k = k^α.
SpectralModel heat_model_1d(double alpha, int k_max, double sigma, double horizon);

enum class WellPosednessRoute { E1PowerLaw, E2BoundedRatio, NumericScan };

std::string_view to_string(WellPosednessRoute route);

struct WellPosednessReport {
  bool holds = false;
  /// inf over checked k ≥ n0 of 2θ − σ² q_k² / μ_k
  double margin = 0.0;
  std::int64_t n0 = 1;
  WellPosednessRoute route = WellPosednessRoute::NumericScan;
  /// Set when only k ≤ k_scan was examined; the tail is not certified.
  bool finite_scan_caveat = false;
};

/// Decides whether 2θ − σ² q_k²/μ_k ≥ c > 0 for all k ≥ N₀.
///
/// Power-law models are decided in closed form when 2α ≤ p. Everything else
/// falls back to scanning k = 1..k_scan (capped at k_max for explicit
/// spectra); a missing scan bound on such a model is a ConfigError.
WellPosednessReport check_wellposed(const SpectralModel &model, double theta,
                                    std::optional<std::int64_t> k_scan = std::nullopt);

/// inf over n0 ≤ k ≤ k_last of 2θ − σ² q_k²/μ_k, with k_last = k_scan for
/// explicit spectra and the analytic tail for power laws with 2α ≤ p.
double wellposed_margin_from(const SpectralModel &model, double theta, std::int64_t n0,
                             std::optional<std::int64_t> k_scan = std::nullopt);

} // namespace spde_bayes
