#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spde_bayes/spectral_model.hpp"

namespace spde_bayes {

/// Uniform time grid t_i = i·dt, i = 0..n_steps, with n_steps·dt = T.
struct SimulationGrid {
  double dt = 0.0;
  std::int64_t n_steps = 0;

  /// Throws ConfigError unless T/dt is an integer to within T·1e-12.
  static SimulationGrid from_dt(double dt, double horizon);
  static SimulationGrid from_steps(std::int64_t n_steps, double horizon);

  double time(std::int64_t i) const { return static_cast<double>(i) * dt; }
};

// Seed derivation. Each (replicate, mode) pair owns an independent stream, so
// adding replicates or modes never perturbs existing ones.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate);
std::uint64_t mode_stream_seed(std::uint64_t seed, int k);

enum class StorageMode { Full, StatisticsOnly };

/// Per-mode observation statistics.
struct ModeStatistics {
  /// Σ_i (u(t_{i+1}) − u(t_i)) / u(t_i)
  double ito_sum = 0.0;
  /// log|u(T)| − log|u(0)|
  double log_endpoint = 0.0;
};

/// Ground truth used to generate a path set. Tests and the oracle estimator
/// read it; the observable inference API never does.
struct OracleChannel {
  double theta_true = 0.0;
  std::vector<double> w_terminal;
};

/// Simulated Fourier modes u_1..u_n on a grid.
class ModePathSet {
public:
  /// Observable-only set rebuilt from archived per-mode statistics.
  static ModePathSet from_statistics(const SimulationGrid &grid, double horizon,
                                     std::vector<double> u0, std::vector<ModeStatistics> stats);

  int n_modes() const { return static_cast<int>(u0_.size()); }
  const SimulationGrid &grid() const { return grid_; }
  double horizon() const { return horizon_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> u0() const { return u0_; }
  double u_terminal(int k) const { return u_terminal_.at(index(k)); }
  const ModeStatistics &statistics(int k) const { return stats_.at(index(k)); }

  bool has_paths() const { return !paths_.empty(); }
  /// u_k(t_0..t_n); empty when simulated in StatisticsOnly mode.
  std::span<const double> path(int k) const;

  bool has_oracle() const { return oracle_.has_value(); }
  /// Throws CapabilityError when the oracle channel was stripped.
  const OracleChannel &oracle() const;
  /// Copy without the oracle channel, i.e. what a real observer would hold.
  ModePathSet observable_only() const;

private:
  friend ModePathSet simulate_modes_with_noise(const SpectralModel &, double,
                                               std::span<const double>, const SimulationGrid &,
                                               const std::function<double(int, std::int64_t)> &,
                                               StorageMode, std::uint64_t);
  std::size_t index(int k) const;

  SimulationGrid grid_;
  double horizon_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> u0_;
  std::vector<double> u_terminal_;
  std::vector<ModeStatistics> stats_;
  std::vector<std::vector<double>> paths_;
  std::optional<OracleChannel> oracle_;
};

/// Exact simulation of du_k = −θ μ_k u_k dt + σ q_k u_k dw_k for k = 1..u0.size():
///   u_k(t_{i+1}) = u_k(t_i) · exp(−(θ μ_k + σ² q_k²/2) dt + σ q_k ΔW_{k,i}),
/// with ΔW_{k,i} ~ N(0, dt) drawn from the per-mode stream of `seed`.
/// Throws std::domain_error if any u0 is zero or u0 has more entries than
/// the model has modes.
ModePathSet simulate_modes(const SpectralModel &model, double theta, std::span<const double> u0,
                           const SimulationGrid &grid, std::uint64_t seed,
                           StorageMode storage = StorageMode::Full);

/// Same update with caller-supplied Brownian increments ΔW(k, i). Used for
/// conditioned paths (e.g. forcing w_k(T) = 0).
ModePathSet simulate_modes_with_noise(const SpectralModel &model, double theta,
                                      std::span<const double> u0, const SimulationGrid &grid,
                                      const std::function<double(int, std::int64_t)> &increment,
                                      StorageMode storage = StorageMode::Full,
                                      std::uint64_t seed = 0);

/// Left-point Itô sum Σ (u_{i+1} − u_i)/u_i approximating ∫ du_k/u_k.
double ito_log_integral(const ModePathSet &paths, int k);

/// log(u_k(T)/u_k(0)), free of time-discretization error.
double log_endpoint_statistic(const ModePathSet &paths, int k);

/// ⟨π²/4 − (x − π/2)², √(2/π) sin(kx)⟩ on [0, π] = √(2/π)·2(1 − (−1)^k)/k³.
double heat_initial_coefficient(int k);

/// Initial modes for the heat example: max(analytic coefficient, floor). The
/// analytic coefficient vanishes for even k, which the model forbids.
std::vector<double> heat_initial_modes(int k_max, double floor = 1e-3);

/// CSV with header `t,u_1,...,u_N`, 17 significant digits. Requires stored paths.
void write_path_csv(const ModePathSet &paths, std::ostream &out);

} // namespace spde_bayes
