#include "spde_bayes/path_simulator.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "spde_bayes/csv.hpp"
#include "spde_bayes/errors.hpp"
#include "spde_bayes/summation.hpp"

namespace spde_bayes {

SimulationGrid SimulationGrid::from_dt(double dt, double horizon) {
  if (!(dt > 0.0) || !(horizon > 0.0)) {
    throw ConfigError("simulation grid: dt and T must be positive");
  }
  const double steps = std::round(horizon / dt);
  if (steps < 1.0 || std::abs(steps * dt - horizon) > horizon * 1e-12) {
    throw ConfigError("simulation grid: T = " + std::to_string(horizon) +
                      " is not an integer multiple of dt = " + std::to_string(dt));
  }
  return SimulationGrid{dt, static_cast<std::int64_t>(steps)};
}

SimulationGrid SimulationGrid::from_steps(std::int64_t n_steps, double horizon) {
  if (n_steps < 1 || !(horizon > 0.0)) {
    throw ConfigError("simulation grid: need n_steps >= 1 and T > 0");
  }
  return SimulationGrid{horizon / static_cast<double>(n_steps), n_steps};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate) {
  return splitmix64(splitmix64(master) ^ splitmix64(replicate + 0x5851f42d4c957f2dULL));
}

std::uint64_t mode_stream_seed(std::uint64_t seed, int k) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(k) * 0x2545f4914f6cdd1dULL));
}

std::size_t ModePathSet::index(int k) const {
  if (k < 1 || k > n_modes()) {
    throw std::out_of_range("mode index " + std::to_string(k) + " outside [1, " +
                            std::to_string(n_modes()) + "]");
  }
  return static_cast<std::size_t>(k - 1);
}

std::span<const double> ModePathSet::path(int k) const {
  const auto i = index(k);
  if (paths_.empty()) {
    return {};
  }
  return paths_[i];
}

const OracleChannel &ModePathSet::oracle() const {
  if (!oracle_) {
    throw CapabilityError("path set carries no oracle channel");
  }
  return *oracle_;
}

ModePathSet ModePathSet::from_statistics(const SimulationGrid &grid, double horizon,
                                         std::vector<double> u0,
                                         std::vector<ModeStatistics> stats) {
  if (u0.size() != stats.size()) {
    throw std::invalid_argument("from_statistics: u0 and statistics differ in length");
  }
  ModePathSet out;
  out.grid_ = grid;
  out.horizon_ = horizon;
  out.u0_ = std::move(u0);
  out.stats_ = std::move(stats);
  out.u_terminal_.resize(out.u0_.size());
  for (std::size_t i = 0; i < out.u0_.size(); ++i) {
    out.u_terminal_[i] = out.u0_[i] * std::exp(out.stats_[i].log_endpoint);
  }
  return out;
}

ModePathSet ModePathSet::observable_only() const {
  ModePathSet copy = *this;
  copy.oracle_.reset();
  return copy;
}

ModePathSet simulate_modes_with_noise(const SpectralModel &model, double theta,
                                      std::span<const double> u0, const SimulationGrid &grid,
                                      const std::function<double(int, std::int64_t)> &increment,
                                      StorageMode storage, std::uint64_t seed) {
  if (!(theta > 0.0)) {
    throw std::domain_error("simulate_modes: theta must be positive");
  }
  if (u0.empty() || static_cast<int>(u0.size()) > model.k_max()) {
    throw std::domain_error("simulate_modes: need 1..k_max initial modes");
  }
  for (std::size_t i = 0; i < u0.size(); ++i) {
    if (u0[i] == 0.0 || !std::isfinite(u0[i])) {
      throw std::domain_error("simulate_modes: u0[" + std::to_string(i + 1) +
                              "] must be nonzero and finite");
    }
  }
  if (grid.n_steps < 1 || !(grid.dt > 0.0)) {
    throw std::domain_error("simulate_modes: empty grid");
  }

  const int n = static_cast<int>(u0.size());
  const double sigma = model.sigma();
  ModePathSet out;
  out.grid_ = grid;
  out.horizon_ = model.horizon();
  out.seed_ = seed;
  out.u0_.assign(u0.begin(), u0.end());
  out.u_terminal_.resize(static_cast<std::size_t>(n));
  out.stats_.resize(static_cast<std::size_t>(n));
  if (storage == StorageMode::Full) {
    out.paths_.resize(static_cast<std::size_t>(n));
  }
  OracleChannel oracle;
  oracle.theta_true = theta;
  oracle.w_terminal.resize(static_cast<std::size_t>(n));

  for (int k = 1; k <= n; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    const double mu = model.mu(k);
    const double q = model.q(k);
    const double drift = -(theta * mu + 0.5 * sigma * sigma * q * q) * grid.dt;
    const double vol = sigma * q;

    std::vector<double> *path = nullptr;
    if (storage == StorageMode::Full) {
      path = &out.paths_[idx];
      path->reserve(static_cast<std::size_t>(grid.n_steps) + 1);
      path->push_back(u0[idx]);
    }
    CompensatedSum ito;
    CompensatedSum w;
    CompensatedSum log_u;
    double u = u0[idx];
    for (std::int64_t i = 0; i < grid.n_steps; ++i) {
      const double dw = increment(k, i);
      log_u += drift + vol * dw;
      // Anchored at u0 so rounding does not compound over the steps.
      const double next = u0[idx] * std::exp(log_u.value());
      ito += (next - u) / u;
      w += dw;
      u = next;
      if (path) {
        path->push_back(u);
      }
    }
    out.u_terminal_[idx] = u;
    oracle.w_terminal[idx] = w.value();
    out.stats_[idx].ito_sum = ito.value();
    // log|u(T)| − log|u(0)|, kept in log form so it survives underflow of u(T).
    out.stats_[idx].log_endpoint = log_u.value();
  }
  out.oracle_ = std::move(oracle);
  return out;
}

ModePathSet simulate_modes(const SpectralModel &model, double theta, std::span<const double> u0,
                           const SimulationGrid &grid, std::uint64_t seed, StorageMode storage) {
  const double sd = std::sqrt(grid.dt);
  // One generator per mode, advanced sequentially in time.
  std::vector<std::mt19937_64> engines;
  engines.reserve(u0.size());
  for (std::size_t k = 1; k <= u0.size(); ++k) {
    engines.emplace_back(mode_stream_seed(seed, static_cast<int>(k)));
  }
  std::vector<std::normal_distribution<double>> normals(u0.size(),
                                                        std::normal_distribution<double>(0.0, sd));
  auto increment = [&](int k, std::int64_t) {
    const auto idx = static_cast<std::size_t>(k - 1);
    return normals[idx](engines[idx]);
  };
  return simulate_modes_with_noise(model, theta, u0, grid, increment, storage, seed);
}

double ito_log_integral(const ModePathSet &paths, int k) {
  const auto path = paths.path(k);
  if (path.empty()) {
    return paths.statistics(k).ito_sum;
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    acc += (path[i + 1] - path[i]) / path[i];
  }
  return acc.value();
}

double log_endpoint_statistic(const ModePathSet &paths, int k) {
  return paths.statistics(k).log_endpoint;
}

double heat_initial_coefficient(int k) {
  if (k < 1) {
    throw std::out_of_range("heat_initial_coefficient: k must be positive");
  }
  if (k % 2 == 0) {
    return 0.0;
  }
  const double kd = static_cast<double>(k);
  return std::sqrt(2.0 / std::numbers::pi) * 4.0 / (kd * kd * kd);
}

std::vector<double> heat_initial_modes(int k_max, double floor) {
  if (k_max < 1) {
    throw ConfigError("heat_initial_modes: k_max must be positive");
  }
  if (!(floor > 0.0)) {
    throw ConfigError("heat_initial_modes: floor must be positive");
  }
  std::vector<double> u0(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    u0[static_cast<std::size_t>(k - 1)] = std::max(heat_initial_coefficient(k), floor);
  }
  return u0;
}

void write_path_csv(const ModePathSet &paths, std::ostream &out) {
  if (!paths.has_paths()) {
    throw CapabilityError("write_path_csv: path set was simulated in statistics-only mode");
  }
  out << 't';
  for (int k = 1; k <= paths.n_modes(); ++k) {
    out << ",u_" << k;
  }
  out << '\n';
  for (std::int64_t i = 0; i <= paths.grid().n_steps; ++i) {
    out << format_double(paths.grid().time(i));
    for (int k = 1; k <= paths.n_modes(); ++k) {
      out << ',' << format_double(paths.path(k)[static_cast<std::size_t>(i)]);
    }
    out << '\n';
  }
}

} // namespace spde_bayes
