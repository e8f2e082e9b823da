#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spde_bayes/mle.hpp"
#include "spde_bayes/spectral_model.hpp"

namespace spde_bayes {

/// Flat `[section]` / `key = value` text. Values are scalars, quoted
/// strings, or bracketed comma-separated arrays. `#` starts a comment.
class ConfigFile {
public:
  static ConfigFile parse(std::string_view text, std::string_view origin = "<string>");
  static ConfigFile load(const std::filesystem::path &file);

  bool has(std::string_view section, std::string_view key) const;
  std::string get_string(std::string_view section, std::string_view key) const;
  double get_double(std::string_view section, std::string_view key) const;
  std::int64_t get_int(std::string_view section, std::string_view key) const;
  std::vector<double> get_doubles(std::string_view section, std::string_view key) const;
  std::vector<std::int64_t> get_ints(std::string_view section, std::string_view key) const;
  std::vector<std::string> get_strings(std::string_view section, std::string_view key) const;

  std::string get_string_or(std::string_view section, std::string_view key,
                            std::string fallback) const;
  double get_double_or(std::string_view section, std::string_view key, double fallback) const;

private:
  const std::string &raw(std::string_view section, std::string_view key) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>, std::less<>> sections_;
};

struct ModelSpec {
  /// Power-law family when set; otherwise explicit mu/q arrays.
  std::optional<PowerLawFamily> family;
  std::vector<double> mu;
  std::vector<double> q;
  int k_max = 20;
  double sigma = 1.0;
  double horizon = 1.0;

  SpectralModel build() const;
};

struct InitialSpec {
  enum class Kind { AnalyticHeat, Explicit };
  Kind kind = Kind::AnalyticHeat;
  std::vector<double> values;
  /// Replaces analytic coefficients that fall below it (the even heat modes).
  double floor = 1e-3;

  std::vector<double> materialize(int n_modes) const;
};

enum class ParameterSet { SetI_alpha0, SetI_alpha0999, SetII };

/// "I-a0" | "I-a0999" | "II".
ParameterSet parse_parameter_set(std::string_view text);
std::string_view to_string(ParameterSet set);

struct ExperimentConfig {
  std::string name;
  ModelSpec model;
  double theta_true = 0.3;
  InitialSpec initial;
  double dt = 5e-5;
  std::vector<int> n_list;
  std::vector<std::string> priors;
  std::vector<std::string> losses;
  MleRoute route = MleRoute::Endpoints;
  std::vector<int> posterior_n;
  double posterior_theta_min = 0.0;
  double posterior_theta_max = 1.0;
  int posterior_points = 401;
  std::uint64_t master_seed = 1;
  int replicates = 1;
  std::string output_dir = "out";
  /// 0 = one worker per hardware thread. Never affects results.
  int workers = 0;

  /// Throws ConfigError on violated invariants (n_list order, k_max, ...).
  void validate() const;
  int max_modes() const;
};

ExperimentConfig experiment_config_from(const ConfigFile &file);
ExperimentConfig load_experiment_config(const std::filesystem::path &file);
/// Serialized form accepted by experiment_config_from.
std::string to_config_text(const ExperimentConfig &config);

/// Built-in configs, identical to the files shipped under configs/.
std::string builtin_config_text(ParameterSet set);
ExperimentConfig builtin_config(ParameterSet set);

} // namespace spde_bayes
