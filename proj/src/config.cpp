#include "spde_bayes/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "spde_bayes/csv.hpp"
#include "spde_bayes/errors.hpp"
#include "spde_bayes/path_simulator.hpp"

namespace spde_bayes {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

std::vector<std::string> split_array(std::string_view raw, std::string_view where) {
  raw = trim(raw);
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
    throw ConfigError(std::string(where) + ": expected a bracketed array");
  }
  raw = raw.substr(1, raw.size() - 2);
  std::vector<std::string> items;
  if (trim(raw).empty()) {
    return items;
  }
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i < raw.size() && raw[i] == '"') {
      quoted = !quoted;
    }
    if (i == raw.size() || (raw[i] == ',' && !quoted)) {
      const auto item = trim(raw.substr(start, i - start));
      if (item.empty()) {
        throw ConfigError(std::string(where) + ": empty array element");
      }
      items.push_back(unquote(item));
      start = i + 1;
    }
  }
  if (quoted) {
    throw ConfigError(std::string(where) + ": unterminated string");
  }
  return items;
}

template <class T> T parse_scalar(std::string_view text, std::string_view where) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError(std::string(where) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::string where(std::string_view origin, std::string_view section, std::string_view key) {
  return std::string(origin) + " [" + std::string(section) + "] " + std::string(key);
}

} // namespace

ConfigFile ConfigFile::parse(std::string_view text, std::string_view origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    auto line = trim(strip_comment(text.substr(pos, end - pos)));
    ++line_no;
    pos = end + 1;
    if (line.empty()) {
      if (end == text.size()) {
        break;
      }
      continue;
    }
    const auto at = std::string(origin) + ":" + std::to_string(line_no);
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string_view::npos) {
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (current.empty()) {
        throw ConfigError(at + ": empty section name");
      }
      cfg.sections_[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(at + ": expected 'key = value'");
    }
    if (current.empty()) {
      throw ConfigError(at + ": key outside of any [section]");
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError(at + ": empty key");
    }
    auto &sec = cfg.sections_[current];
    if (sec.count(key)) {
      throw ConfigError(at + ": duplicate key '" + key + "'");
    }
    sec[key] = std::string(trim(line.substr(eq + 1)));
    if (end == text.size()) {
      break;
    }
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file " + file.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), file.string());
}

bool ConfigFile::has(std::string_view section, std::string_view key) const {
  const auto sec = sections_.find(section);
  return sec != sections_.end() && sec->second.find(std::string(key)) != sec->second.end();
}

const std::string &ConfigFile::raw(std::string_view section, std::string_view key) const {
  const auto sec = sections_.find(section);
  if (sec != sections_.end()) {
    const auto it = sec->second.find(std::string(key));
    if (it != sec->second.end()) {
      return it->second;
    }
  }
  throw ConfigError(where(origin_, section, key) + ": missing");
}

std::string ConfigFile::get_string(std::string_view section, std::string_view key) const {
  return unquote(raw(section, key));
}

double ConfigFile::get_double(std::string_view section, std::string_view key) const {
  return parse_scalar<double>(raw(section, key), where(origin_, section, key));
}

std::int64_t ConfigFile::get_int(std::string_view section, std::string_view key) const {
  return parse_scalar<std::int64_t>(raw(section, key), where(origin_, section, key));
}

std::vector<double> ConfigFile::get_doubles(std::string_view section, std::string_view key) const {
  const auto w = where(origin_, section, key);
  std::vector<double> out;
  for (const auto &item : split_array(raw(section, key), w)) {
    out.push_back(parse_scalar<double>(item, w));
  }
  return out;
}

std::vector<std::int64_t> ConfigFile::get_ints(std::string_view section,
                                               std::string_view key) const {
  const auto w = where(origin_, section, key);
  std::vector<std::int64_t> out;
  for (const auto &item : split_array(raw(section, key), w)) {
    out.push_back(parse_scalar<std::int64_t>(item, w));
  }
  return out;
}

std::vector<std::string> ConfigFile::get_strings(std::string_view section,
                                                 std::string_view key) const {
  return split_array(raw(section, key), where(origin_, section, key));
}

std::string ConfigFile::get_string_or(std::string_view section, std::string_view key,
                                      std::string fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigFile::get_double_or(std::string_view section, std::string_view key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

SpectralModel ModelSpec::build() const {
  if (family) {
    return SpectralModel::power_law(family->p, family->alpha, k_max, sigma, horizon);
  }
  return SpectralModel::from_arrays(mu, q, sigma, horizon);
}

std::vector<double> InitialSpec::materialize(int n_modes) const {
  if (kind == Kind::AnalyticHeat) {
    return heat_initial_modes(n_modes, floor);
  }
  if (static_cast<int>(values.size()) < n_modes) {
    throw ConfigError("initial condition: explicit u0 has fewer entries than modes needed");
  }
  return {values.begin(), values.begin() + n_modes};
}

ParameterSet parse_parameter_set(std::string_view text) {
  if (text == "I-a0") {
    return ParameterSet::SetI_alpha0;
  }
  if (text == "I-a0999") {
    return ParameterSet::SetI_alpha0999;
  }
  if (text == "II") {
    return ParameterSet::SetII;
  }
  throw ConfigError("unknown parameter set '" + std::string(text) + "' (I-a0, I-a0999, II)");
}

std::string_view to_string(ParameterSet set) {
  switch (set) {
  case ParameterSet::SetI_alpha0:
    return "I-a0";
  case ParameterSet::SetI_alpha0999:
    return "I-a0999";
  case ParameterSet::SetII:
    return "II";
  }
  return "unknown";
}

int ExperimentConfig::max_modes() const {
  int m = 0;
  for (int n : n_list) {
    m = std::max(m, n);
  }
  for (int n : posterior_n) {
    m = std::max(m, n);
  }
  return m;
}

void ExperimentConfig::validate() const {
  if (!(theta_true > 0.0)) {
    throw ConfigError("config: theta must be positive");
  }
  if (n_list.empty()) {
    throw ConfigError("config: n_list is empty");
  }
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw ConfigError("config: n_list must be nondecreasing");
  }
  if (n_list.front() < 1) {
    throw ConfigError("config: mode counts must be positive");
  }
  const int kmax = model.family ? model.k_max : static_cast<int>(model.mu.size());
  if (max_modes() > kmax) {
    throw ConfigError("config: requested mode count exceeds k_max");
  }
  for (int n : posterior_n) {
    if (n < 1) {
      throw ConfigError("config: posterior mode counts must be positive");
    }
  }
  if (replicates < 1) {
    throw ConfigError("config: replicates must be at least 1");
  }
  if (!(posterior_theta_max > posterior_theta_min) || posterior_points < 2) {
    throw ConfigError("config: bad posterior grid");
  }
  if (workers < 0) {
    throw ConfigError("config: workers must be non-negative");
  }
}

ExperimentConfig experiment_config_from(const ConfigFile &file) {
  ExperimentConfig c;
  c.name = file.get_string_or("experiment", "name", "custom");

  const auto family = file.get_string_or("model", "family", "power_law");
  c.model.sigma = file.get_double("model", "sigma");
  c.model.horizon = file.get_double("model", "T");
  if (family == "power_law") {
    c.model.family = PowerLawFamily{file.get_double_or("model", "p", 2.0),
                                    file.get_double("model", "alpha")};
    c.model.k_max = static_cast<int>(file.get_int("model", "k_max"));
  } else if (family == "explicit") {
    c.model.mu = file.get_doubles("model", "mu");
    c.model.q = file.get_doubles("model", "q");
    c.model.k_max = static_cast<int>(c.model.mu.size());
  } else {
    throw ConfigError("config: model family must be power_law or explicit");
  }

  c.theta_true = file.get_double("truth", "theta");

  const auto u0 = file.get_string_or("initial", "u0", "analytic-heat");
  if (u0 == "analytic-heat") {
    c.initial.kind = InitialSpec::Kind::AnalyticHeat;
  } else {
    c.initial.kind = InitialSpec::Kind::Explicit;
    c.initial.values = file.get_doubles("initial", "u0");
  }
  c.initial.floor = file.get_double_or("initial", "floor", 1e-3);

  c.dt = file.get_double("grid", "dt");

  for (auto n : file.get_ints("experiment", "n_list")) {
    c.n_list.push_back(static_cast<int>(n));
  }
  c.priors = file.get_strings("experiment", "priors");
  c.losses = file.get_strings("experiment", "losses");
  c.route = parse_mle_route(file.get_string_or("experiment", "route", "endpoints"));
  if (file.has("experiment", "posterior_n")) {
    for (auto n : file.get_ints("experiment", "posterior_n")) {
      c.posterior_n.push_back(static_cast<int>(n));
    }
  }
  if (file.has("experiment", "posterior_theta")) {
    const auto range = file.get_doubles("experiment", "posterior_theta");
    if (range.size() != 2) {
      throw ConfigError("config: posterior_theta must be [min, max]");
    }
    c.posterior_theta_min = range[0];
    c.posterior_theta_max = range[1];
  }
  c.posterior_points =
      static_cast<int>(file.has("experiment", "posterior_points")
                           ? file.get_int("experiment", "posterior_points")
                           : 401);

  c.master_seed = static_cast<std::uint64_t>(file.get_int("seeds", "master"));
  c.replicates = static_cast<int>(file.get_int("seeds", "replicates"));
  c.output_dir = file.get_string_or("output", "dir", "out");
  c.workers = static_cast<int>(file.has("output", "workers") ? file.get_int("output", "workers")
                                                             : 0);
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path &file) {
  return experiment_config_from(ConfigFile::load(file));
}

namespace {

template <class T> std::string join(const std::vector<T> &xs, bool quote = false) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) {
      out += ", ";
    }
    if constexpr (std::is_same_v<T, std::string>) {
      out += quote ? "\"" + xs[i] + "\"" : xs[i];
    } else if constexpr (std::is_same_v<T, double>) {
      out += format_shortest(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out + "]";
}

} // namespace

std::string to_config_text(const ExperimentConfig &c) {
  std::ostringstream o;
  o << "[experiment]\n";
  o << "name = \"" << c.name << "\"\n";
  o << "n_list = " << join(c.n_list) << "\n";
  o << "priors = " << join(c.priors, true) << "\n";
  o << "losses = " << join(c.losses, true) << "\n";
  o << "route = " << to_string(c.route) << "\n";
  if (!c.posterior_n.empty()) {
    o << "posterior_n = " << join(c.posterior_n) << "\n";
  }
  o << "posterior_theta = "
    << join(std::vector<double>{c.posterior_theta_min, c.posterior_theta_max}) << "\n";
  o << "posterior_points = " << c.posterior_points << "\n\n";
  o << "[model]\n";
  if (c.model.family) {
    o << "family = power_law\n";
    o << "p = " << format_shortest(c.model.family->p) << "\n";
    o << "alpha = " << format_shortest(c.model.family->alpha) << "\n";
    o << "k_max = " << c.model.k_max << "\n";
  } else {
    o << "family = explicit\n";
    o << "mu = " << join(c.model.mu) << "\n";
    o << "q = " << join(c.model.q) << "\n";
  }
  o << "sigma = " << format_shortest(c.model.sigma) << "\n";
  o << "T = " << format_shortest(c.model.horizon) << "\n\n";
  o << "[truth]\ntheta = " << format_shortest(c.theta_true) << "\n\n";
  o << "[initial]\n";
  if (c.initial.kind == InitialSpec::Kind::AnalyticHeat) {
    o << "u0 = analytic-heat\n";
  } else {
    o << "u0 = " << join(c.initial.values) << "\n";
  }
  o << "floor = " << format_shortest(c.initial.floor) << "\n\n";
  o << "[grid]\ndt = " << format_shortest(c.dt) << "\n\n";
  o << "[seeds]\nmaster = " << c.master_seed << "\nreplicates = " << c.replicates << "\n\n";
  o << "[output]\ndir = \"" << c.output_dir << "\"\n";
  if (c.workers != 0) {
    o << "workers = " << c.workers << "\n";
  }
  return o.str();
}

std::string builtin_config_text(ParameterSet set) {
  // Shared by both Parameter Sets; only the model block, θ₀ and losses differ.
  const std::string common_tail = R"(
[initial]
# The sine coefficients of pi^2/4 - (x - pi/2)^2 vanish for even k; those
# modes start at `floor` instead.
u0 = analytic-heat
floor = 1e-3

[grid]
dt = 5e-5
)";
  const std::string experiment = R"([experiment]
n_list = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20]
# tnormal:mu0,var0 -- the second parameter is the variance.
priors = ["uniform", "tnormal:1,0.1"]
route = endpoints
posterior_n = [2, 4, 8]
posterior_points = 401
)";
  switch (set) {
  case ParameterSet::SetI_alpha0:
    return "# Parameter Set I, alpha = 0 (condition E1)\n" + experiment +
           "name = \"I-a0\"\nlosses = [\"quadratic\"]\nposterior_theta = [0, 1]\n\n"
           "[model]\nfamily = power_law\np = 2\nalpha = 0\nk_max = 20\nsigma = 1\nT = 1\n\n"
           "[truth]\ntheta = 0.3\n" +
           common_tail +
           "\n[seeds]\nmaster = 20170101\nreplicates = 100\n\n[output]\ndir = \"set_I_a0\"\n";
  case ParameterSet::SetI_alpha0999:
    return "# Parameter Set I, alpha = 0.999 (condition E1)\n" + experiment +
           "name = \"I-a0999\"\nlosses = [\"quadratic\"]\nposterior_theta = [0, 1]\n\n"
           "[model]\nfamily = power_law\np = 2\nalpha = 0.999\nk_max = 20\nsigma = 1\nT = 1\n\n"
           "[truth]\ntheta = 0.3\n" +
           common_tail +
           "\n[seeds]\nmaster = 20170102\nreplicates = 100\n\n[output]\ndir = "
           "\"set_I_a0999\"\n";
  case ParameterSet::SetII:
    return "# Parameter Set II, alpha = 1 (condition E2)\n" + experiment +
           "name = \"II\"\nlosses = [\"exp-power:1.5\"]\nposterior_theta = [0, 1.5]\n\n"
           "[model]\nfamily = power_law\np = 2\nalpha = 1\nk_max = 20\nsigma = 1\nT = 1\n\n"
           "[truth]\ntheta = 0.505\n" +
           common_tail +
           "\n[seeds]\nmaster = 20170103\nreplicates = 100\n\n[output]\ndir = \"set_II\"\n";
  }
  throw ConfigError("unknown parameter set");
}

ExperimentConfig builtin_config(ParameterSet set) {
  return experiment_config_from(
      ConfigFile::parse(builtin_config_text(set), "builtin:" + std::string(to_string(set))));
}

} // namespace spde_bayes
