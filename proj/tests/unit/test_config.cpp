#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "spde_bayes/config.hpp"
#include "spde_bayes/errors.hpp"

using namespace spde_bayes;

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char *kMinimal = R"(
[model]   # power law
alpha = 0
k_max = 4
sigma = 1
T = 1
[truth]
theta = 0.3
[grid]
dt = 0.001
[experiment]
n_list = [1, 2, 4]
priors = ["uniform", "tnormal:1,0.1"]
losses = ["quadratic"]
[seeds]
master = 9
replicates = 2
)";

} // namespace

TEST(ConfigFile, ScalarsStringsAndArrays) {
  const auto f = ConfigFile::parse(R"(
# comment
[a]
x = 1.5   # trailing comment
name = "hash # inside"
list = [1, 2.5, -3]
words = ["p:1,2", "q"]
empty = []
)");
  EXPECT_EQ(f.get_double("a", "x"), 1.5);
  EXPECT_EQ(f.get_string("a", "name"), "hash # inside");
  EXPECT_EQ(f.get_doubles("a", "list"), (std::vector<double>{1, 2.5, -3}));
  EXPECT_EQ(f.get_strings("a", "words"), (std::vector<std::string>{"p:1,2", "q"}));
  EXPECT_TRUE(f.get_strings("a", "empty").empty());
  EXPECT_FALSE(f.has("a", "missing"));
  EXPECT_THROW(f.get_double("a", "missing"), ConfigError);
  EXPECT_THROW(f.get_double("a", "name"), ConfigError);
  EXPECT_THROW(f.get_int("a", "x"), ConfigError);
}

TEST(ConfigFile, SyntaxErrors) {
  EXPECT_THROW(ConfigFile::parse("x = 1"), ConfigError);
  EXPECT_THROW(ConfigFile::parse("[a]\nx = 1\nx = 2"), ConfigError);
  EXPECT_THROW(ConfigFile::parse("[a]\njust words"), ConfigError);
  EXPECT_THROW(ConfigFile::parse("[a]\nl = [1, , 2]").get_doubles("a", "l"), ConfigError);
  EXPECT_THROW(ConfigFile::load("/nonexistent/file.cfg"), ConfigError);
}

TEST(ExperimentConfig, ParsesAndDefaults) {
  const auto c = experiment_config_from(ConfigFile::parse(kMinimal));
  ASSERT_TRUE(c.model.family.has_value());
  EXPECT_EQ(c.model.family->p, 2.0);
  EXPECT_EQ(c.route, MleRoute::Endpoints);
  EXPECT_EQ(c.initial.kind, InitialSpec::Kind::AnalyticHeat);
  EXPECT_EQ(c.priors.size(), 2u);
  EXPECT_EQ(c.max_modes(), 4);
  EXPECT_EQ(c.model.build().k_max(), 4);
}

TEST(ExperimentConfig, Invariants) {
  auto text = std::string(kMinimal);
  auto with = [&](const std::string &from, const std::string &to) {
    auto t = text;
    t.replace(t.find(from), from.size(), to);
    return ConfigFile::parse(t);
  };
  EXPECT_THROW(experiment_config_from(with("[1, 2, 4]", "[2, 1, 4]")), ConfigError);
  EXPECT_THROW(experiment_config_from(with("[1, 2, 4]", "[1, 2, 5]")), ConfigError);
  EXPECT_THROW(experiment_config_from(with("replicates = 2", "replicates = 0")), ConfigError);
  EXPECT_THROW(experiment_config_from(with("theta = 0.3", "theta = -1")), ConfigError);
  EXPECT_THROW(experiment_config_from(with("alpha = 0", "family = wavelet\nalpha = 0")),
               ConfigError);
}

TEST(ExperimentConfig, ExplicitSpectrumAndInitialModes) {
  auto text = std::string(kMinimal);
  text.replace(text.find("alpha = 0\nk_max = 4"), 19,
               "family = explicit\nmu = [1, 2, 3, 4]\nq = [1, 1, 1, 1]");
  text += "[initial]\nu0 = [1, -1, 2, 0.5]\n";
  const auto c = experiment_config_from(ConfigFile::parse(text));
  EXPECT_FALSE(c.model.family.has_value());
  EXPECT_EQ(c.model.build().mu(3), 3.0);
  EXPECT_EQ(c.initial.materialize(4), (std::vector<double>{1, -1, 2, 0.5}));
  EXPECT_THROW(c.initial.materialize(5), ConfigError);
}

TEST(ExperimentConfig, RoundTripsThroughText) {
  for (auto set : {ParameterSet::SetI_alpha0, ParameterSet::SetI_alpha0999, ParameterSet::SetII}) {
    const auto c = builtin_config(set);
    const auto again = experiment_config_from(ConfigFile::parse(to_config_text(c)));
    EXPECT_EQ(to_config_text(again), to_config_text(c));
  }
}

TEST(ExperimentConfig, CheckedInFilesMatchBuiltins) {
  const std::string dir = SPDE_CONFIG_DIR;
  EXPECT_EQ(read_file(dir + "/set_I_alpha0.cfg"), builtin_config_text(ParameterSet::SetI_alpha0));
  EXPECT_EQ(read_file(dir + "/set_I_alpha0999.cfg"),
            builtin_config_text(ParameterSet::SetI_alpha0999));
  EXPECT_EQ(read_file(dir + "/set_II.cfg"), builtin_config_text(ParameterSet::SetII));
}

TEST(ExperimentConfig, BuiltinParameterSets) {
  const auto a0 = builtin_config(ParameterSet::SetI_alpha0);
  EXPECT_EQ(a0.theta_true, 0.3);
  EXPECT_EQ(a0.model.family->alpha, 0.0);
  EXPECT_EQ(a0.losses, std::vector<std::string>{"quadratic"});
  EXPECT_EQ(a0.dt, 5e-5);
  EXPECT_EQ(a0.n_list.back(), 20);
  EXPECT_EQ(builtin_config(ParameterSet::SetI_alpha0999).model.family->alpha, 0.999);
  const auto two = builtin_config(ParameterSet::SetII);
  EXPECT_EQ(two.theta_true, 0.505);
  EXPECT_EQ(two.model.family->alpha, 1.0);
  EXPECT_EQ(two.losses, std::vector<std::string>{"exp-power:1.5"});
  EXPECT_EQ(two.priors, (std::vector<std::string>{"uniform", "tnormal:1,0.1"}));
  EXPECT_EQ(parse_parameter_set("II"), ParameterSet::SetII);
  EXPECT_THROW(parse_parameter_set("III"), ConfigError);
}
