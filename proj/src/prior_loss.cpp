#include "spde_bayes/prior_loss.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spde_bayes/csv.hpp"
#include "spde_bayes/errors.hpp"
#include "spde_bayes/special_functions.hpp"

namespace spde_bayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto *begin = text.data();
  const auto *end = text.data() + text.size();
  while (begin != end && *begin == ' ') {
    ++begin;
  }
  while (end != begin && *(end - 1) == ' ') {
    --end;
  }
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

void check_growth_exponent(const GrowthCertificate &g, std::string_view what) {
  if (!(g.r >= 0.0 && g.r < 2.0) || !(g.c1 > 0.0) || !(g.c2 >= 0.0)) {
    throw ConfigError(std::string(what) +
                      ": growth certificate needs c1 > 0, c2 >= 0 and r in [0, 2)");
  }
}

} // namespace

Prior Prior::uniform_positive() {
  Prior p;
  p.kind_ = Kind::UniformPositive;
  p.growth_class_ = GrowthClass::Qp;
  p.growth_ = {1.0, 0.0, 0.0};
  return p;
}

Prior Prior::truncated_normal(double mu0, double var0) {
  if (!std::isfinite(mu0) || !(var0 > 0.0) || !std::isfinite(var0)) {
    throw ConfigError("truncated normal prior needs finite mu0 and var0 > 0");
  }
  Prior p;
  p.kind_ = Kind::TruncatedNormal;
  p.growth_class_ = GrowthClass::Qp;
  p.mu0_ = mu0;
  p.var0_ = var0;
  const double sd = std::sqrt(var0);
  // ϱ(θ) = φ((θ − μ0)/σ0) / (σ0 Φ(μ0/σ0))
  p.log_norm_ = -std::log(sd) - kLogSqrt2Pi - log_normal_cdf(mu0 / sd);
  p.growth_ = {std::exp(p.log_norm_), 0.0, 0.0};
  return p;
}

Prior Prior::custom(std::function<double(double)> density, GrowthCertificate growth,
                    std::string name) {
  if (!density) {
    throw ConfigError("custom prior: density function is empty");
  }
  check_growth_exponent(growth, "custom prior");
  Prior p;
  p.kind_ = Kind::Custom;
  p.growth_class_ = growth.c2 > 0.0 ? GrowthClass::Qe2 : GrowthClass::Qp;
  p.growth_ = growth;
  p.custom_ = std::move(density);
  p.name_ = std::move(name);
  return p;
}

double Prior::log_density(double theta) const {
  if (!(theta > 0.0)) {
    return kNegInf;
  }
  switch (kind_) {
  case Kind::UniformPositive:
    return 0.0;
  case Kind::TruncatedNormal: {
    const double d = theta - mu0_;
    return log_norm_ - 0.5 * d * d / var0_;
  }
  case Kind::Custom: {
    const double v = custom_(theta);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NumericError("custom prior '" + name_ + "' is not positive and finite at theta = " +
                         format_double(theta));
    }
    return std::log(v);
  }
  }
  return kNegInf;
}

double Prior::density(double theta) const {
  const double lv = log_density(theta);
  return lv == kNegInf ? 0.0 : std::exp(lv);
}

std::string Prior::describe() const {
  switch (kind_) {
  case Kind::UniformPositive:
    return "uniform";
  case Kind::TruncatedNormal:
    return "tnormal:" + format_shortest(mu0_) + "," + format_shortest(var0_);
  case Kind::Custom:
    return name_;
  }
  return "unknown";
}

std::string Prior::label() const {
  switch (kind_) {
  case Kind::UniformPositive:
    return "uniform";
  case Kind::TruncatedNormal:
    return "tnormal";
  case Kind::Custom:
    return name_;
  }
  return "unknown";
}

Prior parse_prior(std::string_view text) {
  if (text == "uniform") {
    return Prior::uniform_positive();
  }
  constexpr std::string_view tn = "tnormal:";
  if (text.substr(0, tn.size()) == tn) {
    const auto args = text.substr(tn.size());
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError("tnormal prior expects 'tnormal:mu0,var0'");
    }
    return Prior::truncated_normal(parse_number(args.substr(0, comma), "mu0"),
                                   parse_number(args.substr(comma + 1), "var0"));
  }
  throw ConfigError("unknown prior '" + std::string(text) + "'");
}

LossFunction LossFunction::quadratic() {
  LossFunction l;
  l.kind_ = Kind::Quadratic;
  l.class_ = LossClass::Wp;
  l.exponent_ = 2.0;
  return l;
}

LossFunction LossFunction::power(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ConfigError("power loss needs a > 0");
  }
  LossFunction l;
  l.kind_ = Kind::Power;
  l.class_ = LossClass::Wp;
  l.exponent_ = a;
  return l;
}

LossFunction LossFunction::exp_power(double r) {
  if (!(r > 0.0 && r < 2.0)) {
    throw ConfigError("exp-power loss needs r in (0, 2)");
  }
  LossFunction l;
  l.kind_ = Kind::ExpPower;
  l.class_ = LossClass::We2;
  l.exponent_ = r;
  l.growth_ = {1.0, 1.0, r};
  return l;
}

LossFunction LossFunction::custom(std::function<double(double)> fn, GrowthCertificate growth,
                                  LossClass cls, std::string name) {
  if (!fn) {
    throw ConfigError("custom loss: function is empty");
  }
  check_growth_exponent(growth, "custom loss");
  LossFunction l;
  l.kind_ = Kind::Custom;
  l.class_ = cls;
  l.growth_ = growth;
  l.custom_ = std::move(fn);
  l.name_ = std::move(name);
  return l;
}

double LossFunction::operator()(double x) const {
  const double ax = std::abs(x);
  switch (kind_) {
  case Kind::Quadratic:
    return x * x;
  case Kind::Power:
    return std::pow(ax, exponent_);
  case Kind::ExpPower:
    return std::expm1(std::pow(ax, exponent_));
  case Kind::Custom:
    return custom_(x);
  }
  return 0.0;
}

double LossFunction::log_value(double x) const {
  const double ax = std::abs(x);
  if (ax == 0.0 && kind_ != Kind::Custom) {
    return kNegInf;
  }
  switch (kind_) {
  case Kind::Quadratic:
    return 2.0 * std::log(ax);
  case Kind::Power:
    return exponent_ * std::log(ax);
  case Kind::ExpPower: {
    const double y = std::pow(ax, exponent_);
    return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
  }
  case Kind::Custom: {
    const double v = custom_(x);
    return v > 0.0 ? std::log(v) : kNegInf;
  }
  }
  return kNegInf;
}

std::string LossFunction::describe() const {
  switch (kind_) {
  case Kind::Quadratic:
    return "quadratic";
  case Kind::Power:
    return "power:" + format_shortest(exponent_);
  case Kind::ExpPower:
    return "exp-power:" + format_shortest(exponent_);
  case Kind::Custom:
    return name_;
  }
  return "unknown";
}

LossFunction parse_loss(std::string_view text) {
  if (text == "quadratic") {
    return LossFunction::quadratic();
  }
  constexpr std::string_view pw = "power:";
  constexpr std::string_view ep = "exp-power:";
  if (text.substr(0, pw.size()) == pw) {
    return LossFunction::power(parse_number(text.substr(pw.size()), "power exponent"));
  }
  if (text.substr(0, ep.size()) == ep) {
    return LossFunction::exp_power(parse_number(text.substr(ep.size()), "exp-power exponent"));
  }
  throw ConfigError("unknown loss '" + std::string(text) + "'");
}

} // namespace spde_bayes
