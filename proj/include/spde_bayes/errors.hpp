#pragma once

#include <stdexcept>
#include <string>

namespace spde_bayes {

/// Invalid or inconsistent configuration (bad flags, malformed config file,
/// unsupported prior/loss combination). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or optimizer could not produce a trustworthy answer.
/// CLI exit code 3.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OptimizationError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Filesystem failure while writing results. CLI exit code 4.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An operation needed the oracle channel (true θ, Brownian endpoints) and
/// the path set does not carry it.
class CapabilityError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace spde_bayes
