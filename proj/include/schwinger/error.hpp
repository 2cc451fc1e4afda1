#pragma once

#include <stdexcept>
#include <string>

namespace schwinger {

/// Invalid input parameters (bad sizes, out-of-range values, mismatched dimensions).
class ParameterError : public std::invalid_argument {
  public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative method failed to reach the requested accuracy.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A gate sequence violated the hide/unhide protocol (e.g. a gate acting on a hidden ion).
class ProtocolError : public std::logic_error {
  public:
    explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

/// Least-squares extrapolation could not be performed.
class FitError : public std::runtime_error {
  public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Run configuration is malformed. `field` names the offending key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

} // namespace schwinger
