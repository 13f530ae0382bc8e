#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, bad arguments or invalid domain objects.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Field file does not match the declared version or shape.
class ShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A point, sphere or ball falls outside the sampled box.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what,
                       std::optional<double> max_radius = std::nullopt)
      : Error(what), max_radius_(max_radius) {}

  /// Largest admissible radius for the offending center, when it applies.
  std::optional<double> max_radius() const { return max_radius_; }

 private:
  std::optional<double> max_radius_;
};

/// An iterative method ran out of iterations.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}

  const std::vector<double>& history() const { return history_; }
  double last_residual() const { return history_.empty() ? 0.0 : history_.back(); }

 private:
  std::vector<double> history_;
};

/// NaN or infinity appeared during an iteration.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be strictly positive vanished (H, a Rayleigh denominator).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Input does not have the expected qualitative structure.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// A precondition stated in terms of previously computed data was violated.
class MisuseError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

}  // namespace pslab
