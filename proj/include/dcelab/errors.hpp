#pragma once

#include <stdexcept>
#include <string>

namespace dce {

/// Base class for every error raised by the numerical modules.  The CLI maps
/// these to exit code 3.
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the model is defined.
class DomainError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

/// The wall path is unusable for the chosen solver (e.g. |Rdot| >= 1).
class InvalidTrajectoryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Adaptive integration could not proceed (step size underflow).
class IntegrationError : public PhysicsError {
 public:
  IntegrationError(const std::string& what, double last_good_t)
      : PhysicsError(what), last_good_t_(last_good_t) {}
  double last_good_t() const noexcept { return last_good_t_; }

 private:
  double last_good_t_;
};

/// A root could not be bracketed or a spectral branch was lost.
class RootFindingError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

/// The Fock truncation is too small for the requested state.
class TruncationError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

/// Malformed or inconsistent scenario configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dce
