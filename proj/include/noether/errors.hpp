#pragma once

#include <stdexcept>
#include <string>

namespace noether {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Lagrangian was evaluated (possibly inside a finite-difference stencil)
/// at a point rejected by the system's domain guard.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMassMatrix : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator shrank its step below the minimum.
class StepFailure : public Error {
 public:
  using Error::Error;
};

/// A sample was requested outside the padded interval of a trajectory.
class PadExceeded : public Error {
 public:
  using Error::Error;
};

/// Two quadrature rules disagree on a cumulative integral.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// L + k vanishes somewhere along the trajectory.
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

/// A single-motion constant was requested along a trajectory where the
/// family is not invariant.
class ResidualTooLarge : public Error {
 public:
  using Error::Error;
};

/// An operation expecting a tau-style triple got a theta-style one, or
/// vice versa.
class StyleMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownEntry : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace noether
