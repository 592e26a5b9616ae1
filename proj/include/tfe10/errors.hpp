#pragma once

#include <stdexcept>
#include <string>

namespace tfe10 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrand or residual produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Requested parameter lies outside the implemented set (Bessel order, dimension, ...).
class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

/// Newton Jacobian is numerically singular.
class DegenerateRootError : public Error {
 public:
  using Error::Error;
};

/// Two conics share infinitely many points.
class InfiniteIntersectionError : public Error {
 public:
  using Error::Error;
};

/// Resultant vanishes identically although the conics differ (common component).
class ResultantVanishesError : public Error {
 public:
  using Error::Error;
};

/// Sampled domain too short for the tail contribution of an integral.
class InsufficientDomainError : public Error {
 public:
  using Error::Error;
};

/// Not enough oscillation extrema to fit a decay envelope.
class InsufficientTailError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition on a spec object (shooting setup, exponents, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Quadrature over a log-singular integrand failed to settle under refinement.
class SingularityResolutionError : public Error {
 public:
  using Error::Error;
};

/// Exponent formula has a vanishing denominator.
class SingularExponentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfe10
