#pragma once

#include <stdexcept>
#include <string>

namespace pulsefront {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bisection for u* could not bracket a sign change.
class RootNotBracketed : public Error {
public:
  using Error::Error;
};

/// A kernel table or specification is not a valid dispersal density.
class InvalidKernel : public Error {
public:
  using Error::Error;
};

/// Interval or grid arguments are inconsistent with the window.
class GridError : public Error {
public:
  using Error::Error;
};

/// Explicit stepping produced a non-finite or negative value.
class InstabilityError : public Error {
public:
  using Error::Error;
};

/// The simulation window would have to grow beyond its configured cap.
class WindowCapExceeded : public Error {
public:
  using Error::Error;
};

/// Principal eigenvalue could not be computed by either route.
class EigenSolveError : public Error {
public:
  using Error::Error;
};

/// No critical length exists for the given parameters.
class NoRoot : public Error {
public:
  using Error::Error;
};

/// Bisection bracket endpoints do not straddle the target.
class InvalidBracket : public Error {
public:
  using Error::Error;
};

/// A monotonicity assertion along a sweep axis failed.
class MonotonicityViolation : public Error {
public:
  using Error::Error;
};

/// A simulated probe could not be classified within its horizon.
class IndeterminateOutcome : public Error {
public:
  IndeterminateOutcome(const std::string& what, double probe)
      : Error(what), probe_(probe) {}
  double probe() const noexcept { return probe_; }

private:
  double probe_;
};

/// Malformed configuration text.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace pulsefront
