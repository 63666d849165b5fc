#pragma once

#include <stdexcept>
#include <string>

namespace qkr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (non-finite x, n = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or configuration (bad window, alpha out of range, parse errors).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operands that do not fit together, e.g. a state on a different basis window.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Closed-form routines called outside the commuting (q = 1) regime.
class UnsupportedRegimeError : public Error {
 public:
  using Error::Error;
};

/// Trace drift during evolution: the basis window was too small.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, long reachable_n)
      : Error(what), reachable_n_(reachable_n) {}
  long reachable_n() const noexcept { return reachable_n_; }

 private:
  long reachable_n_;
};

/// The basis window would exceed its configured hard cap.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, long reachable_n)
      : Error(what), reachable_n_(reachable_n) {}
  long reachable_n() const noexcept { return reachable_n_; }

 private:
  long reachable_n_;
};

/// Least-squares fit could not be performed (too few points, non-positive data).
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace qkr
