#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fourthorder {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Grid refinement stopped before successive values agreed.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::complex<double> previous,
                   std::complex<double> last)
      : Error(what), previous_(previous), last_(last) {}

  std::complex<double> previous() const noexcept { return previous_; }
  std::complex<double> last() const noexcept { return last_; }

 private:
  std::complex<double> previous_;
  std::complex<double> last_;
};

/// A quadrature that must be real by symmetry carried an imaginary residue.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// The quantity is undefined for the input (blocked arm, all-zero spectrum).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// The extremum of a scan sits on the boundary of the scanned range.
class BoundaryExtremumError : public Error {
 public:
  using Error::Error;
};

/// An analytic bound was violated by computed values.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace fourthorder
