#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace greenlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the caller's input was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A singular kernel was evaluated on coincident points.
class Singularity : public Error {
 public:
  Singularity(const std::string& what, std::size_t i, std::size_t j)
      : Error(what), first_(i), second_(j) {}
  explicit Singularity(const std::string& what) : Error(what) {}

  // Offending point indices; both are npos when the error came from a bare
  // kernel evaluation rather than a configuration.
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t first_ = npos;
  std::size_t second_ = npos;
};

/// An iterative or quadrature procedure did not reach its tolerance.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  explicit NumericalFailure(const std::string& what) : Error(what) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_ = 0.0;
};

}  // namespace greenlab
