#pragma once

#include <stdexcept>
#include <string>

namespace hgbc {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid polygon, mesh or file content.
class GeometryError : public Error {
public:
  using Error::Error;
};

// An iterative solve hit its iteration cap, or a factorization failed.
class SolverError : public Error {
public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace hgbc
