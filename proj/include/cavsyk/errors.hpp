#pragma once

#include <stdexcept>
#include <string>

namespace cavsyk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Grid too coarse or too small for the requested modes or speckle grains.
struct ResolutionError : Error {
  using Error::Error;
};

struct DegenerateInputError : Error {
  using Error::Error;
};

struct CapacityError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

// A crossing or window needed by an extraction rule was not found.
struct ExtractionError : Error {
  using Error::Error;
};

struct DiagnosticError : Error {
  DiagnosticError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

}  // namespace cavsyk
