#pragma once

#include <stdexcept>
#include <string>

namespace rkit {

enum class ErrorKind {
  InvalidArgument,
  NotSpd,
  Convergence,
  AtSpectrum,
  DegenerateSpectrum,
  InvalidConfiguration,
  EmptySubmatrix,
  Singular,
  RecursionBreakdown,
  QuadratureNonConvergence,
  SeriesNonConvergence,
  FitResidual,
};

const char* to_string(ErrorKind kind);

// Every numerical failure names the operation that raised it, e.g.
// "resolvent/green_spectral".
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorKind kind, std::string operation, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorKind kind_;
  std::string operation_;
};

// Evaluation point coincides with an eigenvalue of the pencil.
class SpectrumError : public NumericalError {
 public:
  SpectrumError(std::string operation, double eigenvalue);
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

// Bad user input (config file, CLI flags, potential expression).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rkit
