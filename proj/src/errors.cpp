#include "rkit/errors.hpp"

#include <sstream>

namespace rkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::NotSpd: return "overlap not SPD";
    case ErrorKind::Convergence: return "iteration did not converge";
    case ErrorKind::AtSpectrum: return "evaluation at spectrum";
    case ErrorKind::DegenerateSpectrum: return "degenerate spectrum";
    case ErrorKind::InvalidConfiguration: return "invalid configuration";
    case ErrorKind::EmptySubmatrix: return "empty submatrix";
    case ErrorKind::Singular: return "singular matrix";
    case ErrorKind::RecursionBreakdown: return "recursion breakdown";
    case ErrorKind::QuadratureNonConvergence: return "quadrature non-convergence";
    case ErrorKind::SeriesNonConvergence: return "series non-convergence";
    case ErrorKind::FitResidual: return "fit residual above threshold";
  }
  return "unknown";
}

NumericalError::NumericalError(ErrorKind kind, std::string operation, const std::string& message)
    : std::runtime_error(operation + ": " + message), kind_(kind), operation_(std::move(operation)) {}

namespace {
std::string spectrum_message(double eigenvalue) {
  std::ostringstream os;
  os.precision(17);
  os << "evaluation at spectrum (eigenvalue " << eigenvalue << ")";
  return os.str();
}
}  // namespace

SpectrumError::SpectrumError(std::string operation, double eigenvalue)
    : NumericalError(ErrorKind::AtSpectrum, std::move(operation), spectrum_message(eigenvalue)),
      eigenvalue_(eigenvalue) {}

}  // namespace rkit
