#pragma once

#include <string>

#include "rkit/matrix_core.hpp"
#include "rkit/potential.hpp"

namespace rkit {

enum class BasisFamily { Laguerre, Oscillator };

const char* to_string(BasisFamily family);
BasisFamily basis_family_from_string(const std::string& name);

struct BasisSpec {
  BasisFamily family = BasisFamily::Laguerre;
  double lambda = 1.0;
  int ell = 0;
  Index N = 20;
};

// H0 = -1/2 d^2/dr^2 + l(l+1)/(2 r^2) + Z/r; Z > 0 is repulsive.
struct SystemSpec {
  BasisSpec basis;
  double Z = 0.0;
  PotentialExpr potential;
};

struct QuadratureOptions {
  // Potential matrix uses factor * N nodes; a second pass at 2 * factor * N must agree.
  int factor = 4;
  double tolerance = 1e-6;
  // Analytic H0/Omega entries must match their quadrature values to this relative level.
  double analytic_tolerance = 1e-10;
};

struct MatrixSet {
  BasisSpec basis;
  double Z = 0.0;
  SymMatrix H0;
  SymMatrix V;
  SymMatrix Omega;
  // max |V(factor N) - V(2 factor N)| relative to max(1, max |V|).
  double quadrature_residual = 0.0;

  SymMatrix hamiltonian() const { return H0 + V; }

  // J_{n,m}(E) = (H0 - E Omega)_{n,m} for the Laguerre basis, valid for any
  // n, m >= 0 including the row past the truncation.
  double j(Index n, Index m, double E) const;
  double j_boundary(double E) const { return j(basis.N - 1, basis.N, E); }
};

void validate(const SystemSpec& system);

MatrixSet laguerre_matrices(const SystemSpec& system, QuadratureOptions options = {});
MatrixSet oscillator_matrices(const SystemSpec& system, QuadratureOptions options = {});
MatrixSet build_matrices(const SystemSpec& system, QuadratureOptions options = {});

// Quadrature values of <psi_n|psi_m> and <psi_n|H0|psi_m> for the Laguerre
// basis, the latter through first derivatives. Used as oracles.
Matrix laguerre_overlap_quadrature(const BasisSpec& basis, int npts);
Matrix laguerre_h0_quadrature(const BasisSpec& basis, double Z, int npts);

}  // namespace rkit
