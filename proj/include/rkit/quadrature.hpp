#pragma once

#include "rkit/matrix_core.hpp"

namespace rkit {

// Gauss rule for the weight x^alpha e^{-x} on (0, inf).
// weights may underflow to zero at the far nodes; log_weights do not.
struct QuadratureRule {
  double alpha = 0.0;
  Vector nodes;
  Vector weights;
  Vector log_weights;

  Index size() const noexcept { return nodes.size(); }
};

QuadratureRule gauss_laguerre(double alpha, int npts);

// U(k, i) = sqrt(w_i) * x_i^power * p_k(x_i) for k < count, where p_k are the
// Laguerre polynomials orthonormal for the weight x^beta e^{-x}. Entries are
// computed with running rescaling, so they stay finite for large k and x.
// For beta == rule.alpha and power == 0, U U^T = I whenever count <= rule.size().
Matrix weighted_laguerre_table(const QuadratureRule& rule, double beta, Index count, double power = 0.0);

}  // namespace rkit
