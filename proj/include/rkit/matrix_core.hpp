#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace rkit {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Rectangular real matrix; H^(n,m), Omega^(n,m) and friends are not symmetric.
using GeneralMatrix = Matrix;

// Real symmetric matrix. Symmetry is checked exactly on construction.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix entries);

  static SymMatrix identity(Index n);
  static SymMatrix diagonal(const Vector& diag);

  Index size() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  bool is_identity() const;

 private:
  Matrix m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);

// Result of a (generalized) symmetric eigenproblem A v = eps B v.
//   gamma: columns are eigenvectors, eps ascending
//   sigma_i = (G^T B G)_ii, eta_i = (G^T A G)_ii, eps_i = eta_i / sigma_i
struct SpectralPair {
  Vector eps;
  Matrix gamma;
  Vector sigma;
  Vector eta;

  Index size() const noexcept { return eps.size(); }
};

// Multiplies column i of gamma by c; sigma_i and eta_i pick up c^2.
void rescale_column(SpectralPair& pair, Index i, double c);

struct Tolerances {
  double relative = 1e-10;
};

SpectralPair sym_eig(const SymMatrix& a);

// Throws NumericalError(NotSpd) if b has no Cholesky factor.
// Columns are scaled so that sigma_i = 1.
SpectralPair gen_sym_eig(const SymMatrix& a, const SymMatrix& b);

bool is_spd(const SymMatrix& a);

// Entry (i, j) of the result is a(i + [i >= n], j + [j >= m]).
GeneralMatrix delete_row_col(const GeneralMatrix& a, Index n, Index m);
CMatrix delete_row_col(const CMatrix& a, Index n, Index m);

double det(const GeneralMatrix& a);

// det = phase * exp(log_abs); singular matrices report singular = true.
struct LogDet {
  Complex phase{1.0, 0.0};
  double log_abs = 0.0;
  bool singular = false;
  // min |pivot| / max |pivot| of the full-pivot LU; a cheap conditioning proxy.
  double min_pivot_ratio = 1.0;

  Complex value() const;
};

LogDet log_det(const GeneralMatrix& a);
LogDet log_det(const CMatrix& a);

// Complex eigenvalues of a real square matrix, ascending by real part, ties
// broken by imaginary part.
std::vector<Complex> eig_general(const GeneralMatrix& a);

// Largest |off-diagonal| of gamma^T a gamma relative to the largest |entry| of a.
double max_offdiag_ratio(const Matrix& gamma, const Matrix& a);

}  // namespace rkit
