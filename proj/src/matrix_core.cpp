#include "rkit/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

constexpr const char* kModule = "matrix-core/";

std::string op(const char* name) { return std::string(kModule) + name; }

// First component with magnitude above round-off of the column norm is made positive.
void fix_column_signs(Matrix& gamma) {
  for (Index j = 0; j < gamma.cols(); ++j) {
    const double scale = gamma.col(j).cwiseAbs().maxCoeff();
    for (Index i = 0; i < gamma.rows(); ++i) {
      if (std::abs(gamma(i, j)) > 1e-12 * scale) {
        if (gamma(i, j) < 0.0) gamma.col(j) *= -1.0;
        break;
      }
    }
  }
}

template <typename MatrixType>
MatrixType delete_row_col_impl(const MatrixType& a, Index n, Index m) {
  if (a.rows() < 2 || a.cols() < 2) {
    throw NumericalError(ErrorKind::EmptySubmatrix, op("delete_row_col"), "empty submatrix");
  }
  if (n < 0 || n >= a.rows() || m < 0 || m >= a.cols()) {
    throw NumericalError(ErrorKind::InvalidArgument, op("delete_row_col"), "index out of range");
  }
  MatrixType out(a.rows() - 1, a.cols() - 1);
  for (Index i = 0; i < out.rows(); ++i) {
    const Index si = i + (i >= n ? 1 : 0);
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = a(si, j + (j >= m ? 1 : 0));
    }
  }
  return out;
}

template <typename MatrixType>
LogDet log_det_impl(const MatrixType& a) {
  if (a.rows() != a.cols()) {
    throw NumericalError(ErrorKind::InvalidArgument, op("det"), "matrix is not square");
  }
  LogDet out;
  if (a.rows() == 0) return out;
  Eigen::FullPivLU<MatrixType> lu(a);
  lu.setThreshold(0.0);
  const auto& lu_mat = lu.matrixLU();
  const double largest = std::abs(lu_mat(0, 0));
  for (Index i = 0; i < lu_mat.rows(); ++i) {
    const auto u = lu_mat(i, i);
    const double mag = std::abs(u);
    out.min_pivot_ratio = std::min(out.min_pivot_ratio, largest > 0.0 ? mag / largest : 0.0);
    if (mag == 0.0) {
      out.singular = true;
      out.phase = 0.0;
      out.log_abs = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.phase *= Complex(u) / mag;
    out.log_abs += std::log(mag);
  }
  // Permutation parities.
  const double perm_sign =
      static_cast<double>(lu.permutationP().determinant() * lu.permutationQ().determinant());
  out.phase *= perm_sign;
  return out;
}

}  // namespace

SymMatrix::SymMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw std::invalid_argument("SymMatrix: matrix must be square with n >= 1");
  }
  for (Index i = 0; i < m_.rows(); ++i) {
    for (Index j = i + 1; j < m_.cols(); ++j) {
      if (m_(i, j) != m_(j, i)) {
        throw std::invalid_argument("SymMatrix: matrix is not symmetric");
      }
    }
  }
}

SymMatrix SymMatrix::identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(const Vector& diag) { return SymMatrix(diag.asDiagonal().toDenseMatrix()); }

bool SymMatrix::is_identity() const { return m_ == Matrix::Identity(size(), size()); }

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  Matrix sum = a.matrix() + b.matrix();
  // Floating-point addition is commutative, so the sum stays exactly symmetric.
  return SymMatrix(std::move(sum));
}

void rescale_column(SpectralPair& pair, Index i, double c) {
  pair.gamma.col(i) *= c;
  pair.sigma(i) *= c * c;
  pair.eta(i) *= c * c;
}

SpectralPair sym_eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError(ErrorKind::Convergence, op("sym_eig"), "eigensolver did not converge");
  }
  SpectralPair out;
  out.eps = solver.eigenvalues();
  out.gamma = solver.eigenvectors();
  fix_column_signs(out.gamma);
  out.sigma = Vector::Ones(a.size());
  out.eta = out.eps;
  return out;
}

bool is_spd(const SymMatrix& a) {
  Eigen::LLT<Matrix> llt(a.matrix());
  return llt.info() == Eigen::Success;
}

SpectralPair gen_sym_eig(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) {
    throw NumericalError(ErrorKind::InvalidArgument, op("gen_sym_eig"), "dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(b.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericalError(ErrorKind::NotSpd, op("gen_sym_eig"), "overlap not SPD");
  }
  // Solve L^-1 A L^-T, then gamma = L^-T V.
  const auto& lower = llt.matrixL();
  Matrix reduced = lower.solve(a.matrix());
  reduced = lower.solve(reduced.transpose()).transpose();
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(reduced);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(ErrorKind::Convergence, op("gen_sym_eig"), "eigensolver did not converge");
  }
  SpectralPair out;
  out.eps = solver.eigenvalues();
  out.gamma = llt.matrixU().solve(solver.eigenvectors());
  fix_column_signs(out.gamma);
  out.sigma = (out.gamma.transpose() * b.matrix() * out.gamma).diagonal();
  out.eta = (out.gamma.transpose() * a.matrix() * out.gamma).diagonal();
  return out;
}

GeneralMatrix delete_row_col(const GeneralMatrix& a, Index n, Index m) { return delete_row_col_impl(a, n, m); }

CMatrix delete_row_col(const CMatrix& a, Index n, Index m) { return delete_row_col_impl(a, n, m); }

Complex LogDet::value() const {
  if (singular) return 0.0;
  return phase * std::exp(log_abs);
}

LogDet log_det(const GeneralMatrix& a) { return log_det_impl(a); }

LogDet log_det(const CMatrix& a) { return log_det_impl(a); }

double det(const GeneralMatrix& a) {
  if (a.rows() != a.cols()) {
    throw NumericalError(ErrorKind::InvalidArgument, op("det"), "matrix is not square");
  }
  return log_det(a).value().real();
}

std::vector<Complex> eig_general(const GeneralMatrix& a) {
  if (a.rows() != a.cols()) {
    throw NumericalError(ErrorKind::InvalidArgument, op("eig_general"), "matrix is not square");
  }
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(ErrorKind::Convergence, op("eig_general"), "eigensolver did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
  std::sort(values.begin(), values.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return values;
}

double max_offdiag_ratio(const Matrix& gamma, const Matrix& a) {
  const Matrix d = gamma.transpose() * a * gamma;
  double worst = 0.0;
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(d(i, j)));
    }
  }
  const double scale = a.cwiseAbs().maxCoeff();
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace rkit
