#include "rkit/basis.hpp"

#include <cmath>
#include <sstream>

#include "rkit/errors.hpp"
#include "rkit/quadrature.hpp"

namespace rkit {

namespace {

std::string op(const char* name) { return std::string("basis-scattering/") + name; }

SymMatrix symmetrized(const Matrix& m) { return SymMatrix(0.5 * (m + m.transpose())); }

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Omega and H0 of the Laguerre basis psi_n = x^{l+1} e^{-x/2} p_n(x), x = lambda r,
// p_n orthonormal for x^{2l+1} e^{-x}.
Matrix laguerre_overlap(Index n_rows, int ell) {
  Matrix om = Matrix::Zero(n_rows, n_rows);
  for (Index n = 0; n < n_rows; ++n) {
    const double nd = static_cast<double>(n);
    om(n, n) = 2.0 * (nd + ell + 1.0);
    if (n + 1 < n_rows) {
      om(n, n + 1) = om(n + 1, n) = -std::sqrt((nd + 1.0) * (nd + 2.0 * ell + 2.0));
    }
  }
  return om;
}

Matrix laguerre_h0(const BasisSpec& b, double Z) {
  const Matrix om = laguerre_overlap(b.N, b.ell);
  Matrix h = -0.25 * om;
  for (Index n = 0; n < b.N; ++n) h(n, n) += static_cast<double>(n) + b.ell + 1.0;
  h *= 0.5 * b.lambda * b.lambda;
  h.diagonal().array() += Z * b.lambda;
  return h;
}

// V_{n,m} = sum_i table(n,i) table(m,i) f(x_i).
template <typename F>
Matrix weighted_gram(const Matrix& table, const Vector& nodes, F&& f) {
  Vector weights(nodes.size());
  for (Index i = 0; i < nodes.size(); ++i) weights(i) = f(nodes(i));
  return table * weights.asDiagonal() * table.transpose();
}

Matrix laguerre_potential(const SystemSpec& s, int npts) {
  const auto& b = s.basis;
  const double nu = 2.0 * b.ell + 1.0;
  const QuadratureRule rule = gauss_laguerre(nu, npts);
  const Matrix u = weighted_laguerre_table(rule, nu, b.N);
  return weighted_gram(u, rule.nodes, [&](double x) { return x * s.potential(x / b.lambda); });
}

Matrix oscillator_potential(const SystemSpec& s, int npts) {
  const auto& b = s.basis;
  const double alpha = b.ell + 0.5;
  const QuadratureRule rule = gauss_laguerre(alpha, npts);
  const Matrix u = weighted_laguerre_table(rule, alpha, b.N);
  return weighted_gram(u, rule.nodes, [&](double y) { return s.potential(std::sqrt(y) / b.lambda); });
}

double level(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

[[noreturn]] void quadrature_failure(const char* name, double residual, double tolerance) {
  std::ostringstream os;
  os.precision(17);
  os << "potential quadrature did not converge (residual " << residual << ", tolerance " << tolerance << ")";
  throw NumericalError(ErrorKind::QuadratureNonConvergence, op(name), os.str());
}

}  // namespace

const char* to_string(BasisFamily family) {
  return family == BasisFamily::Laguerre ? "laguerre" : "oscillator";
}

BasisFamily basis_family_from_string(const std::string& name) {
  if (name == "laguerre") return BasisFamily::Laguerre;
  if (name == "oscillator") return BasisFamily::Oscillator;
  throw ConfigError("unknown basis family '" + name + "' (expected laguerre or oscillator)");
}

void validate(const SystemSpec& s) {
  const auto& b = s.basis;
  if (!(b.lambda > 0.0) || !std::isfinite(b.lambda)) throw ConfigError("lambda must be a positive number");
  if (b.ell < 0) throw ConfigError("ell must be >= 0");
  if (b.N < 2) throw ConfigError("N must be >= 2");
  if (!std::isfinite(s.Z)) throw ConfigError("Z must be finite");
}

double MatrixSet::j(Index n, Index m, double E) const {
  if (basis.family != BasisFamily::Laguerre) {
    throw NumericalError(ErrorKind::InvalidConfiguration, op("J"), "J is tridiagonal only for the laguerre basis");
  }
  if (n > m) std::swap(n, m);
  const double l8 = basis.lambda * basis.lambda / 8.0;
  const double nd = static_cast<double>(n);
  if (n == m) return 2.0 * (nd + basis.ell + 1.0) * (l8 - E) + Z * basis.lambda;
  if (m == n + 1) return std::sqrt((nd + 1.0) * (nd + 2.0 * basis.ell + 2.0)) * (l8 + E);
  return 0.0;
}

Matrix laguerre_overlap_quadrature(const BasisSpec& b, int npts) {
  const double nu = 2.0 * b.ell + 1.0;
  const QuadratureRule rule = gauss_laguerre(nu, npts);
  const Matrix u = weighted_laguerre_table(rule, nu, b.N);
  return weighted_gram(u, rule.nodes, [](double x) { return x; });
}

Matrix laguerre_h0_quadrature(const BasisSpec& b, double Z, int npts) {
  // With g_n = x^{l+1} e^{-x/2} p_n: g_n' = x^l e^{-x/2} q_n,
  //   q_n = (n + l + 1 - x/2) p_n - sqrt(n (n + nu)) p_{n-1}.
  // <g_m'|g_n'> and l(l+1) <g_m|x^-2|g_n> both carry the weight x^{2l} e^{-x}.
  const double nu = 2.0 * b.ell + 1.0;
  const QuadratureRule rule = gauss_laguerre(2.0 * b.ell, npts);
  const Matrix p = weighted_laguerre_table(rule, nu, b.N);
  Matrix q(b.N, rule.size());
  for (Index n = 0; n < b.N; ++n) {
    const double nd = static_cast<double>(n);
    for (Index i = 0; i < rule.size(); ++i) {
      q(n, i) = (nd + b.ell + 1.0 - 0.5 * rule.nodes(i)) * p(n, i);
      if (n > 0) q(n, i) -= std::sqrt(nd * (nd + nu)) * p(n - 1, i);
    }
  }
  const double l2 = b.lambda * b.lambda;
  Matrix kinetic = 0.5 * l2 * (q * q.transpose() + b.ell * (b.ell + 1.0) * p * p.transpose());
  // Z/r term: lambda Z <g_m|x^-1|g_n> with weight x^{2l+1} e^{-x}.
  const QuadratureRule coul = gauss_laguerre(nu, npts);
  const Matrix pc = weighted_laguerre_table(coul, nu, b.N);
  return kinetic + Z * b.lambda * pc * pc.transpose();
}

MatrixSet laguerre_matrices(const SystemSpec& s, QuadratureOptions options) {
  validate(s);
  const auto& b = s.basis;
  if (b.family != BasisFamily::Laguerre) {
    throw NumericalError(ErrorKind::InvalidArgument, op("laguerre_matrices"), "basis family is not laguerre");
  }
  const Matrix om = laguerre_overlap(b.N, b.ell);
  const Matrix h0 = laguerre_h0(b, s.Z);

  const int exact_pts = static_cast<int>(b.N) + 2;
  const double om_dev = max_abs_diff(om, laguerre_overlap_quadrature(b, exact_pts));
  const double h_dev = max_abs_diff(h0, laguerre_h0_quadrature(b, s.Z, exact_pts));
  if (om_dev > options.analytic_tolerance * level(om) || h_dev > options.analytic_tolerance * level(h0)) {
    std::ostringstream os;
    os.precision(17);
    os << "analytic and quadrature matrix elements disagree (overlap " << om_dev << ", H0 " << h_dev << ")";
    throw NumericalError(ErrorKind::QuadratureNonConvergence, op("laguerre_matrices"), os.str());
  }

  Matrix v = Matrix::Zero(b.N, b.N);
  double residual = 0.0;
  if (!s.potential.is_zero()) {
    const int npts = options.factor * static_cast<int>(b.N);
    v = laguerre_potential(s, npts);
    const Matrix fine = laguerre_potential(s, 2 * npts);
    residual = max_abs_diff(v, fine) / level(fine);
    if (!(residual <= options.tolerance)) quadrature_failure("laguerre_matrices", residual, options.tolerance);
  }
  return MatrixSet{b, s.Z, symmetrized(h0), symmetrized(v), SymMatrix(om), residual};
}

MatrixSet oscillator_matrices(const SystemSpec& s, QuadratureOptions options) {
  validate(s);
  const auto& b = s.basis;
  if (b.family != BasisFamily::Oscillator) {
    throw NumericalError(ErrorKind::InvalidArgument, op("oscillator_matrices"), "basis family is not oscillator");
  }
  const double l2 = b.lambda * b.lambda;
  Matrix h0 = Matrix::Zero(b.N, b.N);
  for (Index n = 0; n < b.N; ++n) {
    const double nd = static_cast<double>(n);
    h0(n, n) = 0.5 * l2 * (2.0 * nd + b.ell + 1.5);
    if (n + 1 < b.N) h0(n, n + 1) = h0(n + 1, n) = 0.5 * l2 * std::sqrt((nd + 1.0) * (nd + b.ell + 1.5));
  }
  if (s.Z != 0.0) {
    // Z/r = Z lambda y^{-1/2}; the weight y^{l+1/2} e^{-y} y^{-1/2} is integrated exactly by the alpha = l rule.
    const QuadratureRule rule = gauss_laguerre(static_cast<double>(b.ell), static_cast<int>(b.N) + 1);
    const Matrix u = weighted_laguerre_table(rule, b.ell + 0.5, b.N);
    h0 += s.Z * b.lambda * u * u.transpose();
  }

  Matrix v = Matrix::Zero(b.N, b.N);
  double residual = 0.0;
  if (!s.potential.is_zero()) {
    const int npts = options.factor * static_cast<int>(b.N);
    v = oscillator_potential(s, npts);
    const Matrix fine = oscillator_potential(s, 2 * npts);
    residual = max_abs_diff(v, fine) / level(fine);
    if (!(residual <= options.tolerance)) quadrature_failure("oscillator_matrices", residual, options.tolerance);
  }
  return MatrixSet{b, s.Z, symmetrized(h0), symmetrized(v), SymMatrix::identity(b.N), residual};
}

MatrixSet build_matrices(const SystemSpec& s, QuadratureOptions options) {
  return s.basis.family == BasisFamily::Laguerre ? laguerre_matrices(s, options) : oscillator_matrices(s, options);
}

}  // namespace rkit
