#include "rkit/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

std::string op(const char* name) { return std::string("resolvent/") + name; }

double parity(Index n, Index m) { return ((n + m) % 2 == 0) ? 1.0 : -1.0; }

void check_index(Index n, Index size, const char* name) {
  if (n < 0 || n >= size) {
    throw NumericalError(ErrorKind::InvalidArgument, op(name), "matrix index out of range");
  }
}

// Pivots of a full-pivot LU and the permutation sign: det = sign * prod(pivots).
struct LuFactors {
  std::vector<double> pivots;
  double sign = 1.0;
};

LuFactors lu_factors(const Matrix& a) {
  LuFactors out;
  if (a.rows() == 0) return out;
  Eigen::FullPivLU<Matrix> lu(a);
  const auto& lu_mat = lu.matrixLU();
  out.pivots.reserve(static_cast<std::size_t>(a.rows()));
  for (Index i = 0; i < a.rows(); ++i) out.pivots.push_back(lu_mat(i, i));
  out.sign = static_cast<double>(lu.permutationP().determinant() * lu.permutationQ().determinant());
  return out;
}

void check_distinct(const Vector& eps, double threshold, const char* name) {
  if (eps.size() < 2) return;
  const double range = eps(eps.size() - 1) - eps(0);
  for (Index i = 1; i < eps.size(); ++i) {
    if (eps(i) - eps(i - 1) <= threshold * range || range == 0.0) {
      throw NumericalError(ErrorKind::DegenerateSpectrum, op(name), "degenerate spectrum; use green_spectral");
    }
  }
}

void check_input(const ResolventInput& input, const char* name) {
  if (input.omega && input.omega->size() != input.h.size()) {
    throw NumericalError(ErrorKind::InvalidArgument, op(name), "H and Omega dimensions differ");
  }
}

Matrix overlap_or_identity(const ResolventInput& input) {
  return input.omega ? input.omega->matrix() : Matrix::Identity(input.h.size(), input.h.size());
}

void check_pole(const Vector& eps, Complex z, double tolerance, const char* name) {
  for (Index i = 0; i < eps.size(); ++i) {
    if (std::abs(z - eps(i)) <= tolerance * std::max(1.0, std::abs(eps(i)))) {
      throw SpectrumError(op(name), eps(i));
    }
  }
}

// Gaps eps_j - eps_k for j != k.
std::vector<double> gaps_to(const Vector& eps, Index k) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(eps.size()));
  for (Index j = 0; j < eps.size(); ++j) {
    if (j != k) out.push_back(eps(j) - eps(k));
  }
  return out;
}

// (-1)^{n+m} det((H - shift * B)^{(n,m)}) / prod_{j != k}(eps_j - eps_k) [/ det(B)].
double cofactor_over_gaps(const Matrix& h, const Matrix& b, const Vector& eps, Index n, Index m, Index k,
                          const LuFactors* overlap) {
  std::vector<double> den = gaps_to(eps, k);
  std::vector<double> num;
  double sign = parity(n, m);
  if (h.rows() > 1) {
    const LuFactors minor = lu_factors(delete_row_col(Matrix(h - eps(k) * b), n, m));
    num = minor.pivots;
    sign *= minor.sign;
  }
  if (overlap != nullptr) {
    den.insert(den.end(), overlap->pivots.begin(), overlap->pivots.end());
    sign *= overlap->sign;
  }
  return sign * paired_ratio(std::move(num), std::move(den));
}

}  // namespace

template <typename T>
static T paired_ratio_impl(std::vector<T> num, std::vector<T> den) {
  auto by_magnitude = [](const T& a, const T& b) { return std::abs(a) < std::abs(b); };
  std::sort(num.begin(), num.end(), by_magnitude);
  std::sort(den.begin(), den.end(), by_magnitude);
  T result(1.0);
  const std::size_t count = std::max(num.size(), den.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (i < num.size() && i < den.size()) {
      result *= num[i] / den[i];
    } else if (i < num.size()) {
      result *= num[i];
    } else {
      result /= den[i];
    }
  }
  return result;
}

Complex paired_ratio(std::vector<Complex> num, std::vector<Complex> den) {
  return paired_ratio_impl(std::move(num), std::move(den));
}

double paired_ratio(std::vector<double> num, std::vector<double> den) {
  return paired_ratio_impl(std::move(num), std::move(den));
}

// --- spectral form --------------------------------------------------------

SpectralGreen::SpectralGreen(const SymMatrix& h, const std::optional<SymMatrix>& omega, ResolventOptions options)
    : pair_(omega ? gen_sym_eig(h, *omega) : sym_eig(h)), options_(options) {}

SpectralGreen::SpectralGreen(SpectralPair pair, ResolventOptions options) : pair_(std::move(pair)), options_(options) {}

Index SpectralGreen::pole_at(Complex z) const {
  for (Index i = 0; i < pair_.size(); ++i) {
    if (std::abs(z - pair_.eps(i)) <= options_.pole_tolerance * std::max(1.0, std::abs(pair_.eps(i)))) return i;
  }
  return -1;
}

Complex SpectralGreen::operator()(Complex z, Index n, Index m) const {
  check_index(n, size(), "green_spectral");
  check_index(m, size(), "green_spectral");
  if (const Index pole = pole_at(z); pole >= 0) throw SpectrumError(op("green_spectral"), pair_.eps(pole));
  Complex sum = 0.0;
  for (Index i = 0; i < pair_.size(); ++i) {
    sum += pair_.gamma(n, i) * pair_.gamma(m, i) / (pair_.sigma(i) * (pair_.eps(i) - z));
  }
  return sum;
}

double SpectralGreen::real(double e, Index n, Index m) const {
  check_index(n, size(), "green_spectral");
  check_index(m, size(), "green_spectral");
  if (const Index pole = pole_at(e); pole >= 0) throw SpectrumError(op("green_spectral"), pair_.eps(pole));
  double sum = 0.0;
  for (Index i = 0; i < pair_.size(); ++i) {
    sum += pair_.gamma(n, i) * pair_.gamma(m, i) / (pair_.sigma(i) * (pair_.eps(i) - e));
  }
  return sum;
}

Complex green_spectral(const ResolventInput& input, Index n, Index m) {
  check_input(input, "green_spectral");
  return SpectralGreen(input.h, input.omega)(input.z, n, m);
}

// --- cofactor form --------------------------------------------------------

Complex green_cofactor(const ResolventInput& input, Index n, Index m, ResolventOptions options) {
  check_input(input, "green_cofactor");
  const Index size = input.h.size();
  check_index(n, size, "green_cofactor");
  check_index(m, size, "green_cofactor");
  const CMatrix c = input.h.matrix().cast<Complex>() - input.z * overlap_or_identity(input).cast<Complex>();
  const LogDet full = log_det(c);
  if (full.singular || full.min_pivot_ratio < options.pole_tolerance) {
    throw SpectrumError(op("green_cofactor"), input.z.real());
  }
  if (size == 1) return 1.0 / c(0, 0);
  const LogDet minor = log_det(delete_row_col(c, n, m));
  if (minor.singular) return 0.0;
  return parity(n, m) * (minor.phase / full.phase) * std::exp(minor.log_abs - full.log_abs);
}

// --- eigenvalue-product form -----------------------------------------------

EigenProductGreen::EigenProductGreen(const SymMatrix& h, const SymMatrix& omega, Index n, Index m,
                                     ResolventOptions options)
    : options_(options) {
  const Index size = h.size();
  if (omega.size() != size) {
    throw NumericalError(ErrorKind::InvalidArgument, op("green_eigprod_general"), "H and Omega dimensions differ");
  }
  check_index(n, size, "green_eigprod_general");
  check_index(m, size, "green_eigprod_general");
  eps_ = gen_sym_eig(h, omega).eps;
  const LogDet full = log_det(omega.matrix());
  if (size == 1) {
    prefactor_ = 1.0 / omega(0, 0);
    return;
  }
  const Matrix omega_minor = delete_row_col(omega.matrix(), n, m);
  const LogDet minor = log_det(omega_minor);
  if (minor.singular || minor.min_pivot_ratio < 1e-12) {
    throw NumericalError(ErrorKind::InvalidConfiguration, op("green_eigprod_general"),
                         "overlap minor is singular; use green_cofactor");
  }
  prefactor_ = parity(n, m) * (minor.phase / full.phase).real() * std::exp(minor.log_abs - full.log_abs);
  const Matrix h_minor = delete_row_col(h.matrix(), n, m);
  if (n == m) {
    const Vector truncated = gen_sym_eig(SymMatrix(h_minor), SymMatrix(omega_minor)).eps;
    truncated_.assign(truncated.data(), truncated.data() + truncated.size());
  } else {
    const Matrix reduced = omega_minor.fullPivLu().solve(h_minor);
    truncated_ = eig_general(reduced);
  }
}

EigenProductGreen EigenProductGreen::orthonormal_diagonal(const SymMatrix& h, Index n, ResolventOptions options) {
  check_index(n, h.size(), "green_diag_orthonormal");
  EigenProductGreen out;
  out.options_ = options;
  out.eps_ = sym_eig(h).eps;
  if (h.size() > 1) {
    const Vector truncated = sym_eig(SymMatrix(delete_row_col(h.matrix(), n, n))).eps;
    out.truncated_.assign(truncated.data(), truncated.data() + truncated.size());
  }
  return out;
}

Complex EigenProductGreen::operator()(Complex z) const {
  check_pole(eps_, z, options_.pole_tolerance, "green_eigprod");
  std::vector<Complex> num;
  num.reserve(truncated_.size());
  for (const Complex& t : truncated_) num.push_back(t - z);
  std::vector<Complex> den;
  den.reserve(static_cast<std::size_t>(eps_.size()));
  for (Index j = 0; j < eps_.size(); ++j) den.push_back(eps_(j) - z);
  return prefactor_ * paired_ratio(std::move(num), std::move(den));
}

Complex green_eigprod_general(const ResolventInput& input, Index n, Index m) {
  check_input(input, "green_eigprod_general");
  const SymMatrix omega = input.omega ? *input.omega : SymMatrix::identity(input.h.size());
  return EigenProductGreen(input.h, omega, n, m)(input.z);
}

Complex green_diag_orthonormal(const SymMatrix& h, Complex z, Index n) {
  return EigenProductGreen::orthonormal_diagonal(h, n)(z);
}

// --- partial fractions ----------------------------------------------------

Complex PartialFractions::evaluate(Complex z) const {
  Complex sum = 0.0;
  for (Index j = 0; j < poles.size(); ++j) sum += coeffs(j) / (poles(j) - z);
  return sum;
}

PartialFractions green_partial_fractions(const SymMatrix& h, Index n, Index m, ResolventOptions options) {
  const Index size = h.size();
  check_index(n, size, "green_partial_fractions");
  check_index(m, size, "green_partial_fractions");
  PartialFractions out;
  out.n = n;
  out.m = m;
  out.poles = sym_eig(h).eps;
  check_distinct(out.poles, options.degeneracy, "green_partial_fractions");
  out.coeffs.resize(size);
  const Matrix identity = Matrix::Identity(size, size);
  for (Index j = 0; j < size; ++j) {
    out.coeffs(j) = size == 1 ? (n == m ? 1.0 : 0.0)
                              : cofactor_over_gaps(h.matrix(), identity, out.poles, n, m, j, nullptr);
  }
  return out;
}

// --- eigenvectors from eigenvalues -----------------------------------------

double eigvec_sq_from_eigs(const SymMatrix& h, Index n, Index k, ResolventOptions options) {
  const Index size = h.size();
  check_index(n, size, "eigvec_sq_from_eigs");
  check_index(k, size, "eigvec_sq_from_eigs");
  if (size == 1) return 1.0;
  const Vector eps = sym_eig(h).eps;
  check_distinct(eps, options.degeneracy, "eigvec_sq_from_eigs");
  const Vector truncated = sym_eig(SymMatrix(delete_row_col(h.matrix(), n, n))).eps;
  std::vector<double> num;
  for (Index i = 0; i < truncated.size(); ++i) num.push_back(truncated(i) - eps(k));
  return paired_ratio(std::move(num), gaps_to(eps, k));
}

double eigvec_prod_from_eigs(const SymMatrix& h, Index n, Index m, Index k, ResolventOptions options) {
  if (n == m) return eigvec_sq_from_eigs(h, n, k, options);
  const Index size = h.size();
  check_index(n, size, "eigvec_prod_from_eigs");
  check_index(m, size, "eigvec_prod_from_eigs");
  check_index(k, size, "eigvec_prod_from_eigs");
  const Vector eps = sym_eig(h).eps;
  check_distinct(eps, options.degeneracy, "eigvec_prod_from_eigs");
  return cofactor_over_gaps(h.matrix(), Matrix::Identity(size, size), eps, n, m, k, nullptr);
}

double eigvec_from_eigs_general(const SymMatrix& h, const SymMatrix& omega, Index n, Index m, Index k,
                                ResolventOptions options) {
  const Index size = h.size();
  check_index(n, size, "eigvec_from_eigs_general");
  check_index(m, size, "eigvec_from_eigs_general");
  check_index(k, size, "eigvec_from_eigs_general");
  const SpectralPair pair = gen_sym_eig(h, omega);
  check_distinct(pair.eps, options.degeneracy, "eigvec_from_eigs_general");
  const LuFactors overlap = lu_factors(omega.matrix());
  if (size == 1) return pair.sigma(0) / omega(0, 0);
  if (n != m) {
    const LogDet minor = log_det(Matrix(delete_row_col(omega.matrix(), n, m)));
    if (minor.singular || minor.min_pivot_ratio < 1e-12) {
      throw NumericalError(ErrorKind::InvalidConfiguration, op("eigvec_from_eigs_general"),
                           "overlap minor is singular; use the spectral decomposition");
    }
  }
  return pair.sigma(k) * cofactor_over_gaps(h.matrix(), omega.matrix(), pair.eps, n, m, k, &overlap);
}

double eigvec_sq_from_overlap_eigs(const SymMatrix& h, const SymMatrix& omega, Index n, Index k,
                                   ResolventOptions options) {
  const Index size = h.size();
  check_index(n, size, "eigvec_sq_from_overlap_eigs");
  check_index(k, size, "eigvec_sq_from_overlap_eigs");
  const SpectralPair pair = gen_sym_eig(h, omega);
  check_distinct(pair.eps, options.degeneracy, "eigvec_sq_from_overlap_eigs");
  const Vector tau = sym_eig(omega).eps;
  std::vector<double> den(tau.data(), tau.data() + tau.size());
  const std::vector<double> gaps = gaps_to(pair.eps, k);
  den.insert(den.end(), gaps.begin(), gaps.end());
  std::vector<double> num;
  if (size > 1) {
    const SymMatrix h_minor(delete_row_col(h.matrix(), n, n));
    const SymMatrix omega_minor(delete_row_col(omega.matrix(), n, n));
    const Vector tau_minor = sym_eig(omega_minor).eps;
    const Vector eps_minor = gen_sym_eig(h_minor, omega_minor).eps;
    for (Index i = 0; i < tau_minor.size(); ++i) num.push_back(tau_minor(i));
    for (Index i = 0; i < eps_minor.size(); ++i) num.push_back(eps_minor(i) - pair.eps(k));
  }
  return pair.sigma(k) * paired_ratio(std::move(num), std::move(den));
}

// --- oracle ------------------------------------------------------------------

CMatrix inverse_oracle(const ResolventInput& input) {
  check_input(input, "inverse_oracle");
  const CMatrix c = input.h.matrix().cast<Complex>() - input.z * overlap_or_identity(input).cast<Complex>();
  Eigen::FullPivLU<CMatrix> lu(c);
  const LogDet d = log_det(c);
  if (d.singular || d.min_pivot_ratio < 1e-14) {
    throw NumericalError(ErrorKind::Singular, op("inverse_oracle"), "H - z Omega is singular");
  }
  return lu.inverse();
}

}  // namespace rkit
