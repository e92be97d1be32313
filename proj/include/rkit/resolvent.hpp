#pragma once

#include <optional>
#include <vector>

#include "rkit/matrix_core.hpp"

namespace rkit {

// Matrix elements G_{n,m}(z) = [(H - z Omega)^{-1}]_{n,m} of the resolvent in a
// finite basis. With omega absent the basis is orthonormal (Omega = I).
struct ResolventInput {
  SymMatrix h;
  std::optional<SymMatrix> omega;
  Complex z;
};

struct ResolventOptions {
  // z closer than pole_tolerance * max(1, |eps|) to an eigenvalue is "at spectrum".
  double pole_tolerance = 1e-12;
  // Eigenvalues closer than degeneracy * (spectral range) are treated as equal.
  double degeneracy = 1e-8;
};

// Product of ratios prod(num) / prod(den), paired smallest-with-smallest so the
// running value stays near unity even for a hundred factors.
Complex paired_ratio(std::vector<Complex> num, std::vector<Complex> den);
double paired_ratio(std::vector<double> num, std::vector<double> den);

// Spectral sum over the (generalized) eigenpairs:
//   G_{n,m}(z) = sum_i gamma_{n,i} gamma_{m,i} / (sigma_i (eps_i - z)).
// The eigen-decomposition is computed once; evaluation is O(N) per element.
class SpectralGreen {
 public:
  SpectralGreen(const SymMatrix& h, const std::optional<SymMatrix>& omega, ResolventOptions options = {});
  explicit SpectralGreen(SpectralPair pair, ResolventOptions options = {});

  Complex operator()(Complex z, Index n, Index m) const;

  // Same sum on the real axis; throws SpectrumError at a pole.
  double real(double e, Index n, Index m) const;

  // Pole nearest to z when it lies within tolerance, otherwise -1.
  Index pole_at(Complex z) const;

  const SpectralPair& spectrum() const noexcept { return pair_; }
  Index size() const noexcept { return pair_.size(); }

 private:
  SpectralPair pair_;
  ResolventOptions options_;
};

Complex green_spectral(const ResolventInput& input, Index n, Index m);

// (-1)^{n+m} det((H - z Omega)^{(n,m)}) / det(H - z Omega).
Complex green_cofactor(const ResolventInput& input, Index n, Index m, ResolventOptions options = {});

// Eigenvalue-product form. Truncated eigenvalues are computed on construction
// and reused for every z:
//   G_{n,m}(z) = (-1)^{n+m} |Omega^{(n,m)}|/|Omega| prod_i (eps_i^{(n,m)} - z) / prod_j (eps_j - z)
// For n != m the truncated eigenvalues may be complex.
class EigenProductGreen {
 public:
  // General (non-orthogonal) form. Throws InvalidConfiguration if Omega^{(n,m)} is singular.
  EigenProductGreen(const SymMatrix& h, const SymMatrix& omega, Index n, Index m, ResolventOptions options = {});

  // Orthonormal diagonal element G_{n,n}.
  static EigenProductGreen orthonormal_diagonal(const SymMatrix& h, Index n, ResolventOptions options = {});

  Complex operator()(Complex z) const;

  const Vector& eigenvalues() const noexcept { return eps_; }
  const std::vector<Complex>& truncated_eigenvalues() const noexcept { return truncated_; }
  double prefactor() const noexcept { return prefactor_; }

 private:
  EigenProductGreen() = default;

  Vector eps_;
  std::vector<Complex> truncated_;
  double prefactor_ = 1.0;
  ResolventOptions options_;
};

Complex green_eigprod_general(const ResolventInput& input, Index n, Index m);
Complex green_diag_orthonormal(const SymMatrix& h, Complex z, Index n);

// G_{n,m}(z) = sum_j coeffs_j / (poles_j - z), orthonormal basis.
struct PartialFractions {
  Vector poles;
  Vector coeffs;
  Index n = 0;
  Index m = 0;

  Complex evaluate(Complex z) const;
};

// Residues from determinants of H^{(n,m)} - eps_j I^{(n,m)} over eigenvalue gaps.
// Throws DegenerateSpectrum when two eigenvalues are closer than the threshold.
PartialFractions green_partial_fractions(const SymMatrix& h, Index n, Index m, ResolventOptions options = {});

// Eigenvector components from eigenvalues alone.
//   eigvec_sq_from_eigs:      gamma_{n,k}^2 from eigenvalues of H and of H^{(n,n)}
//   eigvec_prod_from_eigs:    gamma_{n,k} gamma_{m,k} via det(H^{(n,m)} - eps_k I^{(n,m)})
//   eigvec_from_eigs_general: gamma_{n,k} gamma_{m,k} for H v = eps Omega v, sigma_k = 1
//   eigvec_sq_from_overlap_eigs: n = m generalized case through the eigenvalues
//     tau of Omega and tau^{(n,n)} of Omega^{(n,n)}
double eigvec_sq_from_eigs(const SymMatrix& h, Index n, Index k, ResolventOptions options = {});
double eigvec_prod_from_eigs(const SymMatrix& h, Index n, Index m, Index k, ResolventOptions options = {});
double eigvec_from_eigs_general(const SymMatrix& h, const SymMatrix& omega, Index n, Index m, Index k,
                                ResolventOptions options = {});
double eigvec_sq_from_overlap_eigs(const SymMatrix& h, const SymMatrix& omega, Index n, Index k,
                                   ResolventOptions options = {});

// Brute-force (H - z Omega)^{-1} by a pivoted solve. Test oracle.
CMatrix inverse_oracle(const ResolventInput& input);

}  // namespace rkit
