#include "rkit/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

// Orthonormal Laguerre recurrence for weight x^beta e^{-x}, evaluated with a
// running power-of-kRescale exponent. Visits (k, p_k, log_scale) for k < count.
template <typename Visit>
void orthonormal_sweep(double x, double beta, Index count, Visit&& visit) {
  double prev = 0.0;
  double cur = 1.0;
  double log_scale = -0.5 * std::lgamma(beta + 1.0);
  visit(Index{0}, cur, log_scale);
  for (Index k = 0; k + 1 < count; ++k) {
    const double kd = static_cast<double>(k);
    const double next =
        ((2.0 * kd + beta + 1.0 - x) * cur - std::sqrt(kd * (kd + beta)) * prev) /
        std::sqrt((kd + 1.0) * (kd + 1.0 + beta));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
    visit(k + 1, cur, log_scale);
  }
}

// p_n(x), p_{n-1}(x) up to a common positive factor.
std::pair<double, double> top_pair(double x, double alpha, Index n) {
  double pn = 0.0;
  double pm = 0.0;
  double last_scale = 0.0;
  orthonormal_sweep(x, alpha, n + 1, [&](Index k, double p, double s) {
    if (k == n - 1) {
      pm = p;
      last_scale = s;
    }
    if (k == n) {
      pn = p;
      if (s != last_scale) pm /= kRescale;
    }
  });
  return {pn, pm};
}

}  // namespace

QuadratureRule gauss_laguerre(double alpha, int npts) {
  if (npts < 1) {
    throw NumericalError(ErrorKind::InvalidArgument, "basis-scattering/gauss_quadrature", "npts must be >= 1");
  }
  if (!(alpha > -1.0)) {
    throw NumericalError(ErrorKind::InvalidArgument, "basis-scattering/gauss_quadrature", "alpha must be > -1");
  }
  const Index n = npts;
  Vector diag(n);
  Vector off(std::max<Index>(n - 1, 0));
  for (Index k = 0; k < n; ++k) {
    diag(k) = 2.0 * static_cast<double>(k) + alpha + 1.0;
    if (k + 1 < n) off(k) = std::sqrt((k + 1.0) * (k + 1.0 + alpha));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  rule.log_weights.resize(n);

  for (Index i = 0; i < n; ++i) {
    double x = rule.nodes(i);
    // Newton on p_n with x p_n' = n p_n - sqrt(n (n + alpha)) p_{n-1}.
    for (int it = 0; it < 3; ++it) {
      const auto [pn, pm] = top_pair(x, alpha, n);
      const double dn = static_cast<double>(n);
      const double deriv = dn * pn - std::sqrt(dn * (dn + alpha)) * pm;
      if (deriv == 0.0) break;
      const double step = x * pn / deriv;
      if (!std::isfinite(step) || std::abs(step) > 1e-6 * std::max(1.0, x)) break;
      x -= step;
      if (std::abs(step) <= 1e-16 * x) break;
    }
    rule.nodes(i) = x;

    // Christoffel: 1 / w_i = sum_{k<n} p_k(x_i)^2.
    double sum = 0.0;
    double sum_scale = 0.0;
    orthonormal_sweep(x, alpha, n, [&](Index, double p, double s) {
      if (2.0 * s > sum_scale) {
        sum *= std::exp(sum_scale - 2.0 * s);
        sum_scale = 2.0 * s;
      }
      sum += p * p * std::exp(2.0 * s - sum_scale);
    });
    rule.log_weights(i) = -(std::log(sum) + sum_scale);
    rule.weights(i) = std::exp(rule.log_weights(i));
  }
  return rule;
}

Matrix weighted_laguerre_table(const QuadratureRule& rule, double beta, Index count, double power) {
  Matrix table(count, rule.size());
  for (Index i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes(i);
    const double base = 0.5 * rule.log_weights(i) + power * std::log(x);
    orthonormal_sweep(x, beta, count, [&](Index k, double p, double s) {
      if (p == 0.0) {
        table(k, i) = 0.0;
        return;
      }
      const double mag = std::exp(std::log(std::abs(p)) + s + base);
      table(k, i) = p < 0.0 ? -mag : mag;
    });
  }
  return table;
}

}  // namespace rkit
