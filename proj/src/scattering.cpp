#include "rkit/scattering.hpp"

#include <cmath>
#include <sstream>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

std::string op(const char* name) { return std::string("basis-scattering/") + name; }

[[noreturn]] void breakdown(Index n) {
  throw NumericalError(ErrorKind::RecursionBreakdown, op("cs_recursion"), "recursion breakdown at n = " + std::to_string(n));
}

Complex step(const MatrixSet& mats, Index n, double E, Complex r) {
  const double up = mats.j(n, n + 1, E);
  if (up == 0.0 || r == 0.0) breakdown(n);
  return -(mats.j(n, n, E) + mats.j(n, n - 1, E) / r) / up;
}

}  // namespace

KinematicParams KinematicParams::make(double E, double lambda, double Z) {
  if (!(E > 0.0) || !std::isfinite(E)) {
    throw NumericalError(ErrorKind::InvalidArgument, op("kinematics"), "energy must be positive");
  }
  const double l2 = lambda * lambda;
  KinematicParams k;
  k.E = E;
  k.theta = std::acos((8.0 * E - l2) / (8.0 * E + l2));
  k.t = Z / std::sqrt(2.0 * E);
  return k;
}

SeedValues seed_coefficients(const KinematicParams& kin, int ell, SeriesOptions options) {
  const double l = ell;
  const Complex it(0.0, kin.t);
  const Complex x = std::polar(1.0, -2.0 * kin.theta);
  const Complex f1 = hyp2f1(-l + it, 1.0, l + 2.0 + it, x, options);
  const Complex f2 = hyp2f1(-l + it, 2.0, l + 3.0 + it, x, options);
  const Complex d = (l + 1.0 - it) * f1;
  SeedValues out;
  out.T0 = std::polar(1.0, 2.0 * kin.theta) * std::conj(d) / d;
  out.R1plus = std::polar(1.0, -kin.theta) * std::sqrt(2.0 * l + 2.0) * f2 / ((l + 2.0 + it) * f1);
  return out;
}

CSCoefficients cs_recursion(const MatrixSet& mats, const KinematicParams& kin, Index up_to, SeriesOptions options) {
  if (up_to < 1) throw NumericalError(ErrorKind::InvalidArgument, op("cs_recursion"), "upTo must be >= 1");
  const SeedValues seeds = seed_coefficients(kin, mats.basis.ell, options);
  CSCoefficients c;
  c.T.assign(up_to + 1, Complex{});
  c.Rplus.assign(up_to + 1, Complex{});
  c.Rminus.assign(up_to + 1, Complex{});
  c.T[0] = seeds.T0;
  c.Rplus[1] = seeds.R1plus;
  c.Rminus[1] = std::conj(seeds.R1plus);
  for (Index n = 1; n <= up_to; ++n) {
    if (n > 1) {
      c.Rplus[n] = step(mats, n - 1, kin.E, c.Rplus[n - 1]);
      c.Rminus[n] = step(mats, n - 1, kin.E, c.Rminus[n - 1]);
    }
    if (c.Rplus[n] == 0.0) breakdown(n);
    c.T[n] = c.T[n - 1] * c.Rminus[n] / c.Rplus[n];
  }
  return c;
}

ScatteringSolver::ScatteringSolver(const SystemSpec& system, QuadratureOptions quad, SeriesOptions series)
    : system_(system),
      mats_(build_matrices(system, quad)),
      green_(mats_.hamiltonian(), std::optional<SymMatrix>(mats_.Omega)),
      series_(series) {
  if (system.basis.family != BasisFamily::Laguerre) {
    throw NumericalError(ErrorKind::InvalidConfiguration, op("s_matrix"),
                         "scattering needs the laguerre basis (tridiagonal H0 - E Omega)");
  }
}

double ScatteringSolver::green_last(double E) const {
  const Index last = mats_.basis.N - 1;
  return green_.real(E, last, last);
}

ScatteringPoint ScatteringSolver::evaluate(double E) const {
  const Index n = mats_.basis.N;
  const KinematicParams kin = KinematicParams::make(E, mats_.basis.lambda, mats_.Z);
  const CSCoefficients c = cs_recursion(mats_, kin, n, series_);
  ScatteringPoint p;
  p.E = E;
  const Complex t = c.T[n - 1];
  if (green_.pole_at(E) >= 0) {
    p.at_pole = true;
    p.S = t * c.Rminus[n] / c.Rplus[n];
  } else {
    const double gj = green_last(E) * mats_.j_boundary(E);
    p.S = t * (1.0 + gj * c.Rminus[n]) / (1.0 + gj * c.Rplus[n]);
  }
  p.delta = 0.5 * std::arg(p.S);
  p.one_minus_s = std::abs(1.0 - p.S);
  return p;
}

ScatteringPoint s_matrix(const SystemSpec& system, double E) { return ScatteringSolver(system).evaluate(E); }

}  // namespace rkit
