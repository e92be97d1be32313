#include "rkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

std::string op(const char* name) { return std::string("analysis/") + name; }

struct Extremum {
  double x;
  double y;
};

// Vertex of the parabola through three points; falls back to the middle point.
Extremum refine(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double f01 = (y1 - y0) / (x1 - x0);
  const double f12 = (y2 - y1) / (x2 - x1);
  const double f012 = (f12 - f01) / (x2 - x0);
  if (!(f012 < 0.0)) return {x1, y1};
  double x = 0.5 * (x0 + x1) - f01 / (2.0 * f012);
  x = std::clamp(x, x0, x2);
  return {x, y0 + f01 * (x - x0) + f012 * (x - x0) * (x - x1)};
}

struct RawPeak {
  std::size_t index;
  Extremum top;
  double prominence;
  double width;
};

std::vector<RawPeak> local_maxima(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<RawPeak> out;
  const std::size_t n = y.size();
  if (n < 3) return out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    // Plateaus count once, at their left edge.
    const double h = y[i];
    double left_min = h;
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] > h) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = h;
    for (std::size_t k = i + 1; k < n; ++k) {
      if (y[k] > h) break;
      right_min = std::min(right_min, y[k]);
    }
    const double prom = h - std::max(left_min, right_min);
    const double ref = h - 0.5 * prom;
    double xl = x.front();
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] < ref) {
        xl = x[k] + (ref - y[k]) * (x[k + 1] - x[k]) / (y[k + 1] - y[k]);
        break;
      }
    }
    double xr = x.back();
    for (std::size_t k = i + 1; k < n; ++k) {
      if (y[k] < ref) {
        xr = x[k - 1] + (y[k - 1] - ref) * (x[k] - x[k - 1]) / (y[k - 1] - y[k]);
        break;
      }
    }
    out.push_back({i, refine(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]), prom, xr - xl});
  }
  return out;
}

double default_prominence(ResonanceCriterion c) { return c == ResonanceCriterion::PhaseDerivative ? 3.0 : 0.05; }

double nearest_peak(const std::vector<RawPeak>& peaks, double e) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : peaks) {
    if (std::isnan(best) || std::abs(p.top.x - e) < std::abs(best - e)) best = p.top.x;
  }
  return best;
}

double local_spacing(const Vector& poles, double e) {
  const Index n = poles.size();
  if (n < 2) return 1.0;
  Index j = 0;
  for (Index i = 1; i < n; ++i) {
    if (std::abs(poles(i) - e) < std::abs(poles(j) - e)) j = i;
  }
  if (j == 0) return poles(1) - poles(0);
  if (j == n - 1) return poles(n - 1) - poles(n - 2);
  return 0.5 * (poles(j + 1) - poles(j - 1));
}

}  // namespace

std::vector<double> linear_grid(double e_min, double e_max, long steps) {
  if (steps < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> g(static_cast<std::size_t>(steps));
  if (steps == 1) {
    g[0] = e_min;
    return g;
  }
  const double h = (e_max - e_min) / static_cast<double>(steps - 1);
  for (long i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = e_min + h * static_cast<double>(i);
  g.back() = e_max;
  return g;
}

const std::vector<double>& ScanTable::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c.values;
  }
  throw std::out_of_range("no column '" + name + "'");
}

bool ScanTable::has_column(const std::string& name) const {
  return std::any_of(columns.begin(), columns.end(), [&](const ScanColumn& c) { return c.name == name; });
}

void ScanTable::add_column(std::string name, std::string unit, std::vector<double> values) {
  columns.push_back({std::move(name), std::move(unit), std::move(values)});
}

void ScanTable::check() const {
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (!(energies[i] > energies[i - 1])) throw std::invalid_argument("energies must be strictly increasing");
  }
  for (const auto& c : columns) {
    if (c.values.size() != energies.size()) throw std::invalid_argument("column '" + c.name + "' has wrong length");
  }
}

void describe(ScanTable& table, const SystemSpec& s) {
  std::ostringstream lam;
  lam.precision(17);
  lam << s.basis.lambda;
  std::ostringstream z;
  z.precision(17);
  z << s.Z;
  table.metadata = {{"family", to_string(s.basis.family)},
                    {"lambda", lam.str()},
                    {"ell", std::to_string(s.basis.ell)},
                    {"N", std::to_string(s.basis.N)},
                    {"Z", z.str()},
                    {"potential", s.potential.to_string()}};
}

ScanTable scan_smatrix(const ScatteringSolver& solver, const std::vector<double>& grid, int threads) {
  if (grid.empty()) throw NumericalError(ErrorKind::InvalidArgument, op("scan_smatrix"), "empty grid");
  const auto points = smatrix_grid_parallel(solver, grid, threads);
  ScanTable t;
  t.energies = grid;
  std::vector<double> re(grid.size()), im(grid.size()), dev(grid.size()), delta(grid.size()), pole(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    re[i] = points[i].S.real();
    im[i] = points[i].S.imag();
    dev[i] = points[i].one_minus_s;
    delta[i] = points[i].delta;
    pole[i] = points[i].at_pole ? 1.0 : 0.0;
  }
  t.add_column("Re S", "", std::move(re));
  t.add_column("Im S", "", std::move(im));
  t.add_column("|1-S|", "", std::move(dev));
  t.add_column("delta", "rad", std::move(delta));
  t.add_column("at_pole", "", std::move(pole));
  describe(t, solver.system());
  t.check();
  return t;
}

ScanTable scan_smatrix(const SystemSpec& system, const std::vector<double>& grid, int threads) {
  return scan_smatrix(ScatteringSolver(system), grid, threads);
}

const char* to_string(ResonanceCriterion c) {
  return c == ResonanceCriterion::PhaseDerivative ? "phase-derivative" : "im-s";
}

ResonanceCriterion resonance_criterion_from_string(const std::string& name) {
  if (name == "phase-derivative") return ResonanceCriterion::PhaseDerivative;
  if (name == "im-s") return ResonanceCriterion::ImS;
  throw ConfigError("unknown resonance criterion '" + name + "' (expected phase-derivative or im-s)");
}

std::vector<double> unwrapped_phase(const ScanTable& table) {
  const auto& delta = table.column("delta");
  std::vector<double> out(delta.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (i > 0) {
      const double jump = delta[i] - delta[i - 1];
      offset -= std::numbers::pi * std::round(jump / std::numbers::pi);
    }
    out[i] = delta[i] + offset;
  }
  return out;
}

std::vector<double> phase_derivative(const ScanTable& table) {
  const auto phase = unwrapped_phase(table);
  const auto& x = table.energies;
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (phase[1] - phase[0]) / (x[1] - x[0]);
  d[n - 1] = (phase[n - 1] - phase[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    d[i] = -h1 / (h0 * (h0 + h1)) * phase[i - 1] + (h1 - h0) / (h0 * h1) * phase[i] +
           h0 / (h1 * (h0 + h1)) * phase[i + 1];
  }
  return d;
}

ResonanceReport find_resonances(const ScanTable& table, const ResonanceOptions& options) {
  ResonanceReport report;
  if (table.rows() < 3) return report;
  const double threshold =
      std::isnan(options.min_prominence) ? default_prominence(options.criterion) : options.min_prominence;
  const auto& im = table.column("Im S");
  const auto im_peaks = local_maxima(table.energies, im);
  const auto signal = options.criterion == ResonanceCriterion::PhaseDerivative ? phase_derivative(table) : im;
  const auto peaks = options.criterion == ResonanceCriterion::PhaseDerivative
                         ? local_maxima(table.energies, signal)
                         : im_peaks;
  for (const auto& p : peaks) {
    if (!(p.prominence >= threshold) || !(p.top.y > 0.0)) continue;
    ResonancePeak r;
    r.energy = p.top.x;
    r.height = p.top.y;
    r.prominence = p.prominence;
    r.width = p.width;
    r.im_s_peak = nearest_peak(im_peaks, p.top.x);
    report.peaks.push_back(r);
  }
  return report;
}

Complex one_pole_estimate(const ScatteringSolver& solver, Index j) {
  const auto& sp = solver.green().spectrum();
  const Index last = sp.size() - 1;
  const double ej = sp.eps(j);
  const double r = sp.gamma(last, j) * sp.gamma(last, j) / sp.sigma(j);
  double b = 0.0;
  for (Index i = 0; i < sp.size(); ++i) {
    if (i != j) b += sp.gamma(last, i) * sp.gamma(last, i) / (sp.sigma(i) * (sp.eps(i) - ej));
  }
  const auto& mats = solver.matrices();
  const KinematicParams kin = KinematicParams::make(ej, mats.basis.lambda, mats.Z);
  const CSCoefficients c = cs_recursion(mats, kin, mats.basis.N);
  const Complex jr = mats.j_boundary(ej) * c.Rplus[mats.basis.N];
  return ej + r * jr / (1.0 + b * jr);
}

ResonanceScan locate_resonances(const ScatteringSolver& solver, const std::vector<double>& grid,
                                const ResonanceOptions& options, int threads) {
  ResonanceScan out;
  out.table = scan_smatrix(solver, grid, threads);
  out.report = find_resonances(out.table, options);
  if (!options.zoom || grid.size() < 2) return out;

  const double lo = grid.front();
  const double hi = grid.back();
  const double step = (hi - lo) / static_cast<double>(grid.size() - 1);
  const Vector& poles = solver.poles();
  for (Index j = 0; j < poles.size(); ++j) {
    if (!(poles(j) > 0.0) || poles(j) < lo || poles(j) > hi) continue;
    const Complex est = one_pole_estimate(solver, j);
    const double gamma = -2.0 * est.imag();
    if (!(gamma > 0.0) || !(gamma < options.sharp_factor * step)) continue;
    const double half = options.zoom_half_width * gamma;
    const double z_lo = std::max(lo, est.real() - half);
    const double z_hi = std::min(hi, est.real() + half);
    if (!(z_lo > 0.0) || !(z_lo < est.real() && est.real() < z_hi)) continue;
    ScanTable zoom = scan_smatrix(solver, linear_grid(z_lo, z_hi, options.zoom_points), threads);
    ResonanceOptions zopt = options;
    zopt.zoom = false;
    const ResonanceReport zr = find_resonances(zoom, zopt);
    out.zooms.push_back(std::move(zoom));
    if (zr.peaks.empty()) continue;
    ResonancePeak best = *std::max_element(zr.peaks.begin(), zr.peaks.end(),
                                           [](const ResonancePeak& a, const ResonancePeak& b) {
                                             return a.prominence < b.prominence;
                                           });
    // A pole of width gamma gives d(delta)/dE = 2 / gamma at the peak.
    if (options.criterion == ResonanceCriterion::PhaseDerivative && !(best.height >= 1.0 / gamma)) continue;
    best.from_zoom = true;
    best.estimate_re = est.real();
    best.estimate_width = gamma;
    auto& peaks = out.report.peaks;
    peaks.erase(std::remove_if(peaks.begin(), peaks.end(),
                               [&](const ResonancePeak& p) {
                                 return !p.from_zoom && std::abs(p.energy - best.energy) < 2.0 * step;
                               }),
                peaks.end());
    peaks.push_back(best);
  }
  std::sort(out.report.peaks.begin(), out.report.peaks.end(),
            [](const ResonancePeak& a, const ResonancePeak& b) { return a.energy < b.energy; });
  return out;
}

BoundStateResult bound_states(const SystemSpec& system, const std::vector<double>& grid, int threads) {
  const MatrixSet mats = build_matrices(system);
  const SpectralGreen green(mats.hamiltonian(), mats.basis.family == BasisFamily::Laguerre
                                                     ? std::optional<SymMatrix>(mats.Omega)
                                                     : std::nullopt);
  BoundStateResult out;
  const Vector& eps = green.spectrum().eps;
  for (Index i = 0; i < eps.size(); ++i) {
    if (eps(i) < 0.0) out.energies.push_back(eps(i));
  }
  if (!grid.empty()) {
    const Index last = mats.basis.N - 1;
    out.green_scan.energies = grid;
    out.green_scan.add_column("|G|", "1/hartree", green_abs_grid_parallel(green, last, last, grid, threads));
    describe(out.green_scan, system);
    out.green_scan.check();
  }
  return out;
}

const char* to_string(DosMethod m) { return m == DosMethod::Smoothing ? "smoothing" : "continuation"; }

DosMethod dos_method_from_string(const std::string& name) {
  if (name == "smoothing") return DosMethod::Smoothing;
  if (name == "continuation") return DosMethod::Continuation;
  throw ConfigError("unknown dos method '" + name + "' (expected smoothing or continuation)");
}

Complex RationalFit::operator()(Complex z) const {
  const Complex w = (z - center) / scale;
  Complex num = 0.0;
  for (Index k = p.size(); k-- > 0;) num = num * w + p(k);
  Complex den = 0.0;
  for (Index k = q.size(); k-- > 0;) den = den * w + q(k);
  return num / den;
}

RationalFit fit_rational(const std::vector<Complex>& z, const std::vector<Complex>& g, int order, double center,
                         double scale) {
  const Index m = static_cast<Index>(z.size());
  const Index d = order;
  if (order < 1 || m < 2 * d) {
    throw NumericalError(ErrorKind::InvalidArgument, op("density_of_states"), "too few fit samples for the order");
  }
  CMatrix a(m, 2 * d);
  CVector rhs(m);
  for (Index k = 0; k < m; ++k) {
    const Complex w = (z[k] - center) / scale;
    Complex wp = 1.0;
    for (Index j = 0; j < d; ++j) {
      a(k, j) = wp;
      a(k, d + j) = -g[k] * wp;
      wp *= w;
    }
    rhs(k) = g[k] * wp;
  }
  Vector norms = a.colwise().norm().transpose();
  for (Index j = 0; j < a.cols(); ++j) a.col(j) /= norms(j);
  CVector sol = a.colPivHouseholderQr().solve(rhs);
  for (Index j = 0; j < sol.size(); ++j) sol(j) /= norms(j);

  RationalFit fit;
  fit.center = center;
  fit.scale = scale;
  fit.p = sol.head(d);
  fit.q.resize(d + 1);
  fit.q.head(d) = sol.tail(d);
  fit.q(d) = 1.0;
  double worst = 0.0;
  double level = 0.0;
  for (Index k = 0; k < m; ++k) {
    worst = std::max(worst, std::abs(fit(z[k]) - g[k]));
    level = std::max(level, std::abs(g[k]));
  }
  fit.residual = level > 0.0 ? worst / level : worst;
  return fit;
}

DosResult density_of_states(const SystemSpec& system, const std::vector<double>& grid, const DosOptions& options,
                            int threads) {
  if (system.basis.family != BasisFamily::Oscillator) {
    throw NumericalError(ErrorKind::InvalidConfiguration, op("density_of_states"),
                         "density of states needs the orthonormal oscillator basis");
  }
  if (grid.empty()) throw NumericalError(ErrorKind::InvalidArgument, op("density_of_states"), "empty grid");
  const MatrixSet mats = oscillator_matrices(system);
  const SpectralPair pair = sym_eig(mats.hamiltonian());
  DosResult out;
  out.poles = pair.eps;
  out.weights = pair.gamma.row(0).transpose().cwiseAbs2();
  out.total_weight = out.weights.sum();
  out.table.energies = grid;

  std::vector<double> rho;
  if (options.method == DosMethod::Smoothing) {
    std::vector<double> widths(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      widths[i] = options.width > 0.0 ? options.width : options.width_factor * local_spacing(out.poles, grid[i]);
    }
    rho = dos_smoothing_parallel(out.poles, out.weights, grid, widths, threads);
    out.table.add_column("rho", "1/hartree", rho);
    out.table.add_column("width", "hartree", std::move(widths));
  } else {
    const double lo = grid.front();
    const double hi = grid.size() > 1 ? grid.back() : grid.front() + 1.0;
    const int count = options.fit_points > 0 ? options.fit_points : std::max(200, 8 * options.fit_order);
    std::vector<Complex> zs(static_cast<std::size_t>(count));
    std::vector<Complex> gs(zs.size());
    const SpectralGreen green(pair);
    for (int k = 0; k < count; ++k) {
      const double x = lo + (hi - lo) * k / (count - 1.0);
      zs[static_cast<std::size_t>(k)] = Complex(x, options.fit_height);
      gs[static_cast<std::size_t>(k)] = green(zs[static_cast<std::size_t>(k)], 0, 0);
    }
    const RationalFit fit = fit_rational(zs, gs, options.fit_order, 0.5 * (lo + hi), 0.5 * (hi - lo));
    out.fit_residual = fit.residual;
    if (!(fit.residual <= options.max_fit_residual)) {
      std::ostringstream os;
      os.precision(17);
      os << "continuation fit residual " << fit.residual << " exceeds " << options.max_fit_residual
         << " (order " << options.fit_order << ", contour Im z = " << options.fit_height << ")";
      throw NumericalError(ErrorKind::FitResidual, op("density_of_states"), os.str());
    }
    rho.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) rho[i] = fit(grid[i]).imag() / std::numbers::pi;
    out.table.add_column("rho", "1/hartree", rho);
  }
  out.min_rho = *std::min_element(rho.begin(), rho.end());
  describe(out.table, system);
  out.table.check();
  return out;
}

}  // namespace rkit
