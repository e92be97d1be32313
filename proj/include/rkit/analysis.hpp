#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rkit/kernels.hpp"
#include "rkit/scattering.hpp"

namespace rkit {

// steps points from e_min to e_max inclusive; one point gives {e_min}.
std::vector<double> linear_grid(double e_min, double e_max, long steps);

struct ScanColumn {
  std::string name;
  std::string unit;  // empty for dimensionless
  std::vector<double> values;
};

// Energies plus one value per energy in every column.
struct ScanTable {
  std::string energy_unit = "hartree";
  std::vector<double> energies;
  std::vector<ScanColumn> columns;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t rows() const noexcept { return energies.size(); }
  const std::vector<double>& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  void add_column(std::string name, std::string unit, std::vector<double> values);
  // Throws std::invalid_argument unless energies strictly increase and every column matches.
  void check() const;
};

void describe(ScanTable& table, const SystemSpec& system);

// Columns: Re S, Im S, |1-S|, delta, at_pole (0 or 1). Pole hits are flagged, not fatal.
ScanTable scan_smatrix(const ScatteringSolver& solver, const std::vector<double>& grid, int threads = 0);
ScanTable scan_smatrix(const SystemSpec& system, const std::vector<double>& grid, int threads = 0);

enum class ResonanceCriterion {
  PhaseDerivative,  // peaks of d(delta)/dE
  ImS,              // local maxima of Im S
};

const char* to_string(ResonanceCriterion c);
ResonanceCriterion resonance_criterion_from_string(const std::string& name);

struct ResonanceOptions {
  ResonanceCriterion criterion = ResonanceCriterion::PhaseDerivative;
  // Minimum topographic prominence. NaN picks 3 rad/hartree for the phase
  // derivative and 0.05 for Im S.
  double min_prominence = std::numeric_limits<double>::quiet_NaN();
  // Sharp-resonance zoom around eigenvalues of (H, Omega).
  bool zoom = true;
  int zoom_points = 241;
  double zoom_half_width = 12.0;  // in units of the estimated width
  double sharp_factor = 4.0;      // zoom when width < sharp_factor * grid step
};

struct ResonancePeak {
  double energy = 0.0;
  double width = 0.0;       // FWHM of the detected peak
  double prominence = 0.0;
  double height = 0.0;
  double im_s_peak = std::numeric_limits<double>::quiet_NaN();  // nearest Im S maximum
  // One-pole estimate E_res = re - i width/2 for zoomed peaks, else NaN.
  double estimate_re = std::numeric_limits<double>::quiet_NaN();
  double estimate_width = std::numeric_limits<double>::quiet_NaN();
  bool from_zoom = false;
};

struct ResonanceReport {
  std::vector<ResonancePeak> peaks;  // ascending energy
};

// Unwrapped delta and d(delta)/dE on the table grid.
std::vector<double> unwrapped_phase(const ScanTable& table);
std::vector<double> phase_derivative(const ScanTable& table);

ResonanceReport find_resonances(const ScanTable& table, const ResonanceOptions& options = {});

struct ResonanceScan {
  ScanTable table;
  ResonanceReport report;
  std::vector<ScanTable> zooms;
};

ResonanceScan locate_resonances(const ScatteringSolver& solver, const std::vector<double>& grid,
                                const ResonanceOptions& options = {}, int threads = 0);

// One-pole estimate of the S-matrix pole next to eigenvalue index j.
Complex one_pole_estimate(const ScatteringSolver& solver, Index j);

struct BoundStateResult {
  std::vector<double> energies;  // negative eigenvalues of (H, Omega), ascending
  ScanTable green_scan;          // |G_{N-1,N-1}(E)| on the requested grid
};

BoundStateResult bound_states(const SystemSpec& system, const std::vector<double>& grid = {}, int threads = 0);

enum class DosMethod { Smoothing, Continuation };

const char* to_string(DosMethod m);
DosMethod dos_method_from_string(const std::string& name);

struct DosOptions {
  DosMethod method = DosMethod::Smoothing;
  double width = 0.0;          // fixed smoothing width; <= 0 uses width_factor * local pole spacing
  double width_factor = 5.0;
  double fit_height = 0.5;     // contour Im z for the continuation fit
  int fit_order = 8;           // denominator degree; numerator has fit_order - 1
  int fit_points = 0;          // 0 picks max(200, 8 fit_order)
  double max_fit_residual = 1e-2;
};

struct DosResult {
  ScanTable table;             // rho column (and width for smoothing)
  Vector poles;
  Vector weights;              // Gamma_{0,j}^2
  double total_weight = 0.0;
  double min_rho = 0.0;
  double fit_residual = std::numeric_limits<double>::quiet_NaN();
};

DosResult density_of_states(const SystemSpec& system, const std::vector<double>& grid, const DosOptions& options = {},
                            int threads = 0);

// Rational least-squares approximant of sampled values; exposed for tests.
struct RationalFit {
  double center = 0.0;
  double scale = 1.0;
  CVector p;  // numerator coefficients in w = (z - center) / scale
  CVector q;  // denominator, monic; q.size() = order + 1
  double residual = 0.0;  // max |F - G| / max |G| on the samples

  Complex operator()(Complex z) const;
};

RationalFit fit_rational(const std::vector<Complex>& z, const std::vector<Complex>& g, int order, double center,
                         double scale);

}  // namespace rkit
