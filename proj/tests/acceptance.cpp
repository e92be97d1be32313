#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rkit/analysis.hpp"
#include "rkit/errors.hpp"
#include "rkit/resolvent.hpp"

using namespace rkit;

namespace {

const char* kFig1 = "7.5*r^2*exp(-r)";
const char* kWells = "5*exp(-(r-3.5)^2/4) - 8*exp(-r^2/5)";

SystemSpec laguerre(double lambda, int ell, Index n, double z, const char* v) {
  return SystemSpec{BasisSpec{BasisFamily::Laguerre, lambda, ell, n}, z, parse_potential(v)};
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Worst ||S| - 1| over points at least 10 grid steps from any pole.
double unitarity_margin = 0.0;
long unitarity_points = 0;

void record_unitarity(const ScanTable& t, const Vector& poles) {
  if (t.rows() < 2) return;
  const double step = t.energies[1] - t.energies[0];
  const auto& re = t.column("Re S");
  const auto& im = t.column("Im S");
  for (std::size_t i = 0; i < t.rows(); ++i) {
    bool near = false;
    for (Index j = 0; j < poles.size() && !near; ++j) near = std::abs(poles(j) - t.energies[i]) < 10.0 * step;
    if (near) continue;
    unitarity_margin = std::max(unitarity_margin, std::abs(std::hypot(re[i], im[i]) - 1.0));
    ++unitarity_points;
  }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const ResonancePeak* nearest(const ResonanceReport& r, double e) {
  const ResonancePeak* best = nullptr;
  for (const auto& p : r.peaks)
    if (!best || std::abs(p.energy - e) < std::abs(best->energy - e)) best = &p;
  return best;
}

double resonance_position = 3.425;

Outcome formula_equivalence() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  long compared = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + trial % 7;
    const ResolventInput in{SymMatrix(oracle::random_symmetric(rng, n)), SymMatrix(oracle::random_spd(rng, n)),
                            Complex(u(rng), u(rng))};
    const CMatrix inv = inverse_oracle(in);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const Complex ref = inv(a, b);
        const double scale = std::abs(ref);
        worst = std::max(worst, std::abs(green_spectral(in, a, b) - ref) / scale);
        worst = std::max(worst, std::abs(green_cofactor(in, a, b) - ref) / scale);
        try {
          worst = std::max(worst, std::abs(green_eigprod_general(in, a, b) - ref) / scale);
        } catch (const NumericalError& e) {
          if (e.kind() != ErrorKind::InvalidConfiguration) throw;
        }
        compared += 1;
      }
    }
  }
  return {worst <= 1e-9, fmt("max relative deviation %.2e over %.0f elements, limit 1e-09", worst, compared)};
}

Outcome eigvec_from_eigs() {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix h(oracle::random_symmetric(rng, 8));
    const SpectralPair p = sym_eig(h);
    for (Index n = 0; n < 8; ++n)
      for (Index m = 0; m < 8; ++m)
        for (Index k = 0; k < 8; ++k)
          worst = std::max(worst, std::abs(eigvec_prod_from_eigs(h, n, m, k) - p.gamma(n, k) * p.gamma(m, k)));
  }
  double worst_general = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix h(oracle::random_symmetric(rng, 8));
    const SymMatrix om(oracle::tridiagonal_spd(rng, 8));
    const SpectralPair p = gen_sym_eig(h, om);
    for (Index n = 0; n < 8; ++n) {
      for (Index k = 0; k < 8; ++k) {
        const double ref = p.gamma(n, k) * p.gamma(n, k);
        worst_general = std::max(worst_general, std::abs(eigvec_from_eigs_general(h, om, n, n, k) - ref));
        worst_general = std::max(worst_general, std::abs(eigvec_sq_from_overlap_eigs(h, om, n, k) - ref));
      }
    }
  }
  return {worst <= 1e-10 && worst_general <= 1e-9,
          fmt("orthonormal %.2e (limit 1e-10), generalized %.2e (limit 1e-09)", worst, worst_general)};
}

Outcome free_particle() {
  const ScatteringSolver solver(laguerre(1.0, 0, 40, 0.0, "0"));
  const ScanTable t = scan_smatrix(solver, linear_grid(0.2, 6.0, 50));
  record_unitarity(t, solver.poles());
  const auto& dev = t.column("|1-S|");
  const double worst = *std::max_element(dev.begin(), dev.end());
  return {worst <= 1e-5, fmt("max |1-S| = %.2e, limit 1e-05", worst)};
}

Outcome model_resonance() {
  const ScatteringSolver solver(laguerre(1.0, 0, 60, 0.0, kFig1));
  const ResonanceScan scan = locate_resonances(solver, linear_grid(0.5, 8.0, 751));
  record_unitarity(scan.table, solver.poles());
  for (const auto& z : scan.zooms) record_unitarity(z, solver.poles());
  const ResonancePeak* p = nearest(scan.report, 3.425);
  if (!p) return {false, "no resonance found"};
  resonance_position = p->im_s_peak;
  return {std::abs(p->im_s_peak - 3.425) <= 0.010, fmt("Im S peak at %.5f, target 3.425 +- 0.010", p->im_s_peak)};
}

Outcome two_well_resonances() {
  const ScatteringSolver solver(laguerre(20.0, 0, 100, 0.0, kWells));
  const ResonanceScan scan = locate_resonances(solver, linear_grid(0.5, 8.0, 751));
  record_unitarity(scan.table, solver.poles());
  for (const auto& z : scan.zooms) record_unitarity(z, solver.poles());
  const ResonancePeak* a = nearest(scan.report, 2.2524);
  const ResonancePeak* b = nearest(scan.report, 4.51);
  if (!a || !b) return {false, "no resonance found"};
  const bool ok = std::abs(a->energy - 2.2524) <= 0.005 && std::abs(b->energy - 4.51) <= 0.05;
  return {ok, fmt("peaks at %.5f (2.2524 +- 0.005) and %.4f (4.51 +- 0.05)", a->energy, b->energy)};
}

Outcome bound() {
  const BoundStateResult b15 = bound_states(laguerre(5.0, 0, 15, 0.0, kWells), linear_grid(-6.0, -0.1, 600));
  const BoundStateResult b5 = bound_states(laguerre(5.0, 0, 5, 0.0, kWells));
  if (b15.energies.size() != 2 || b5.energies.size() != 2) return {false, "expected two bound states"};
  const bool ok = std::abs(b15.energies[0] + 4.5712) <= 5e-3 && std::abs(b15.energies[1] + 0.8843) <= 5e-3 &&
                  std::abs(b5.energies[0] + 4.6) <= 0.15 && std::abs(b5.energies[1] + 0.8) <= 0.15;
  return {ok, fmt("N=15: %.6f, %.6f; ", b15.energies[0], b15.energies[1]) +
                  fmt("N=5: %.4f, %.4f", b5.energies[0], b5.energies[1])};
}

Outcome table1() {
  struct Case {
    double z;
    int ell;
    double target;
    double tol;
  };
  const Case cases[] = {{1.0, 0, 0.272858, 1e-4}, {-1.0, 0, 1.247138, 1e-4}, {1.0, 1, 1.638546, 1e-3}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const ScatteringSolver solver(laguerre(20.0, c.ell, 100, c.z, kWells));
    const ResonanceScan scan = locate_resonances(solver, linear_grid(0.1, 6.0, 751));
    record_unitarity(scan.table, solver.poles());
    for (const auto& z : scan.zooms) record_unitarity(z, solver.poles());
    const ResonancePeak* p = nearest(scan.report, c.target);
    const double e = p ? p->energy : std::nan("");
    ok = ok && p && std::abs(e - c.target) <= c.tol;
    detail += fmt("Z=%+.0f l=%.0f: %.7f; ", c.z, c.ell, e);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome unitarity() {
  return {unitarity_points > 0 && unitarity_margin <= 1e-7,
          fmt("max ||S|-1| = %.2e over %.0f points, limit 1e-07", unitarity_margin, unitarity_points)};
}

Outcome dos() {
  const SystemSpec s{BasisSpec{BasisFamily::Oscillator, 1.0, 0, 60}, 0.0, parse_potential(kFig1)};
  const auto grid = linear_grid(0.05, 8.0, 400);
  const DosResult d = density_of_states(s, grid);
  const auto& rho = d.table.column("rho");
  const double top = grid[std::max_element(rho.begin(), rho.end()) - rho.begin()];
  const bool ok = std::abs(d.total_weight - 1.0) <= 1e-10 && d.min_rho >= -1e-12 &&
                  std::abs(top - resonance_position) <= 0.3;
  return {ok, fmt("|sum - 1| = %.1e, min rho = %.2e, ", std::abs(d.total_weight - 1.0), d.min_rho) +
                  fmt("rho maximum at %.3f vs resonance %.3f", top, resonance_position)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "rkit_acceptance";
  std::filesystem::create_directories(dir);
  std::string csv[2], json[2];
  for (int k = 0; k < 2; ++k) {
    const auto c = dir / ("run" + std::to_string(k) + ".csv");
    const auto j = dir / ("run" + std::to_string(k) + ".json");
    const std::string cmd = std::string("\"") + RKIT_CLI + "\" -c \"" + RKIT_CONFIG_DIR + "/model_resonance.conf\" --csv \"" +
                            c.string() + "\" --json \"" + j.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed"};
    csv[k] = slurp(c);
    json[k] = slurp(j);
  }
  std::filesystem::remove_all(dir);
  const bool ok = !csv[0].empty() && !json[0].empty() && csv[0] == csv[1] && json[0] == json[1];
  return {ok, fmt("CSV %.0f bytes, JSON %.0f bytes, identical across two runs", csv[0].size(), json[0].size())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "formula equivalence", 5.0, formula_equivalence},
      {2, "eigenvectors from eigenvalues", 5.0, eigvec_from_eigs},
      {3, "free particle", 10.0, free_particle},
      {4, "model potential resonance", 120.0, model_resonance},
      {5, "two-well resonances", 300.0, two_well_resonances},
      {6, "bound states", 10.0, bound},
      {7, "Coulomb resonances", 300.0, table1},
      {8, "unitarity", 1e9, unitarity},
      {9, "density of states", 60.0, dos},
      {10, "determinism", 60.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %2d %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s,
                in_time ? "" : ", over time limit");
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
