#include "rkit/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rkit/errors.hpp"
#include "rkit/quadrature.hpp"
#include "rkit/resolvent.hpp"
#include "rkit/table_io.hpp"

#ifndef RKIT_VERSION
#define RKIT_VERSION "0.0.0"
#endif

namespace rkit {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

std::string num(double v) { return format_double(v); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const std::vector<std::string> kCommands = {"smatrix", "resonances", "bound-states", "dos", "resolvent", "selftest"};

void write_outputs(const RunConfig& c, const ScanTable& table, const json& doc, const std::string& title,
                   std::ostream& out) {
  if (c.csv.empty()) {
    write_csv(table, out);
  } else {
    write_csv_file(table, c.csv);
  }
  if (!c.json.empty()) {
    std::ofstream f(c.json, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + c.json + "' for writing");
    f << doc.dump(2) << '\n';
  }
  if (!c.gnuplot_script.empty()) {
    std::ofstream f(c.gnuplot_script, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + c.gnuplot_script + "' for writing");
    f << gnuplot_script(table, c.csv.empty() ? "-" : c.csv, title);
  }
}

json config_json(const RunConfig& c) {
  json j = json::object();
  for (const auto& [k, v] : echo(c)) j[k] = v;
  return j;
}

json document(const RunConfig& c, json results, json diagnostics) {
  json doc;
  doc["config"] = config_json(c);
  doc["results"] = std::move(results);
  doc["diagnostics"] = std::move(diagnostics);
  doc["version"] = version();
  return doc;
}

// Largest ||S| - 1| over points at least `margin` grid steps from any pole.
double unitarity_defect(const ScanTable& t, const Vector& poles, int margin) {
  const auto& re = t.column("Re S");
  const auto& im = t.column("Im S");
  const double step = t.rows() > 1 ? (t.energies.back() - t.energies.front()) / (t.rows() - 1.0) : 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    bool near = false;
    for (Index j = 0; j < poles.size(); ++j) {
      if (std::abs(poles(j) - t.energies[i]) < margin * step) near = true;
    }
    if (!near) worst = std::max(worst, std::abs(std::hypot(re[i], im[i]) - 1.0));
  }
  return worst;
}

json peak_json(const ResonancePeak& p) {
  json j;
  j["energy"] = p.energy;
  j["width"] = p.width;
  j["prominence"] = p.prominence;
  j["height"] = p.height;
  j["im_s_peak"] = number_or_null(p.im_s_peak);
  j["from_zoom"] = p.from_zoom;
  if (p.from_zoom) {
    j["pole_estimate_re"] = p.estimate_re;
    j["pole_estimate_width"] = p.estimate_width;
  }
  return j;
}

int cmd_smatrix(const RunConfig& c, std::ostream& out, bool resonances) {
  const ScatteringSolver solver(c.system);
  const auto grid = linear_grid(c.e_min, c.e_max, c.steps);
  json results;
  json diag;
  ScanTable table;
  if (resonances) {
    ResonanceScan scan = locate_resonances(solver, grid, c.resonance, c.threads);
    table = std::move(scan.table);
    table.add_column("ddelta/dE", "rad/hartree", phase_derivative(table));
    results["criterion"] = to_string(c.resonance.criterion);
    json list = json::array();
    for (const auto& p : scan.report.peaks) list.push_back(peak_json(p));
    results["resonances"] = std::move(list);
    diag["zoom_windows"] = scan.zooms.size();
  } else {
    table = scan_smatrix(solver, grid, c.threads);
  }
  const auto& dev = table.column("|1-S|");
  const auto& pole = table.column("at_pole");
  results["points"] = table.rows();
  results["max_abs_1_minus_S"] = *std::max_element(dev.begin(), dev.end());
  diag["pole_hits"] = std::count(pole.begin(), pole.end(), 1.0);
  diag["max_unitarity_defect"] = unitarity_defect(table, solver.poles(), 10);
  diag["quadrature_residual"] = solver.matrices().quadrature_residual;
  write_outputs(c, table, document(c, std::move(results), std::move(diag)), c.command, out);
  return 0;
}

int cmd_bound_states(const RunConfig& c, std::ostream& out) {
  const auto grid = linear_grid(c.e_min, c.e_max, c.steps);
  const BoundStateResult r = bound_states(c.system, grid, c.threads);
  json results;
  results["bound_states"] = r.energies;
  json diag;
  diag["count"] = r.energies.size();
  write_outputs(c, r.green_scan, document(c, std::move(results), std::move(diag)), "bound states", out);
  return 0;
}

int cmd_dos(const RunConfig& c, std::ostream& out) {
  const auto grid = linear_grid(c.e_min, c.e_max, c.steps);
  const DosResult r = density_of_states(c.system, grid, c.dos, c.threads);
  const auto& rho = r.table.column("rho");
  const auto top = std::max_element(rho.begin(), rho.end()) - rho.begin();
  json results;
  results["method"] = to_string(c.dos.method);
  results["argmax_energy"] = grid[static_cast<std::size_t>(top)];
  results["max_rho"] = rho[static_cast<std::size_t>(top)];
  json diag;
  diag["total_weight"] = r.total_weight;
  diag["min_rho"] = r.min_rho;
  diag["fit_residual"] = number_or_null(r.fit_residual);
  write_outputs(c, r.table, document(c, std::move(results), std::move(diag)), "density of states", out);
  return 0;
}

int cmd_resolvent(const RunConfig& c, std::ostream& out) {
  const MatrixSet mats = build_matrices(c.system);
  const Index size = mats.basis.N;
  if (c.n < 0 || c.n >= size || c.m < 0 || c.m >= size) throw ConfigError("n and m must lie in [0, N)");
  const std::optional<SymMatrix> omega =
      mats.basis.family == BasisFamily::Laguerre ? std::optional<SymMatrix>(mats.Omega) : std::nullopt;
  const SymMatrix h = mats.hamiltonian();
  const SpectralGreen green(h, omega);
  const auto grid = linear_grid(c.e_min, c.e_max, c.steps);
  std::vector<double> re(grid.size()), im(grid.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z(grid[i], c.eta);
    const Complex g = green(z, c.n, c.m);
    re[i] = g.real();
    im[i] = g.imag();
    const Complex alt = green_cofactor(ResolventInput{h, omega, z}, c.n, c.m);
    worst = std::max(worst, std::abs(alt - g) / std::max(1.0, std::abs(g)));
  }
  ScanTable table;
  table.energies = grid;
  table.add_column("Re G", "1/hartree", std::move(re));
  table.add_column("Im G", "1/hartree", std::move(im));
  describe(table, c.system);
  json results;
  results["n"] = c.n;
  results["m"] = c.m;
  results["eta"] = c.eta;
  json diag;
  diag["max_rel_diff_cofactor"] = worst;
  write_outputs(c, table, document(c, std::move(results), std::move(diag)), "resolvent", out);
  return 0;
}

struct Check {
  std::string name;
  double value;
  double limit;
};

Matrix random_symmetric(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

std::vector<Check> selftest_checks() {
  std::vector<Check> checks;
  std::mt19937_64 rng(20240601);

  {
    const SymMatrix h(random_symmetric(rng, 5));
    Matrix b = random_symmetric(rng, 5);
    b = b * b.transpose() + 5.0 * Matrix::Identity(5, 5);
    const SymMatrix om(0.5 * (b + b.transpose()));
    const Complex z(0.3, 0.1);
    const CMatrix inv = inverse_oracle(ResolventInput{h, om, z});
    double worst = 0.0;
    for (Index n = 0; n < 5; ++n) {
      for (Index m = 0; m < 5; ++m) {
        const ResolventInput in{h, om, z};
        const Complex ref = inv(n, m);
        worst = std::max(worst, std::abs(green_spectral(in, n, m) - ref) / std::abs(ref));
        worst = std::max(worst, std::abs(green_cofactor(in, n, m) - ref) / std::abs(ref));
      }
    }
    checks.push_back({"resolvent formulas agree with the direct inverse", worst, 1e-9});
  }
  {
    const SymMatrix h(random_symmetric(rng, 6));
    const SpectralPair p = sym_eig(h);
    double worst = 0.0;
    for (Index n = 0; n < 6; ++n)
      for (Index k = 0; k < 6; ++k)
        worst = std::max(worst, std::abs(eigvec_sq_from_eigs(h, n, k) - p.gamma(n, k) * p.gamma(n, k)));
    checks.push_back({"eigenvector components from eigenvalues", worst, 1e-10});
  }
  {
    const QuadratureRule r = gauss_laguerre(0.0, 3);
    double s = 0.0;
    for (Index i = 0; i < r.size(); ++i) s += r.weights(i) * std::pow(r.nodes(i), 5);
    checks.push_back({"Gauss-Laguerre fifth moment", std::abs(s - 120.0) / 120.0, 1e-12});
  }
  {
    SystemSpec free;
    free.basis = {BasisFamily::Laguerre, 1.0, 0, 40};
    const ScatteringSolver solver(free);
    double worst = 0.0;
    for (double e : {0.2, 1.0, 3.0, 6.0}) worst = std::max(worst, solver.evaluate(e).one_minus_s);
    checks.push_back({"free particle has S = 1", worst, 1e-5});
  }
  {
    const PotentialExpr v = parse_potential("5*exp(-(r-3.5)^2/4) - 8*exp(-r^2/5)");
    const bool same = parse_potential(v.to_string()) == v;
    checks.push_back({"potential parse-print-parse round trip", same ? 0.0 : 1.0, 0.5});
  }
  return checks;
}

int cmd_selftest(const RunConfig& c, std::ostream& out) {
  const auto checks = selftest_checks();
  bool ok = true;
  json list = json::array();
  for (const auto& ch : checks) {
    const bool pass = ch.value <= ch.limit;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << ch.name << " (" << num(ch.value) << " <= " << num(ch.limit) << ")\n";
    json j;
    j["name"] = ch.name;
    j["value"] = ch.value;
    j["limit"] = ch.limit;
    j["passed"] = pass;
    list.push_back(std::move(j));
  }
  if (!c.json.empty()) {
    json results;
    results["checks"] = std::move(list);
    json diag;
    diag["all_passed"] = ok;
    std::ofstream f(c.json, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + c.json + "' for writing");
    f << document(c, std::move(results), std::move(diag)).dump(2) << '\n';
  }
  return ok ? 0 : 2;
}

}  // namespace

std::string version() { return RKIT_VERSION; }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command",      "family",       "lambda",         "ell",         "Z",          "N",
      "potential",    "e_min",        "e_max",          "steps",       "threads",    "csv",
      "json",         "gnuplot_script", "criterion",    "prominence",  "zoom",       "dos_method",
      "dos_width",    "dos_width_factor", "fit_height", "fit_order",   "fit_residual", "n",
      "m",            "eta",          "range"};
  return keys;
}

Settings parse_config_text(const std::string& text, const std::string& source) {
  Settings out;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigError(source + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    }
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

Settings load_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "command") {
    c.command = v == "resonant-scan" ? "resonances" : v;
  } else if (key == "family") {
    c.system.basis.family = basis_family_from_string(v);
  } else if (key == "lambda") {
    c.system.basis.lambda = to_double(key, v);
  } else if (key == "ell") {
    c.system.basis.ell = static_cast<int>(to_long(key, v));
  } else if (key == "Z") {
    c.system.Z = to_double(key, v);
  } else if (key == "N") {
    c.system.basis.N = to_long(key, v);
  } else if (key == "potential") {
    c.potential_text = v;
    c.system.potential = parse_potential(v);
  } else if (key == "e_min") {
    c.e_min = to_double(key, v);
  } else if (key == "e_max") {
    c.e_max = to_double(key, v);
  } else if (key == "steps") {
    c.steps = to_long(key, v);
  } else if (key == "threads") {
    c.threads = static_cast<int>(to_long(key, v));
  } else if (key == "csv") {
    c.csv = v;
  } else if (key == "json") {
    c.json = v;
  } else if (key == "gnuplot_script") {
    c.gnuplot_script = v;
  } else if (key == "criterion") {
    c.resonance.criterion = resonance_criterion_from_string(v);
  } else if (key == "prominence") {
    c.resonance.min_prominence = to_double(key, v);
  } else if (key == "zoom") {
    c.resonance.zoom = to_bool(key, v);
  } else if (key == "dos_method") {
    c.dos.method = dos_method_from_string(v);
  } else if (key == "dos_width") {
    c.dos.width = to_double(key, v);
  } else if (key == "dos_width_factor") {
    c.dos.width_factor = to_double(key, v);
  } else if (key == "fit_height") {
    c.dos.fit_height = to_double(key, v);
  } else if (key == "fit_order") {
    c.dos.fit_order = static_cast<int>(to_long(key, v));
  } else if (key == "fit_residual") {
    c.dos.max_fit_residual = to_double(key, v);
  } else if (key == "n") {
    c.n = to_long(key, v);
  } else if (key == "m") {
    c.m = to_long(key, v);
  } else if (key == "eta") {
    c.eta = to_double(key, v);
  } else if (key == "range") {
    c.range = to_double(key, v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig make_config(const Settings& file, const Settings& cli) {
  RunConfig c;
  for (const auto& [k, v] : file) apply_setting(c, k, v);
  for (const auto& [k, v] : cli) apply_setting(c, k, v);
  return c;
}

void validate(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  if (c.command == "selftest") return;
  validate(c.system);
  if (c.steps < 1) throw ConfigError("steps must be >= 1");
  if (!(c.e_min < c.e_max)) throw ConfigError("e_min must be smaller than e_max");
  if ((c.command == "smatrix" || c.command == "resonances") && !(c.e_min > 0.0)) {
    throw ConfigError("scattering energies must be positive (e_min > 0)");
  }
  if ((c.command == "smatrix" || c.command == "resonances") && c.system.basis.family != BasisFamily::Laguerre) {
    throw ConfigError("scattering commands need family = laguerre");
  }
  if (c.command == "dos" && c.system.basis.family != BasisFamily::Oscillator) {
    throw ConfigError("dos needs family = oscillator");
  }
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
  if (c.dos.fit_order < 1) throw ConfigError("fit_order must be >= 1");
  check_short_range(c.system.potential, c.range);
}

Settings echo(const RunConfig& c) {
  Settings s = {{"command", c.command},
                {"family", to_string(c.system.basis.family)},
                {"lambda", num(c.system.basis.lambda)},
                {"ell", std::to_string(c.system.basis.ell)},
                {"Z", num(c.system.Z)},
                {"N", std::to_string(c.system.basis.N)},
                {"potential", c.potential_text},
                {"potential_parsed", c.system.potential.to_string()},
                {"e_min", num(c.e_min)},
                {"e_max", num(c.e_max)},
                {"steps", std::to_string(c.steps)}};
  if (c.command == "resonances") {
    s.emplace_back("criterion", to_string(c.resonance.criterion));
    s.emplace_back("prominence", num(c.resonance.min_prominence));
    s.emplace_back("zoom", c.resonance.zoom ? "true" : "false");
  }
  if (c.command == "dos") {
    s.emplace_back("dos_method", to_string(c.dos.method));
    s.emplace_back("dos_width", num(c.dos.width));
    s.emplace_back("dos_width_factor", num(c.dos.width_factor));
    s.emplace_back("fit_height", num(c.dos.fit_height));
    s.emplace_back("fit_order", std::to_string(c.dos.fit_order));
  }
  if (c.command == "resolvent") {
    s.emplace_back("n", std::to_string(c.n));
    s.emplace_back("m", std::to_string(c.m));
    s.emplace_back("eta", num(c.eta));
  }
  return s;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    if (c.command == "smatrix") return cmd_smatrix(c, out, false);
    if (c.command == "resonances") return cmd_smatrix(c, out, true);
    if (c.command == "bound-states") return cmd_bound_states(c, out);
    if (c.command == "dos") return cmd_dos(c, out);
    if (c.command == "resolvent") return cmd_resolvent(c, out);
    return cmd_selftest(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error [" << to_string(e.kind()) << "] " << e.what() << '\n';
    return 2;
  }
}

}  // namespace rkit
