#include "rkit/kernels.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include <omp.h>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

double green_abs(const SpectralGreen& green, Index n, Index m, double e) {
  if (green.pole_at(e) >= 0) return std::numeric_limits<double>::infinity();
  return std::abs(green.real(e, n, m));
}

double smoothed(const Vector& poles, const Vector& weights, double e, double width) {
  double sum = 0.0;
  for (Index j = 0; j < poles.size(); ++j) {
    const double d = poles(j) - e;
    sum += weights(j) * width / (d * d + width * width);
  }
  return sum / std::numbers::pi;
}

// Runs body(i) for every index; the first failure by index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const long n = static_cast<long>(count);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<ScatteringPoint> smatrix_grid_serial(const ScatteringSolver& solver, const std::vector<double>& energies) {
  std::vector<ScatteringPoint> out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) out[i] = solver.evaluate(energies[i]);
  return out;
}

std::vector<ScatteringPoint> smatrix_grid_parallel(const ScatteringSolver& solver, const std::vector<double>& energies,
                                                   int threads) {
  std::vector<ScatteringPoint> out(energies.size());
  parallel_for(energies.size(), threads, [&](std::size_t i) { out[i] = solver.evaluate(energies[i]); });
  return out;
}

std::vector<double> green_abs_grid_serial(const SpectralGreen& green, Index n, Index m,
                                          const std::vector<double>& energies) {
  std::vector<double> out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) out[i] = green_abs(green, n, m, energies[i]);
  return out;
}

std::vector<double> green_abs_grid_parallel(const SpectralGreen& green, Index n, Index m,
                                            const std::vector<double>& energies, int threads) {
  std::vector<double> out(energies.size());
  parallel_for(energies.size(), threads, [&](std::size_t i) { out[i] = green_abs(green, n, m, energies[i]); });
  return out;
}

std::vector<double> dos_smoothing_serial(const Vector& poles, const Vector& weights, const std::vector<double>& energies,
                                         const std::vector<double>& widths) {
  std::vector<double> out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) out[i] = smoothed(poles, weights, energies[i], widths[i]);
  return out;
}

std::vector<double> dos_smoothing_parallel(const Vector& poles, const Vector& weights,
                                           const std::vector<double>& energies, const std::vector<double>& widths,
                                           int threads) {
  std::vector<double> out(energies.size());
  parallel_for(energies.size(), threads,
               [&](std::size_t i) { out[i] = smoothed(poles, weights, energies[i], widths[i]); });
  return out;
}

}  // namespace rkit
