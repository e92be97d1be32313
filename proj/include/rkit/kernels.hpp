#pragma once

#include <vector>

#include "rkit/scattering.hpp"

namespace rkit {

// Energy-grid kernels. Each *_serial function is the reference for its
// *_parallel twin; both evaluate every point with the same arithmetic, so the
// results are bit-identical for any thread count. threads <= 0 keeps the
// OpenMP default.

std::vector<ScatteringPoint> smatrix_grid_serial(const ScatteringSolver& solver, const std::vector<double>& energies);
std::vector<ScatteringPoint> smatrix_grid_parallel(const ScatteringSolver& solver, const std::vector<double>& energies,
                                                   int threads = 0);

// |G_{n,m}(E)| on the real axis; +inf where E hits a pole.
std::vector<double> green_abs_grid_serial(const SpectralGreen& green, Index n, Index m,
                                          const std::vector<double>& energies);
std::vector<double> green_abs_grid_parallel(const SpectralGreen& green, Index n, Index m,
                                            const std::vector<double>& energies, int threads = 0);

// rho(E) = (1/pi) Im sum_j w_j / (eps_j - E - i delta(E)).
std::vector<double> dos_smoothing_serial(const Vector& poles, const Vector& weights, const std::vector<double>& energies,
                                         const std::vector<double>& widths);
std::vector<double> dos_smoothing_parallel(const Vector& poles, const Vector& weights,
                                           const std::vector<double>& energies, const std::vector<double>& widths,
                                           int threads = 0);

int max_threads();

}  // namespace rkit
