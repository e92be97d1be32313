#pragma once

#include <vector>

#include "rkit/basis.hpp"
#include "rkit/hypergeometric.hpp"
#include "rkit/resolvent.hpp"

namespace rkit {

struct KinematicParams {
  double E = 0.0;
  double theta = 0.0;  // cos theta = (8E - lambda^2) / (8E + lambda^2)
  double t = 0.0;      // Z / sqrt(2E)

  static KinematicParams make(double E, double lambda, double Z);
};

struct SeedValues {
  Complex T0;
  Complex R1plus;
};

SeedValues seed_coefficients(const KinematicParams& kin, int ell, SeriesOptions options = {});

// T[n] for n = 0..upTo; Rplus[n], Rminus[n] for n = 1..upTo (index 0 is unused and zero).
struct CSCoefficients {
  std::vector<Complex> T;
  std::vector<Complex> Rplus;
  std::vector<Complex> Rminus;
};

CSCoefficients cs_recursion(const MatrixSet& mats, const KinematicParams& kin, Index up_to,
                            SeriesOptions options = {});

struct ScatteringPoint {
  double E = 0.0;
  Complex S;
  double delta = 0.0;       // arg S / 2, in (-pi/2, pi/2]
  double one_minus_s = 0.0; // |1 - S|
  bool at_pole = false;     // E hit an eigenvalue of (H, Omega); S is the G -> infinity limit
};

// Precomputes the matrices and the spectral data of (H, Omega) once; evaluate()
// is then O(N) per energy and safe to call concurrently.
class ScatteringSolver {
 public:
  explicit ScatteringSolver(const SystemSpec& system, QuadratureOptions quad = {}, SeriesOptions series = {});

  ScatteringPoint evaluate(double E) const;

  // G_{N-1,N-1}(E) from the spectral sum; throws SpectrumError at a pole.
  double green_last(double E) const;

  const MatrixSet& matrices() const noexcept { return mats_; }
  const SpectralGreen& green() const noexcept { return green_; }
  const Vector& poles() const noexcept { return green_.spectrum().eps; }
  const SystemSpec& system() const noexcept { return system_; }

 private:
  SystemSpec system_;
  MatrixSet mats_;
  SpectralGreen green_;
  SeriesOptions series_;
};

ScatteringPoint s_matrix(const SystemSpec& system, double E);

}  // namespace rkit
