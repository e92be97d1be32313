#pragma once

#include <complex>

namespace rkit {

struct SeriesOptions {
  double tolerance = 1e-14;
  long max_terms = 1000000;
};

// Gauss series 2F1(a, b; c; x) for |x| <= 1.
// On |x| = 1 the series needs Re(c - a - b) > 0 unless it terminates.
// Slow cases near the unit circle are summed after multiplying by (1 - x)^m,
// which replaces the coefficients by their m-th backward differences.
std::complex<double> hyp2f1(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                            std::complex<double> x, SeriesOptions options = {});

// 2F1(a, 1; c; x).
std::complex<double> hyp2f1_b1(std::complex<double> a, std::complex<double> c, std::complex<double> x,
                               SeriesOptions options = {});

}  // namespace rkit
