#include "rkit/hypergeometric.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

using cd = std::complex<double>;

constexpr const char* kOp = "basis-scattering/hyp2f1";
constexpr int kDifferences = 4;

bool nonpositive_integer(cd v) {
  return v.imag() == 0.0 && v.real() <= 0.0 && v.real() == std::floor(v.real());
}

[[noreturn]] void fail(long terms, cd partial, double last) {
  std::ostringstream os;
  os.precision(17);
  os << "no convergence after " << terms << " terms (partial sum " << partial.real() << (partial.imag() < 0 ? "" : "+")
     << partial.imag() << "i, last term magnitude " << last << ")";
  throw NumericalError(ErrorKind::SeriesNonConvergence, kOp, os.str());
}

cd terminating(cd a, cd b, cd c, cd x) {
  const long na = nonpositive_integer(a) ? static_cast<long>(-a.real()) : -1;
  const long nb = nonpositive_integer(b) ? static_cast<long>(-b.real()) : -1;
  const long last = na < 0 ? nb : (nb < 0 ? na : std::min(na, nb));
  cd term = 1.0;
  cd sum = 1.0;
  for (long k = 0; k < last; ++k) {
    const double kd = static_cast<double>(k);
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * x;
    sum += term;
  }
  return sum;
}

cd direct(cd a, cd b, cd c, cd x, const SeriesOptions& opt) {
  const double shrink = 1.0 - std::abs(x);
  cd term = 1.0;
  cd sum = 1.0;
  for (long k = 0; k < opt.max_terms; ++k) {
    const double kd = static_cast<double>(k);
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * x;
    sum += term;
    if (k > 4 && std::abs(term) <= opt.tolerance * std::abs(sum) * shrink) return sum;
  }
  fail(opt.max_terms, sum, std::abs(term));
}

// sum_k r_k x^k = (1 - x)^{-m} sum_k (nabla^m r)_k x^k, r_{-j} = 0.
cd differenced(cd a, cd b, cd c, cd x, const SeriesOptions& opt) {
  constexpr int m = kDifferences;
  constexpr std::array<double, m + 1> binom{1.0, 4.0, 6.0, 4.0, 1.0};
  std::array<cd, m + 1> hist{};  // hist[j] = r_{k-j}
  cd r = 1.0;
  cd power = 1.0;
  cd sum = 0.0;
  // Differenced coefficients decay like k^{-p}; the tail past k is about |d_k| k / (p - 1).
  const double p = (c - a - b).real() + 1.0 + m;
  double last = 0.0;
  for (long k = 0; k < opt.max_terms; ++k) {
    for (int j = m; j > 0; --j) hist[j] = hist[j - 1];
    hist[0] = r;
    cd d = 0.0;
    for (int j = 0; j <= m; ++j) d += (j % 2 == 0 ? binom[j] : -binom[j]) * hist[j];
    sum += d * power;
    last = std::abs(d);
    const double kd = static_cast<double>(k);
    if (k > 2 * m + 8 && p > 1.0 && last * (kd + 1.0) / (p - 1.0) <= opt.tolerance * std::abs(sum)) {
      return sum / std::pow(1.0 - x, m);
    }
    r *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0));
    power *= x;
  }
  fail(opt.max_terms, sum / std::pow(1.0 - x, m), last);
}

}  // namespace

cd hyp2f1(cd a, cd b, cd c, cd x, SeriesOptions options) {
  if (nonpositive_integer(c) && !(nonpositive_integer(a) && a.real() > c.real()) &&
      !(nonpositive_integer(b) && b.real() > c.real())) {
    throw NumericalError(ErrorKind::InvalidArgument, kOp, "c is a non-positive integer");
  }
  const double ax = std::abs(x);
  if (ax > 1.0 + 1e-14) throw NumericalError(ErrorKind::InvalidArgument, kOp, "|x| > 1");
  if (x == 0.0) return 1.0;
  if (nonpositive_integer(a) || nonpositive_integer(b)) return terminating(a, b, c, x);
  if (ax < 0.8) return direct(a, b, c, x, options);
  if (ax >= 1.0 - 1e-14 && (c - a - b).real() <= 0.0) {
    throw NumericalError(ErrorKind::InvalidArgument, kOp, "series diverges on |x| = 1 for Re(c - a - b) <= 0");
  }
  if (std::abs(1.0 - x) < 1e-3) {
    throw NumericalError(ErrorKind::SeriesNonConvergence, kOp, "x too close to 1 for the series");
  }
  return differenced(a, b, c, x, options);
}

cd hyp2f1_b1(cd a, cd c, cd x, SeriesOptions options) { return hyp2f1(a, 1.0, c, x, options); }

}  // namespace rkit
