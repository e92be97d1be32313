#include <doctest.h>

#include "oracles.hpp"
#include "rkit/errors.hpp"
#include "rkit/matrix_core.hpp"

using namespace rkit;

TEST_CASE("SymMatrix rejects asymmetric or empty input") {
  Matrix a(2, 2);
  a << 1, 2, 2.0000001, 1;
  CHECK_THROWS_AS(SymMatrix{a}, std::invalid_argument);
  CHECK_THROWS_AS(SymMatrix{Matrix(0, 0)}, std::invalid_argument);
  CHECK(SymMatrix::identity(3).is_identity());
}

TEST_CASE("sym_eig on small matrices") {
  const SpectralPair d = sym_eig(SymMatrix::diagonal(Vector::LinSpaced(2, 2.0, 3.0)));
  CHECK(d.eps(0) == doctest::Approx(2.0));
  CHECK(d.eps(1) == doctest::Approx(3.0));
  CHECK((d.gamma - Matrix::Identity(2, 2)).norm() < 1e-15);

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const SpectralPair s = sym_eig(SymMatrix(swap));
  CHECK(s.eps(0) == doctest::Approx(-1.0));
  CHECK(s.eps(1) == doctest::Approx(1.0));
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(s.gamma(0, 0) == doctest::Approx(h));
  CHECK(s.gamma(1, 0) == doctest::Approx(-h));
  CHECK(s.gamma(0, 1) == doctest::Approx(h));
  CHECK(s.gamma(1, 1) == doctest::Approx(h));
  CHECK(s.sigma.isOnes());
}

TEST_CASE("sym_eig matches the characteristic cubic") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::random_symmetric(rng, 3);
    const auto roots = oracle::cubic_eigenvalues(a);
    const SpectralPair p = sym_eig(SymMatrix(a));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(p.eps(i) - roots[i]) <= 1e-10);
    CHECK((p.gamma.transpose() * p.gamma - Matrix::Identity(3, 3)).norm() < 1e-12);
  }
}

TEST_CASE("gen_sym_eig") {
  std::mt19937_64 rng(12);
  SUBCASE("identity overlap reproduces sym_eig") {
    const SymMatrix a(oracle::random_symmetric(rng, 5));
    const SpectralPair p = sym_eig(a);
    const SpectralPair q = gen_sym_eig(a, SymMatrix::identity(5));
    CHECK((p.eps - q.eps).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p.gamma - q.gamma).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("diagonal pair") {
    Vector a(2), b(2);
    a << 2, 6;
    b << 1, 2;
    const SpectralPair p = gen_sym_eig(SymMatrix::diagonal(a), SymMatrix::diagonal(b));
    CHECK(p.eps(0) == doctest::Approx(2.0));
    CHECK(p.eps(1) == doctest::Approx(3.0));
    CHECK(p.sigma(0) == doctest::Approx(1.0));
    CHECK(p.sigma(1) == doctest::Approx(1.0));
  }
  SUBCASE("random SPD pairs: det(A - eps B) vanishes") {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix a = oracle::random_symmetric(rng, 4);
      const Matrix b = oracle::random_spd(rng, 4);
      const SpectralPair p = gen_sym_eig(SymMatrix(a), SymMatrix(b));
      for (Index i = 0; i < 4; ++i) {
        const double d = oracle::laplace_det(Matrix(a - p.eps(i) * b));
        CHECK(std::abs(d) <= 1e-8);
        CHECK(p.eps(i) == doctest::Approx(p.eta(i) / p.sigma(i)).epsilon(1e-10));
      }
      CHECK(max_offdiag_ratio(p.gamma, a) <= 1e-10);
      CHECK(max_offdiag_ratio(p.gamma, b) <= 1e-10);
      CHECK((p.sigma.array() - 1.0).abs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("overlap not SPD") {
    Vector b(2);
    b << 1, -1;
    try {
      gen_sym_eig(SymMatrix::identity(2), SymMatrix::diagonal(b));
      FAIL("expected NotSpd");
    } catch (const NumericalError& e) {
      CHECK(e.kind() == ErrorKind::NotSpd);
      CHECK(std::string(e.what()).find("overlap not SPD") != std::string::npos);
    }
    CHECK_FALSE(is_spd(SymMatrix::diagonal(b)));
  }
  SUBCASE("column rescaling") {
    const Matrix a = oracle::random_symmetric(rng, 4);
    const Matrix b = oracle::random_spd(rng, 4);
    SpectralPair p = gen_sym_eig(SymMatrix(a), SymMatrix(b));
    const SpectralPair orig = p;
    rescale_column(p, 2, 3.0);
    CHECK(p.sigma(2) == doctest::Approx(9.0 * orig.sigma(2)));
    CHECK(p.eta(2) == doctest::Approx(9.0 * orig.eta(2)));
    CHECK(p.eta(2) / p.sigma(2) == doctest::Approx(orig.eps(2)));
    const Matrix g = p.gamma;
    CHECK((g.transpose() * b * g).diagonal()(2) == doctest::Approx(p.sigma(2)));
  }
}

TEST_CASE("Cauchy interlacing of principal submatrices") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracle::random_symmetric(rng, 6);
    const Vector eps = sym_eig(SymMatrix(a)).eps;
    for (Index n = 0; n < 6; ++n) {
      const Vector sub = sym_eig(SymMatrix(delete_row_col(a, n, n))).eps;
      for (Index i = 0; i < 5; ++i) {
        CHECK(eps(i) <= sub(i) + 1e-12);
        CHECK(sub(i) <= eps(i + 1) + 1e-12);
      }
    }
  }
}

TEST_CASE("delete_row_col index map") {
  Matrix a(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) a(i, j) = 3.0 * i + j;
  Matrix expect(2, 2);
  expect << 3, 5, 6, 8;
  CHECK(delete_row_col(a, 0, 1) == expect);
  CHECK(delete_row_col(Matrix(Matrix::Identity(3, 3)), 1, 1) == Matrix(Matrix::Identity(2, 2)));
  Matrix hand(2, 2);
  hand << 0, 0, 0, 1;
  CHECK(delete_row_col(Matrix(Matrix::Identity(3, 3)), 0, 1) == hand);
  try {
    delete_row_col(Matrix(Matrix::Identity(1, 1)), 0, 0);
    FAIL("expected EmptySubmatrix");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::EmptySubmatrix);
    CHECK(std::string(e.what()).find("empty submatrix") != std::string::npos);
  }
}

TEST_CASE("det") {
  CHECK(det(Matrix(Matrix::Identity(6, 6))) == doctest::Approx(1.0));
  Matrix u(3, 3);
  u << 2, 7, 1, 0, -3, 4, 0, 0, 5;
  CHECK(det(u) == doctest::Approx(-30.0));
  Matrix sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK(std::abs(det(sing)) < 1e-14);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(4, 4);
    for (Index i = 0; i < 16; ++i) m.data()[i] = d(rng);
    const double ref = oracle::laplace_det(m);
    CHECK(std::abs(det(m) - ref) <= 1e-10 * std::abs(ref));
  }
}

TEST_CASE("cofactor identity against the inverse") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix c(5, 5);
  for (Index i = 0; i < 25; ++i) c.data()[i] = d(rng);
  const Matrix inv = c.inverse();
  const double full = det(c);
  for (Index n = 0; n < 5; ++n) {
    for (Index m = 0; m < 5; ++m) {
      const double cof = ((n + m) % 2 == 0 ? 1.0 : -1.0) * det(delete_row_col(c, n, m)) / full;
      CHECK(cof == doctest::Approx(inv(m, n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("eig_general") {
  Matrix d(2, 2);
  d << 1, 0, 0, 2;
  auto e = eig_general(d);
  CHECK(e[0] == Complex(1.0, 0.0));
  CHECK(e[1] == Complex(2.0, 0.0));
  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  e = eig_general(nil);
  CHECK(std::abs(e[0]) < 1e-15);
  CHECK(std::abs(e[1]) < 1e-15);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(3, 3);
    for (Index i = 0; i < 9; ++i) m.data()[i] = u(rng);
    Complex prod = 1.0;
    const auto vals = eig_general(m);
    for (const auto& v : vals) prod *= v;
    const double ref = oracle::laplace_det(m);
    CHECK(std::abs(prod - ref) <= 1e-8 * std::abs(ref));
    for (std::size_t i = 1; i < vals.size(); ++i) {
      CHECK((vals[i - 1].real() < vals[i].real() ||
             (vals[i - 1].real() == vals[i].real() && vals[i - 1].imag() <= vals[i].imag())));
    }
  }
}

TEST_CASE("log_det of a large well-conditioned matrix stays finite") {
  const Matrix big = 1e4 * Matrix::Identity(120, 120);
  const LogDet ld = log_det(big);
  CHECK_FALSE(ld.singular);
  CHECK(ld.log_abs == doctest::Approx(120.0 * std::log(1e4)));
  CHECK(ld.phase == Complex(1.0, 0.0));
}
