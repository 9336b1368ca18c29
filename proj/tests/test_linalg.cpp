#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "aluthge/linalg.hpp"
#include "aluthge/sampling.hpp"

using namespace aluthge;
using Catch::Matchers::WithinAbs;

namespace {

CMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

CMatrix diag(std::initializer_list<double> xs) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) m(i, i) = x, ++i;
  return m;
}

}  // namespace

TEST_CASE("herm_eig on a diagonal matrix keeps the basis") {
  const auto e = herm_eig(diag({3, 1}));
  CHECK(e.values(0) == 3.0);
  CHECK(e.values(1) == 1.0);
  CHECK(relative_distance(e.vectors, CMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("herm_eig sorts ascending input descending") {
  const auto e = herm_eig(diag({1, 5, 3}));
  CHECK(e.values(0) == 5.0);
  CHECK(e.values(1) == 3.0);
  CHECK(e.values(2) == 1.0);
}

TEST_CASE("Pauli X has eigenvectors (1, +-1)/sqrt 2") {
  const auto e = herm_eig(m2(0, 1, 1, 0));
  CHECK_THAT(e.values(0), WithinAbs(1.0, 1e-14));
  CHECK_THAT(e.values(1), WithinAbs(-1.0, 1e-14));
  // Eigenvectors are fixed up to phase; compare the spectral projections.
  const CMatrix p_plus = e.vectors.col(0) * e.vectors.col(0).adjoint();
  const CMatrix p_minus = e.vectors.col(1) * e.vectors.col(1).adjoint();
  CHECK(relative_distance(p_plus, CMatrix(m2(0.5, 0.5, 0.5, 0.5))) < 1e-14);
  CHECK(relative_distance(p_minus, CMatrix(m2(0.5, -0.5, -0.5, 0.5))) < 1e-14);
}

TEST_CASE("herm_eig reconstructs and agrees with Eigen's solver") {
  Sampler s(11);
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < 20; ++k) {
      const CMatrix h = s.hermitian_matrix(n);
      const auto e = herm_eig(h);
      const CMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
      CHECK(relative_distance(back, h) < 1e-12);
      CHECK(relative_distance(CMatrix(e.vectors.adjoint() * e.vectors), CMatrix::Identity(n, n)) < 1e-12);
      Eigen::SelfAdjointEigenSolver<CMatrix> ref(h);
      const RVector expected = ref.eigenvalues().reverse();
      CHECK((e.values - expected).norm() <= 1e-12 * std::max(1.0, expected.norm()));
    }
  }
}

TEST_CASE("herm_eig rejects non-Hermitian and non-finite input") {
  CHECK_THROWS_AS(herm_eig(m2(0, 1, 0, 0)), Error);
  CHECK_THROWS_AS(herm_eig(CMatrix::Zero(2, 3)), Error);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    herm_eig(bad);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
  }
}

TEST_CASE("svd of zero and of a nilpotent") {
  const auto z = svd(CMatrix::Zero(3, 3));
  CHECK(z.sigma.norm() == 0.0);
  CHECK(z.rank == 0);

  const auto n = svd(m2(0, 2, 0, 0));
  CHECK_THAT(n.sigma(0), WithinAbs(2.0, 1e-14));
  CHECK_THAT(n.sigma(1), WithinAbs(0.0, 1e-14));
  CHECK(n.rank == 1);
}

TEST_CASE("svd reconstructs random matrices, including rank-deficient ones") {
  Sampler s(5);
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k < 30; ++k) {
      CMatrix m = s.gaussian_matrix(n, n);
      if (k % 3 == 0 && n > 1) m.col(0) = m.col(n - 1) * Complex(0.5, -1.0);
      const auto d = svd(m);
      const CMatrix back = d.u * d.sigma.cast<Complex>().asDiagonal() * d.v.adjoint();
      CHECK(relative_distance(back, m) < 1e-10);
      for (Eigen::Index i = 1; i < n; ++i) CHECK(d.sigma(i - 1) >= d.sigma(i));
      Eigen::JacobiSVD<CMatrix> ref(m);
      CHECK((d.sigma - ref.singularValues()).norm() <= 1e-10 * std::max(1.0, m.norm()));
    }
  }
}

TEST_CASE("psd_power examples") {
  CHECK(relative_distance(psd_power(diag({4, 9}), 0.5), diag({2, 3})) < 1e-14);
  // 0^0 := 0, so t = 0 gives the range projection.
  CHECK(relative_distance(psd_power(diag({4, 0}), 0.0), diag({1, 0})) == 0.0);
  CHECK(relative_distance(psd_power(diag({4, 0}), 1.0), diag({4, 0})) < 1e-15);
  CHECK_THROWS_AS(psd_power(diag({4, 0}), 1.5), Error);
  CHECK_THROWS_AS(psd_power(diag({1, -1}), 0.5), Error);
}

TEST_CASE("psd_power exponents add") {
  Sampler s(3);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index n = 1 + k % 6;
    const CMatrix g = s.gaussian_matrix(n, n);
    const CMatrix p = g * g.adjoint();
    CHECK(relative_distance(CMatrix(psd_power(p, 0.3) * psd_power(p, 0.7)), p) < 1e-10);
  }
}

TEST_CASE("polar decomposition of a diagonal and of a nilpotent") {
  const auto d = polar_decompose(diag({2, -3}));
  CHECK(relative_distance(d.u, diag({1, -1})) < 1e-14);
  CHECK(relative_distance(d.modulus, diag({2, 3})) < 1e-14);

  const auto n = polar_decompose(m2(0, 2, 0, 0));
  CHECK(relative_distance(n.u, CMatrix(m2(0, 1, 0, 0))) < 1e-14);
  CHECK(relative_distance(n.modulus, diag({0, 2})) < 1e-14);
  CHECK(relative_distance(CMatrix(n.u.adjoint() * n.u), diag({0, 1})) < 1e-14);
}

TEST_CASE("polar factors satisfy their defining relations") {
  Sampler s(17);
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k < 100; ++k) {
      CMatrix a = k % 4 ? s.gaussian_matrix(n, n) : s.nilpotent_matrix(n);
      if (k % 5 == 0) a.col(1).setZero();
      const auto p = polar_decompose(a);
      CHECK(relative_distance(CMatrix(p.u * p.modulus), a) < 1e-8);
      CHECK(relative_distance(CMatrix(p.u.adjoint() * p.u), range_projection(p.modulus)) < 1e-8);
    }
  }
}

TEST_CASE("range projection examples") {
  CHECK(relative_distance(range_projection(diag({0, 5})), diag({0, 1})) == 0.0);
  CHECK(range_projection(CMatrix::Zero(3, 3)).norm() == 0.0);
  Sampler s(23);
  for (int k = 0; k < 20; ++k) {
    const CMatrix g = s.gaussian_matrix(4, 2);
    const CMatrix p = range_projection(CMatrix(g * g.adjoint()));
    CHECK_THAT(p.trace().real(), WithinAbs(2.0, 1e-10));
    CHECK(relative_distance(CMatrix(p * p), p) < 1e-10);
  }
}

TEST_CASE("relative distance uses max(1, |x|, |y|)") {
  const CMatrix x = diag({1e6, 0});
  const CMatrix y = diag({1e6 + 1, 0});
  CHECK_THAT(relative_distance(x, y), WithinAbs(1.0 / (1e6 + 1), 1e-18));
  CHECK_THAT(relative_distance(diag({0.0, 0.0}), diag({1e-3, 0.0})), WithinAbs(1e-3, 1e-18));
}

TEST_CASE("tolerance policy validation") {
  Tolerance t;
  CHECK_NOTHROW(t.validate());
  t.eq_tol = -1;
  CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("the routines instantiate for long double") {
  using LMatrix = CMatrixT<long double>;
  LMatrix a(2, 2);
  a << 0.0L, 2.0L, 0.0L, 0.0L;
  const auto p = polar_decompose(a, TolerancePolicy<long double>{});
  CHECK(std::abs(p.modulus(1, 1).real() - 2.0L) < 1e-17L);
  const auto e = herm_eig(LMatrix(a * a.adjoint()), TolerancePolicy<long double>{});
  CHECK(std::abs(e.values(0) - 4.0L) < 1e-16L);
}
