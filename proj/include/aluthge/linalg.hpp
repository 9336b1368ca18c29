#pragma once

// Dense complex-matrix primitives: Hermitian eigendecomposition (cyclic
// Jacobi), SVD, PSD fractional powers, polar decomposition and range
// projections. Everything is templated on the real scalar type; the
// double-precision aliases are what the rest of the library uses.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "aluthge/error.hpp"

namespace aluthge {

template <typename Scalar>
using CMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

/// Tolerances shared by every numerical predicate in the library.
///
/// eq_tol   relative Frobenius tolerance for matrix equality
/// rank_tol singular values at or below rank_tol * sigma_max count as zero
/// psd_clip negative eigenvalues above -psd_clip * |m| are clamped to zero
template <typename Scalar = double>
struct TolerancePolicy {
  Scalar eq_tol = Scalar(1e-9);
  Scalar rank_tol = Scalar(1e-10);
  Scalar psd_clip = Scalar(1e-12);

  void validate() const {
    auto ok = [](Scalar v) { return v > Scalar(0) && v < Scalar(1); };
    if (!ok(eq_tol) || !ok(rank_tol) || !ok(psd_clip)) {
      throw Error(Errc::InvalidArgument, "tolerances must lie in (0, 1)");
    }
  }

  /// Copy used for input-shape preconditions: eq_tol is floored at a
  /// round-off level, so a tiny eq_tol turns verdicts into failures
  /// instead of rejecting products such as a* a as non-Hermitian.
  TolerancePolicy precondition() const {
    TolerancePolicy out = *this;
    out.eq_tol = std::max(eq_tol, Scalar(1024) * std::numeric_limits<Scalar>::epsilon());
    return out;
  }
};
using Tolerance = TolerancePolicy<double>;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m) {
  if (!m.allFinite()) throw Error(Errc::NonFinite, "matrix has NaN or Inf entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) {
    throw Error(Errc::NotSquare, std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

/// ||x - y||_F / max(1, ||x||_F, ||y||_F)
template <typename DerivedA, typename DerivedB>
RealOf<DerivedA> relative_distance(const Eigen::MatrixBase<DerivedA>& x,
                                   const Eigen::MatrixBase<DerivedB>& y) {
  using Scalar = RealOf<DerivedA>;
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(Errc::DimensionMismatch, "relative_distance on differently shaped matrices");
  }
  const Scalar scale = std::max({Scalar(1), Scalar(x.norm()), Scalar(y.norm())});
  return (x - y).norm() / scale;
}

template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y,
                  const TolerancePolicy<RealOf<DerivedA>>& tol = {}) {
  return relative_distance(x, y) <= tol.eq_tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  return m.rows() == m.cols() && approx_equal(m, m.adjoint(), tol);
}

template <typename Scalar>
struct HermEig {
  RVectorT<Scalar> values;    // descending
  CMatrixT<Scalar> vectors;   // unitary, column i pairs with values(i)
};

template <typename Scalar>
struct SvdT {
  CMatrixT<Scalar> u;       // rows x cols; columns past the numerical rank are zero
  RVectorT<Scalar> sigma;   // descending, nonnegative
  CMatrixT<Scalar> v;       // cols x cols, unitary
  Eigen::Index rank = 0;    // #{sigma_i > rank_tol * sigma_max}
};

template <typename Scalar>
struct PolarPartsT {
  CMatrixT<Scalar> u;        // partial isometry, u*u = range projection of modulus
  CMatrixT<Scalar> modulus;  // |a| = (a*a)^{1/2}
};

using Svd = SvdT<double>;
using PolarParts = PolarPartsT<double>;

namespace detail {

template <typename Scalar>
std::vector<Eigen::Index> descending_order(const RVectorT<Scalar>& values) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return values(i) > values(j); });
  return idx;
}

// Cyclic Jacobi on an exactly Hermitian matrix. Row-major (p, q) sweep order
// is fixed so results are reproducible bit for bit.
template <typename Scalar>
HermEig<Scalar> jacobi_eig(CMatrixT<Scalar> a) {
  using C = std::complex<Scalar>;
  const Eigen::Index n = a.rows();
  CMatrixT<Scalar> v = CMatrixT<Scalar>::Identity(n, n);
  const Scalar scale = a.norm();

  if (n > 1 && scale > Scalar(0)) {
    const Scalar threshold = std::numeric_limits<Scalar>::epsilon() * scale;
    const long max_sweeps = 100L * static_cast<long>(n * n);
    bool converged = false;
    for (long sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
      converged = true;
      for (Eigen::Index p = 0; p + 1 < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          if (std::abs(a(p, q)) <= threshold) continue;
          converged = false;
          Eigen::JacobiRotation<C> rot;
          rot.makeJacobi(std::real(a(p, p)), a(p, q), std::real(a(q, q)));
          a.applyOnTheLeft(p, q, rot.adjoint());
          a.applyOnTheRight(p, q, rot);
          v.applyOnTheRight(p, q, rot);
          a(p, q) = C(0);
          a(q, p) = C(0);
          a(p, p) = C(std::real(a(p, p)));
          a(q, q) = C(std::real(a(q, q)));
        }
      }
    }
    if (!converged) {
      throw Error(Errc::NoConvergence, "Jacobi sweep cap reached for n=" + std::to_string(n));
    }
  }

  RVectorT<Scalar> diag = a.diagonal().real();
  const auto order = descending_order<Scalar>(diag);
  HermEig<Scalar> out{RVectorT<Scalar>(n), CMatrixT<Scalar>(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = diag(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

// Clamps small negative eigenvalues of a nominally PSD spectrum to zero.
template <typename Scalar>
void clamp_psd(RVectorT<Scalar>& values, const TolerancePolicy<Scalar>& tol) {
  const Scalar mag = values.size() ? values.cwiseAbs().maxCoeff() : Scalar(0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -tol.psd_clip * mag) {
      throw Error(Errc::NotPSD, "eigenvalue " + std::to_string(static_cast<double>(values(i))) +
                                    " below -psd_clip*|m|");
    }
    values(i) = std::max(values(i), Scalar(0));
  }
}

// V diag(f(lambda_i)) V*
template <typename Scalar, typename F>
CMatrixT<Scalar> spectral_apply(const CMatrixT<Scalar>& vectors, const RVectorT<Scalar>& values,
                                F&& f) {
  RVectorT<Scalar> mapped(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) mapped(i) = f(values(i));
  return vectors * mapped.template cast<std::complex<Scalar>>().asDiagonal() * vectors.adjoint();
}

}  // namespace detail

/// Eigendecomposition m = V diag(lambda) V* of a Hermitian matrix, eigenvalues
/// descending (stable with respect to the Jacobi diagonal order).
template <typename Derived>
HermEig<RealOf<Derived>> herm_eig(const Eigen::MatrixBase<Derived>& m,
                                  const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Scalar = RealOf<Derived>;
  require_square(m);
  require_finite(m);
  CMatrixT<Scalar> a = m;
  if (!approx_equal(a, a.adjoint(), tol.precondition())) {
    throw Error(Errc::NotHermitian, "herm_eig input fails the symmetry check");
  }
  CMatrixT<Scalar> sym = (a + a.adjoint()) / Scalar(2);
  return detail::jacobi_eig<Scalar>(std::move(sym));
}

/// m = U diag(sigma) V*. V comes from the Jacobi eigendecomposition of m*m;
/// U is recovered column-wise as m v_i / sigma_i and then polished with
/// one-sided Jacobi rotations so its nonzero columns are orthonormal to
/// working precision. Columns of U beyond the numerical rank are zero.
template <typename Derived>
SvdT<RealOf<Derived>> svd(const Eigen::MatrixBase<Derived>& m,
                          const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Scalar = RealOf<Derived>;
  using C = std::complex<Scalar>;
  require_finite(m);
  const CMatrixT<Scalar> a = m;
  const Eigen::Index n = a.cols();

  HermEig<Scalar> gram = herm_eig(CMatrixT<Scalar>(a.adjoint() * a), tol);
  CMatrixT<Scalar> v = std::move(gram.vectors);
  CMatrixT<Scalar> b = a * v;

  // One-sided Jacobi polish on the columns of b = a v.
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const long max_sweeps = 100L * static_cast<long>(n * n) + 1;
  bool clean = false;
  for (long sweep = 0; sweep < max_sweeps && !clean; ++sweep) {
    clean = true;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar np = b.col(p).squaredNorm();
        const Scalar nq = b.col(q).squaredNorm();
        const C cross = b.col(p).dot(b.col(q));
        if (std::abs(cross) <= Scalar(n) * eps * std::sqrt(np * nq)) continue;
        clean = false;
        Eigen::JacobiRotation<C> rot;
        rot.makeJacobi(np, cross, nq);
        b.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
      }
    }
  }
  if (!clean) throw Error(Errc::NoConvergence, "SVD polish did not converge");

  RVectorT<Scalar> norms(n);
  for (Eigen::Index i = 0; i < n; ++i) norms(i) = b.col(i).norm();
  const auto order = detail::descending_order<Scalar>(norms);

  SvdT<Scalar> out{CMatrixT<Scalar>::Zero(a.rows(), n), RVectorT<Scalar>(n), CMatrixT<Scalar>(n, n), 0};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.sigma(k) = norms(src);
    out.v.col(k) = v.col(src);
  }
  const Scalar cut = n ? tol.rank_tol * out.sigma(0) : Scalar(0);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (out.sigma(k) > cut && out.sigma(k) > Scalar(0)) {
      out.u.col(k) = b.col(order[static_cast<std::size_t>(k)]) / out.sigma(k);
      ++out.rank;
    }
  }
  return out;
}

/// m^t for PSD m and t in [0, 1], with 0^t := 0 for every t. In particular
/// m^0 is the range projection of m, not the identity.
template <typename Derived>
CMatrixT<RealOf<Derived>> psd_power(const Eigen::MatrixBase<Derived>& m, RealOf<Derived> t,
                                    const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Scalar = RealOf<Derived>;
  if (!(t >= Scalar(0) && t <= Scalar(1))) {
    throw Error(Errc::InvalidArgument, "psd_power exponent outside [0, 1]");
  }
  HermEig<Scalar> eig = herm_eig(m, tol);
  detail::clamp_psd(eig.values, tol);
  const Scalar top = eig.values.size() ? eig.values(0) : Scalar(0);
  const Scalar cut = tol.rank_tol * top;
  return detail::spectral_apply(eig.vectors, eig.values, [&](Scalar lambda) {
    if (!(lambda > cut) || lambda <= Scalar(0)) return Scalar(0);
    return t == Scalar(0) ? Scalar(1) : std::pow(lambda, t);
  });
}

/// Orthogonal projection onto the range of a PSD matrix.
template <typename Derived>
CMatrixT<RealOf<Derived>> range_projection(const Eigen::MatrixBase<Derived>& m,
                                           const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  return psd_power(m, RealOf<Derived>(0), tol);
}

/// a = u |a| with u a partial isometry whose initial projection u*u is the
/// range projection of |a|. u is never extended to a unitary.
template <typename Derived>
PolarPartsT<RealOf<Derived>> polar_decompose(const Eigen::MatrixBase<Derived>& a,
                                             const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Scalar = RealOf<Derived>;
  require_square(a);
  const SvdT<Scalar> s = svd(a, tol);
  PolarPartsT<Scalar> out;
  out.u = s.u * s.v.adjoint();
  out.modulus = s.v * s.sigma.template cast<std::complex<Scalar>>().asDiagonal() * s.v.adjoint();
  return out;
}

}  // namespace aluthge
