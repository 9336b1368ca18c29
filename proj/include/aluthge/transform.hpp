#pragma once

// The lambda-Aluthge transform Delta_l(a) = |a|^l u |a|^(1-l) and the
// transform-level lemmas: fixed points, kernel, identity, the quasi-normal
// adjoint lemma, the a = pa = ap lemma and the rank-one closed form.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "aluthge/algebra.hpp"
#include "aluthge/error.hpp"
#include "aluthge/linalg.hpp"

namespace aluthge {

/// Exponent in [0, 1]; construction validates.
template <typename Scalar = double>
class LambdaT {
 public:
  explicit LambdaT(Scalar value) : value_(value) {
    if (!(value >= Scalar(0) && value <= Scalar(1))) {
      throw Error(Errc::InvalidArgument, "lambda must lie in [0, 1]");
    }
  }
  Scalar value() const { return value_; }
  bool is_zero() const { return value_ == Scalar(0); }

 private:
  Scalar value_;
};
using Lambda = LambdaT<double>;

/// Delta_l(a) for a square matrix. l = 0 returns a unchanged.
///
/// Evaluated on the SVD a = U S V*: with r the numerical rank,
///   |a|^t = V_r S_r^t V_r*,  u = U_r V_r*,
/// so Delta_l(a) = V_r S_r^l (V_r* U_r) S_r^(1-l) V_r*.
template <typename Derived>
CMatrixT<RealOf<Derived>> aluthge(const Eigen::MatrixBase<Derived>& a,
                                  LambdaT<RealOf<Derived>> lambda,
                                  const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Scalar = RealOf<Derived>;
  using C = std::complex<Scalar>;
  require_square(a);
  require_finite(a);
  if (lambda.is_zero()) return a;

  const SvdT<Scalar> s = svd(a, tol);
  const Eigen::Index r = s.rank;
  const Eigen::Index n = a.rows();
  if (r == 0) return CMatrixT<Scalar>::Zero(n, n);

  const Scalar l = lambda.value();
  RVectorT<Scalar> left(r), right(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    left(i) = std::pow(s.sigma(i), l);
    right(i) = l == Scalar(1) ? Scalar(1) : std::pow(s.sigma(i), Scalar(1) - l);
  }
  const auto vr = s.v.leftCols(r);
  const auto ur = s.u.leftCols(r);
  const CMatrixT<Scalar> core = left.template cast<C>().asDiagonal() * (vr.adjoint() * ur) *
                                right.template cast<C>().asDiagonal();
  return vr * core * vr.adjoint();
}

/// Literal |a|^l u |a|^(1-l) from the polar parts and psd_power; slower, used
/// as an independent route in tests.
template <typename Derived>
CMatrixT<RealOf<Derived>> aluthge_via_polar(const Eigen::MatrixBase<Derived>& a,
                                            LambdaT<RealOf<Derived>> lambda,
                                            const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Scalar = RealOf<Derived>;
  if (lambda.is_zero()) return a;
  const PolarPartsT<Scalar> pp = polar_decompose(a, tol);
  return psd_power(pp.modulus, lambda.value(), tol) * pp.u *
         psd_power(pp.modulus, Scalar(1) - lambda.value(), tol);
}

template <typename Scalar>
AlgElemT<Scalar> aluthge(const AlgElemT<Scalar>& a, LambdaT<Scalar> lambda,
                         const TolerancePolicy<Scalar>& tol = {}) {
  if (lambda.is_zero()) return a;
  return a.map([&](const CMatrixT<Scalar>& b) { return aluthge(b, lambda, tol); });
}

/// ||a(a*a) - (a*a)a||_F / max(1, ||a||^3); the quasi-normality defect.
template <typename Derived>
RealOf<Derived> quasinormal_residual(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = RealOf<Derived>;
  require_square(a);
  const CMatrixT<Scalar> m = a;
  const CMatrixT<Scalar> g = m.adjoint() * m;
  const Scalar nrm = m.norm();
  return (m * g - g * m).norm() / std::max(Scalar(1), nrm * nrm * nrm);
}

template <typename Scalar>
Scalar quasinormal_residual(const AlgElemT<Scalar>& a) {
  const Scalar nrm = a.norm();
  const AlgElemT<Scalar> g = adjoint(a) * a;
  return (a * g - g * a).norm() / std::max(Scalar(1), nrm * nrm * nrm);
}

template <typename Derived>
bool is_quasinormal(const Eigen::MatrixBase<Derived>& a,
                    const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  return quasinormal_residual(a) <= tol.eq_tol;
}

template <typename Scalar>
bool is_quasinormal(const AlgElemT<Scalar>& a, const TolerancePolicy<Scalar>& tol = {}) {
  return quasinormal_residual(a) <= tol.eq_tol;
}

/// Outcome of one lemma evaluation. `holds` is false only when the sample
/// contradicts the lemma; `vacuous` marks implications whose premise failed.
template <typename Scalar = double>
struct LemmaVerdictT {
  bool holds = true;
  bool vacuous = false;
  bool lhs = false;
  bool rhs = false;
  Scalar lhs_residual = 0;
  Scalar rhs_residual = 0;
};
using LemmaVerdict = LemmaVerdictT<double>;

namespace detail {
template <typename Scalar>
void require_positive(LambdaT<Scalar> lambda) {
  if (lambda.is_zero()) throw Error(Errc::InvalidArgument, "lemma needs lambda in (0, 1]");
}
}  // namespace detail

/// a quasi-normal  <=>  Delta_l(a) = a, for l in (0, 1].
/// lhs: quasi-normal; rhs: fixed point.
template <typename Scalar>
LemmaVerdictT<Scalar> check_fixed_point_lemma(const AlgElemT<Scalar>& a, LambdaT<Scalar> lambda,
                                              const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_positive(lambda);
  LemmaVerdictT<Scalar> v;
  v.lhs_residual = quasinormal_residual(a);
  v.rhs_residual = relative_distance(aluthge(a, lambda, tol), a);
  v.lhs = v.lhs_residual <= tol.eq_tol;
  v.rhs = v.rhs_residual <= tol.eq_tol;
  v.holds = v.lhs == v.rhs;
  return v;
}

/// Delta_l(ap) = a  <=>  a = pa = ap and a quasi-normal.
/// lhs: Delta_l(ap) = a; rhs: support and quasi-normality conditions.
template <typename Scalar>
LemmaVerdictT<Scalar> check_ap_lemma(const AlgElemT<Scalar>& a, const AlgElemT<Scalar>& p,
                                     LambdaT<Scalar> lambda,
                                     const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_positive(lambda);
  detail::require_projection(p, tol);
  LemmaVerdictT<Scalar> v;
  v.lhs_residual = relative_distance(aluthge(AlgElemT<Scalar>(a * p), lambda, tol), a);
  v.rhs_residual = std::max({relative_distance(a, AlgElemT<Scalar>(p * a)),
                             relative_distance(a, AlgElemT<Scalar>(a * p)),
                             quasinormal_residual(a)});
  v.lhs = v.lhs_residual <= tol.eq_tol;
  v.rhs = v.rhs_residual <= tol.eq_tol;
  v.holds = v.lhs == v.rhs;
  return v;
}

/// Delta_l(a) = 1  =>  a = 1, plus Delta_l(1) = 1. Premise failure is vacuous.
template <typename Scalar>
LemmaVerdictT<Scalar> check_identity_lemma(const AlgElemT<Scalar>& a, LambdaT<Scalar> lambda,
                                           const TolerancePolicy<Scalar>& tol = {}) {
  const auto one = AlgElemT<Scalar>::identity(a.algebra());
  LemmaVerdictT<Scalar> v;
  const Scalar unit_residual = relative_distance(aluthge(one, lambda, tol), one);
  v.lhs_residual = relative_distance(aluthge(a, lambda, tol), one);
  v.rhs_residual = relative_distance(a, one);
  v.lhs = v.lhs_residual <= tol.eq_tol;
  v.rhs = v.rhs_residual <= Scalar(10) * tol.eq_tol;
  v.vacuous = !v.lhs;
  v.holds = unit_residual <= tol.eq_tol && (!v.lhs || v.rhs);
  return v;
}

/// For quasi-normal a: Delta_l(a*) = a  =>  a* = a.
template <typename Scalar>
LemmaVerdictT<Scalar> check_qnormal_adjoint_lemma(const AlgElemT<Scalar>& a,
                                                  LambdaT<Scalar> lambda,
                                                  const TolerancePolicy<Scalar>& tol = {}) {
  if (!is_quasinormal(a, tol)) throw Error(Errc::NotQuasiNormal, "adjoint lemma input");
  LemmaVerdictT<Scalar> v;
  const AlgElemT<Scalar> as = adjoint(a);
  v.lhs_residual = relative_distance(aluthge(as, lambda, tol), a);
  v.rhs_residual = relative_distance(as, a);
  v.lhs = v.lhs_residual <= tol.eq_tol;
  v.rhs = v.rhs_residual <= Scalar(10) * tol.eq_tol;
  v.vacuous = !v.lhs;
  v.holds = !v.lhs || v.rhs;
  return v;
}

/// Closed form for rank-one inputs: Delta_l(x y*) = (<x|y> / |y|^2) y y*,
/// with <x|y> = y* x linear in the first slot. Independent of l in (0, 1].
template <typename DerivedX, typename DerivedY>
CMatrixT<RealOf<DerivedX>> rank_one_aluthge(const Eigen::MatrixBase<DerivedX>& x,
                                            const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = RealOf<DerivedX>;
  if (x.size() != y.size()) throw Error(Errc::DimensionMismatch, "rank-one factors differ in size");
  const Scalar ny = y.squaredNorm();
  if (ny == Scalar(0)) throw Error(Errc::ZeroVector, "y must be nonzero");
  const std::complex<Scalar> inner = y.dot(x);  // conjugates y
  return (inner / ny) * (y * y.adjoint());
}

/// [a, Delta(a), Delta^2(a), ...], steps + 1 entries.
template <typename Scalar>
std::vector<AlgElemT<Scalar>> aluthge_orbit(const AlgElemT<Scalar>& a, LambdaT<Scalar> lambda,
                                            int steps, const TolerancePolicy<Scalar>& tol = {}) {
  if (steps < 0) throw Error(Errc::InvalidArgument, "steps must be nonnegative");
  std::vector<AlgElemT<Scalar>> orbit{a};
  orbit.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k < steps; ++k) orbit.push_back(aluthge(orbit.back(), lambda, tol));
  return orbit;
}

}  // namespace aluthge
