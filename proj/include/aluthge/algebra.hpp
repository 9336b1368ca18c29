#pragma once

// Finite-dimensional von Neumann algebras modelled as direct sums of full
// matrix blocks M_{n_1} + ... + M_{n_K}, their elements, and the lattice /
// Jordan-algebraic predicates used by the preserver checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "aluthge/error.hpp"
#include "aluthge/linalg.hpp"

namespace aluthge {

class VNAlgebra {
 public:
  explicit VNAlgebra(std::vector<Eigen::Index> block_dims) : dims_(std::move(block_dims)) {
    if (dims_.empty()) throw Error(Errc::InvalidArgument, "algebra needs at least one block");
    for (Eigen::Index d : dims_) {
      if (d < 1) throw Error(Errc::InvalidArgument, "block dimensions must be positive");
    }
  }
  VNAlgebra(std::initializer_list<Eigen::Index> dims)
      : VNAlgebra(std::vector<Eigen::Index>(dims)) {}

  const std::vector<Eigen::Index>& block_dims() const { return dims_; }
  std::size_t num_blocks() const { return dims_.size(); }
  Eigen::Index block_dim(std::size_t k) const {
    if (k >= dims_.size()) throw Error(Errc::BadIndex, "block index " + std::to_string(k));
    return dims_[k];
  }
  Eigen::Index total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), Eigen::Index{0}); }
  Eigen::Index max_block_dim() const { return *std::max_element(dims_.begin(), dims_.end()); }

  bool has_abelian_summand() const {
    return std::any_of(dims_.begin(), dims_.end(), [](Eigen::Index d) { return d == 1; });
  }
  bool is_abelian() const {
    return std::all_of(dims_.begin(), dims_.end(), [](Eigen::Index d) { return d == 1; });
  }

  /// "2,2" style label, also the CLI profile syntax.
  std::string label() const {
    std::string out;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(dims_[k]);
    }
    return out;
  }

  friend bool operator==(const VNAlgebra&, const VNAlgebra&) = default;

 private:
  std::vector<Eigen::Index> dims_;
};

template <typename Scalar = double>
class AlgElemT {
 public:
  using Matrix = CMatrixT<Scalar>;
  using C = std::complex<Scalar>;

  AlgElemT(VNAlgebra algebra, std::vector<Matrix> blocks)
      : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    if (blocks_.size() != algebra_.num_blocks()) {
      throw Error(Errc::AlgebraMismatch, "expected " + std::to_string(algebra_.num_blocks()) +
                                             " blocks, got " + std::to_string(blocks_.size()));
    }
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Eigen::Index n = algebra_.block_dim(k);
      if (blocks_[k].rows() != n || blocks_[k].cols() != n) {
        throw Error(Errc::AlgebraMismatch, "block " + std::to_string(k) + " is not " +
                                               std::to_string(n) + "x" + std::to_string(n));
      }
      require_finite(blocks_[k]);
    }
  }

  static AlgElemT scalar(const VNAlgebra& algebra, C value) {
    std::vector<Matrix> blocks;
    for (Eigen::Index n : algebra.block_dims()) blocks.push_back(value * Matrix::Identity(n, n));
    return AlgElemT(algebra, std::move(blocks));
  }
  static AlgElemT zero(const VNAlgebra& algebra) { return scalar(algebra, C(0)); }
  static AlgElemT identity(const VNAlgebra& algebra) { return scalar(algebra, C(1)); }

  /// Element supported in block k, zero elsewhere.
  static AlgElemT in_block(const VNAlgebra& algebra, std::size_t k, Matrix m) {
    AlgElemT out = zero(algebra);
    algebra.block_dim(k);
    out.set_block(k, std::move(m));
    return out;
  }

  const VNAlgebra& algebra() const { return algebra_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(std::size_t k) const {
    algebra_.block_dim(k);
    return blocks_[k];
  }
  void set_block(std::size_t k, Matrix m) {
    const Eigen::Index n = algebra_.block_dim(k);
    if (m.rows() != n || m.cols() != n) throw Error(Errc::AlgebraMismatch, "set_block size");
    require_finite(m);
    blocks_[k] = std::move(m);
  }
  std::size_t num_blocks() const { return blocks_.size(); }

  /// Frobenius norm over all blocks.
  Scalar norm() const {
    Scalar sq = 0;
    for (const auto& b : blocks_) sq += b.squaredNorm();
    return std::sqrt(sq);
  }

  /// Applies f to every block.
  template <typename F>
  AlgElemT map(F&& f) const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back(f(b));
    return AlgElemT(algebra_, std::move(out));
  }

  /// Applies f blockwise to (this, other).
  template <typename F>
  AlgElemT zip(const AlgElemT& other, F&& f) const {
    require_same_algebra(other);
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) out.push_back(f(blocks_[k], other.blocks_[k]));
    return AlgElemT(algebra_, std::move(out));
  }

  void require_same_algebra(const AlgElemT& other) const {
    if (!(algebra_ == other.algebra_)) {
      throw Error(Errc::AlgebraMismatch,
                  "[" + algebra_.label() + "] vs [" + other.algebra_.label() + "]");
    }
  }

  friend AlgElemT operator+(const AlgElemT& a, const AlgElemT& b) {
    return a.zip(b, [](const Matrix& x, const Matrix& y) -> Matrix { return x + y; });
  }
  friend AlgElemT operator-(const AlgElemT& a, const AlgElemT& b) {
    return a.zip(b, [](const Matrix& x, const Matrix& y) -> Matrix { return x - y; });
  }
  friend AlgElemT operator*(const AlgElemT& a, const AlgElemT& b) {
    return a.zip(b, [](const Matrix& x, const Matrix& y) -> Matrix { return x * y; });
  }
  friend AlgElemT operator*(C alpha, const AlgElemT& a) {
    return a.map([&](const Matrix& x) -> Matrix { return alpha * x; });
  }
  friend AlgElemT operator*(Scalar alpha, const AlgElemT& a) { return C(alpha) * a; }
  friend AlgElemT operator-(const AlgElemT& a) {
    return a.map([](const Matrix& x) -> Matrix { return -x; });
  }
  /// Exact (bitwise) equality; use approx_equal for numerics.
  friend bool operator==(const AlgElemT& a, const AlgElemT& b) {
    if (!(a.algebra_ == b.algebra_)) return false;
    for (std::size_t k = 0; k < a.blocks_.size(); ++k) {
      if (a.blocks_[k] != b.blocks_[k]) return false;
    }
    return true;
  }

 private:
  VNAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

using AlgElem = AlgElemT<double>;

// ---------------------------------------------------------------------------
// Arithmetic

template <typename Scalar>
AlgElemT<Scalar> add(const AlgElemT<Scalar>& a, const AlgElemT<Scalar>& b) { return a + b; }
template <typename Scalar>
AlgElemT<Scalar> mul(const AlgElemT<Scalar>& a, const AlgElemT<Scalar>& b) { return a * b; }
template <typename Scalar>
AlgElemT<Scalar> scale(std::complex<Scalar> alpha, const AlgElemT<Scalar>& a) { return alpha * a; }

template <typename Scalar>
AlgElemT<Scalar> adjoint(const AlgElemT<Scalar>& a) {
  return a.map([](const CMatrixT<Scalar>& x) -> CMatrixT<Scalar> { return x.adjoint(); });
}

/// Entrywise complex conjugate in the standard matrix-unit basis.
template <typename Scalar>
AlgElemT<Scalar> conjugate(const AlgElemT<Scalar>& a) {
  return a.map([](const CMatrixT<Scalar>& x) -> CMatrixT<Scalar> { return x.conjugate(); });
}

template <typename Scalar>
AlgElemT<Scalar> transpose(const AlgElemT<Scalar>& a) {
  return a.map([](const CMatrixT<Scalar>& x) -> CMatrixT<Scalar> { return x.transpose(); });
}

/// Unnormalized trace summed over blocks.
template <typename Scalar>
std::complex<Scalar> trace(const AlgElemT<Scalar>& a) {
  std::complex<Scalar> t = 0;
  for (const auto& b : a.blocks()) t += b.trace();
  return t;
}

/// a o b = (ab + ba) / 2
template <typename Scalar>
AlgElemT<Scalar> jordan(const AlgElemT<Scalar>& a, const AlgElemT<Scalar>& b) {
  return Scalar(0.5) * (a * b + b * a);
}

/// {a, b, c} = (a b* c + c b* a) / 2
template <typename Scalar>
AlgElemT<Scalar> triple(const AlgElemT<Scalar>& a, const AlgElemT<Scalar>& b,
                        const AlgElemT<Scalar>& c) {
  const AlgElemT<Scalar> bs = adjoint(b);
  return Scalar(0.5) * (a * bs * c + c * bs * a);
}

/// a = x + i y with x, y Hermitian.
template <typename Scalar>
std::pair<AlgElemT<Scalar>, AlgElemT<Scalar>> hermitian_part(const AlgElemT<Scalar>& a) {
  using C = std::complex<Scalar>;
  const AlgElemT<Scalar> as = adjoint(a);
  return {Scalar(0.5) * (a + as), C(0, -0.5) * (a - as)};
}

// ---------------------------------------------------------------------------
// Comparisons

template <typename Scalar>
Scalar relative_distance(const AlgElemT<Scalar>& x, const AlgElemT<Scalar>& y) {
  x.require_same_algebra(y);
  const Scalar scale = std::max({Scalar(1), x.norm(), y.norm()});
  return (x - y).norm() / scale;
}

template <typename Scalar>
bool approx_equal(const AlgElemT<Scalar>& x, const AlgElemT<Scalar>& y,
                  const TolerancePolicy<Scalar>& tol = {}) {
  return relative_distance(x, y) <= tol.eq_tol;
}

template <typename Scalar>
bool is_zero(const AlgElemT<Scalar>& x, const TolerancePolicy<Scalar>& tol = {}) {
  return x.norm() <= tol.eq_tol;
}

template <typename Scalar>
bool is_hermitian(const AlgElemT<Scalar>& a, const TolerancePolicy<Scalar>& tol = {}) {
  return approx_equal(a, adjoint(a), tol);
}

template <typename Scalar>
bool is_unitary(const AlgElemT<Scalar>& v, const TolerancePolicy<Scalar>& tol = {}) {
  const auto one = AlgElemT<Scalar>::identity(v.algebra());
  return approx_equal(adjoint(v) * v, one, tol) && approx_equal(v * adjoint(v), one, tol);
}

// ---------------------------------------------------------------------------
// Projection lattice

template <typename Scalar>
bool is_projection(const AlgElemT<Scalar>& p, const TolerancePolicy<Scalar>& tol = {}) {
  return approx_equal(p, adjoint(p), tol) && approx_equal(p * p, p, tol);
}

namespace detail {
template <typename Scalar>
void require_projection(const AlgElemT<Scalar>& p, const TolerancePolicy<Scalar>& tol) {
  if (!is_projection(p, tol.precondition())) throw Error(Errc::NotProjection, "argument is not a projection");
}
template <typename Scalar>
void require_hermitian(const AlgElemT<Scalar>& a, const TolerancePolicy<Scalar>& tol) {
  if (!is_hermitian(a, tol.precondition())) throw Error(Errc::NotHermitian, "argument is not Hermitian");
}
}  // namespace detail

/// p <= q iff pq = p.
template <typename Scalar>
bool proj_leq(const AlgElemT<Scalar>& p, const AlgElemT<Scalar>& q,
              const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_projection(p, tol);
  detail::require_projection(q, tol);
  return approx_equal(p * q, p, tol);
}

/// p perp q iff pq = 0.
template <typename Scalar>
bool proj_orthogonal(const AlgElemT<Scalar>& p, const AlgElemT<Scalar>& q,
                     const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_projection(p, tol);
  detail::require_projection(q, tol);
  return is_zero(p * q, tol);
}

/// Rank of a projection, read off its trace.
template <typename Scalar>
Eigen::Index projection_rank(const AlgElemT<Scalar>& p, const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_projection(p, tol);
  return static_cast<Eigen::Index>(std::llround(static_cast<double>(std::real(trace(p)))));
}

/// Minimal projections of a direct sum of full matrix algebras are exactly
/// the rank-one projections living in a single block.
template <typename Scalar>
bool is_minimal_projection(const AlgElemT<Scalar>& p, const TolerancePolicy<Scalar>& tol = {}) {
  if (!is_projection(p, tol)) return false;
  std::size_t support = 0;
  for (const auto& b : p.blocks()) {
    if (b.norm() > tol.eq_tol) ++support;
  }
  return support == 1 && projection_rank(p, tol) == 1;
}

// ---------------------------------------------------------------------------
// Partial isometries

template <typename Scalar>
bool is_partial_isometry(const AlgElemT<Scalar>& e, const TolerancePolicy<Scalar>& tol = {}) {
  return approx_equal(e * adjoint(e) * e, e, tol);
}

namespace detail {
template <typename Scalar>
void require_partial_isometry(const AlgElemT<Scalar>& e, const TolerancePolicy<Scalar>& tol) {
  if (!is_partial_isometry(e, tol.precondition())) {
    throw Error(Errc::NotPartialIsometry, "argument is not a partial isometry");
  }
}
}  // namespace detail

/// e perp v iff e v* = v* e = 0.
template <typename Scalar>
bool pi_orthogonal(const AlgElemT<Scalar>& e, const AlgElemT<Scalar>& v,
                   const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_partial_isometry(e, tol);
  detail::require_partial_isometry(v, tol);
  const auto vs = adjoint(v);
  return is_zero(e * vs, tol) && is_zero(vs * e, tol);
}

/// e <= v iff v - e is a partial isometry orthogonal to e.
template <typename Scalar>
bool pi_leq(const AlgElemT<Scalar>& e, const AlgElemT<Scalar>& v,
            const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_partial_isometry(e, tol);
  detail::require_partial_isometry(v, tol);
  const auto diff = v - e;
  return is_partial_isometry(diff, tol) && pi_orthogonal(diff, e, tol);
}

/// Equivalent form of pi_leq: e*e <= v*v and e = v e*e.
///
/// The range conditions alone (ee* <= vv*, e*e <= v*v) are necessary but not
/// sufficient: e = -v satisfies both. See pi_leq_range_conditions.
template <typename Scalar>
bool pi_leq_via_initial_projection(const AlgElemT<Scalar>& e, const AlgElemT<Scalar>& v,
                                   const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_partial_isometry(e, tol);
  detail::require_partial_isometry(v, tol);
  const auto init = adjoint(e) * e;
  return proj_leq(init, adjoint(v) * v, tol) && approx_equal(e, v * init, tol);
}

/// ee* <= vv* and e*e <= v*v; implied by e <= v.
template <typename Scalar>
bool pi_leq_range_conditions(const AlgElemT<Scalar>& e, const AlgElemT<Scalar>& v,
                             const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_partial_isometry(e, tol);
  detail::require_partial_isometry(v, tol);
  const auto es = adjoint(e);
  const auto vs = adjoint(v);
  return proj_leq(e * es, v * vs, tol) && proj_leq(es * e, vs * v, tol);
}

// ---------------------------------------------------------------------------
// Matrix units and the center

template <typename Scalar = double>
struct MatrixUnitSystemT {
  std::size_t block_index = 0;
  Eigen::Index n = 0;
  std::vector<AlgElemT<Scalar>> units;  // row-major n x n grid

  const AlgElemT<Scalar>& operator()(Eigen::Index i, Eigen::Index j) const {
    if (i < 0 || j < 0 || i >= n || j >= n) throw Error(Errc::BadIndex, "matrix unit index");
    return units[static_cast<std::size_t>(i * n + j)];
  }
};
using MatrixUnitSystem = MatrixUnitSystemT<double>;

/// Standard units E_ij embedded in block `block_index`.
template <typename Scalar = double>
MatrixUnitSystemT<Scalar> matrix_units(const VNAlgebra& algebra, std::size_t block_index) {
  if (block_index >= algebra.num_blocks()) {
    throw Error(Errc::BadIndex, "no block " + std::to_string(block_index));
  }
  MatrixUnitSystemT<Scalar> sys;
  sys.block_index = block_index;
  sys.n = algebra.block_dim(block_index);
  for (Eigen::Index i = 0; i < sys.n; ++i) {
    for (Eigen::Index j = 0; j < sys.n; ++j) {
      CMatrixT<Scalar> e = CMatrixT<Scalar>::Zero(sys.n, sys.n);
      e(i, j) = 1;
      sys.units.push_back(AlgElemT<Scalar>::in_block(algebra, block_index, std::move(e)));
    }
  }
  return sys;
}

/// Block-identity indicators; central projections are their 0/1 combinations.
template <typename Scalar = double>
std::vector<AlgElemT<Scalar>> center_basis(const VNAlgebra& algebra) {
  std::vector<AlgElemT<Scalar>> out;
  for (std::size_t k = 0; k < algebra.num_blocks(); ++k) {
    const Eigen::Index n = algebra.block_dim(k);
    out.push_back(AlgElemT<Scalar>::in_block(algebra, k, CMatrixT<Scalar>::Identity(n, n)));
  }
  return out;
}

template <typename Scalar>
bool is_central(const AlgElemT<Scalar>& a, const TolerancePolicy<Scalar>& tol = {}) {
  for (const auto& b : a.blocks()) {
    const Eigen::Index n = b.rows();
    const std::complex<Scalar> mean = b.trace() / Scalar(n);
    const CMatrixT<Scalar> s = mean * CMatrixT<Scalar>::Identity(n, n);
    if (!approx_equal(b, s, tol)) return false;
  }
  return true;
}

/// For Hermitian a, b: ab = ba. Equivalent to the Jordan multiplication
/// operators commuting, (a o x) o b = a o (x o b) for all x.
template <typename Scalar>
bool operator_commute(const AlgElemT<Scalar>& a, const AlgElemT<Scalar>& b,
                      const TolerancePolicy<Scalar>& tol = {}) {
  detail::require_hermitian(a, tol);
  detail::require_hermitian(b, tol);
  return approx_equal(a * b, b * a, tol);
}

/// Residual of (a o x) o b - a o (x o b), relative.
template <typename Scalar>
Scalar jordan_associator_residual(const AlgElemT<Scalar>& a, const AlgElemT<Scalar>& x,
                                  const AlgElemT<Scalar>& b) {
  return relative_distance(jordan(jordan(a, x), b), jordan(a, jordan(x, b)));
}

}  // namespace aluthge
