#include "aluthge/sampling.hpp"

#include <cmath>
#include <numbers>

namespace aluthge {

double Sampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double Sampler::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Sampler::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng_() % span);
}

double Sampler::normal() {
  // 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Sampler::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * (std::numbers::sqrt2 / 2);
}

Complex Sampler::unit_phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

CVector Sampler::gaussian_vector(Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

CVector Sampler::unit_vector(Eigen::Index n) {
  CVector v = gaussian_vector(n);
  while (v.norm() < 1e-8) v = gaussian_vector(n);
  return v / v.norm();
}

CMatrix Sampler::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
  }
  return m;
}

CMatrix Sampler::hermitian_matrix(Eigen::Index n) {
  const CMatrix g = gaussian_matrix(n, n);
  return (g + g.adjoint()) / 2.0;
}

CMatrix Sampler::unitary_matrix(Eigen::Index n) {
  const CMatrix g = gaussian_matrix(n, n);
  CMatrix q = Eigen::HouseholderQR<CMatrix>(g).householderQ() * CMatrix::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(q(i, j));
      if (mag > 1e-12) {
        q.col(j) *= std::conj(q(i, j)) / mag;
        q(i, j) = mag;
        break;
      }
    }
  }
  return q;
}

CMatrix Sampler::projection_matrix(Eigen::Index n, Eigen::Index rank) {
  if (rank <= 0) return CMatrix::Zero(n, n);
  if (rank >= n) return CMatrix::Identity(n, n);
  const CMatrix g = gaussian_matrix(n, rank);
  return range_projection(CMatrix(g * g.adjoint()));
}

CMatrix Sampler::normal_matrix(Eigen::Index n) {
  CVector z = gaussian_vector(n);
  if (n >= 2) {
    switch (uniform_int(0, 3)) {
      case 0: z(1) = z(0); break;               // repeated eigenvalue
      case 1: z(n - 1) = 0; break;              // singular
      case 2: z(0) = z(0).real(); break;        // one real eigenvalue
      default: break;
    }
  }
  const CMatrix w = unitary_matrix(n);
  return w * z.asDiagonal() * w.adjoint();
}

CMatrix Sampler::nilpotent_matrix(Eigen::Index n) {
  if (n < 2) return CMatrix::Zero(n, n);
  const int r = uniform_int(1, static_cast<int>(n / 2));
  CMatrix core = CMatrix::Zero(n, n);
  core.block(0, r, r, r) = gaussian_matrix(r, r);
  const CMatrix w = unitary_matrix(n);
  return w * core * w.adjoint();
}

namespace {
template <typename F>
AlgElem per_block(const VNAlgebra& alg, F&& f) {
  std::vector<CMatrix> blocks;
  for (Eigen::Index n : alg.block_dims()) blocks.push_back(f(n));
  return AlgElem(alg, std::move(blocks));
}
}  // namespace

AlgElem Sampler::element(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) { return gaussian_matrix(n, n); });
}

AlgElem Sampler::hermitian(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) { return hermitian_matrix(n); });
}

AlgElem Sampler::unitary(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) { return unitary_matrix(n); });
}

AlgElem Sampler::projection(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) {
    return projection_matrix(n, uniform_int(0, static_cast<int>(n)));
  });
}

AlgElem Sampler::minimal_projection(const VNAlgebra& alg, std::size_t block) {
  const CVector xi = unit_vector(alg.block_dim(block));
  return AlgElem::in_block(alg, block, xi * xi.adjoint());
}

AlgElem Sampler::minimal_projection(const VNAlgebra& alg) {
  const auto k = static_cast<std::size_t>(uniform_int(0, static_cast<int>(alg.num_blocks()) - 1));
  return minimal_projection(alg, k);
}

AlgElem Sampler::normal(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) { return normal_matrix(n); });
}

AlgElem Sampler::nilpotent(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) { return nilpotent_matrix(n); });
}

AlgElem Sampler::rank_one(const VNAlgebra& alg) {
  const auto k = static_cast<std::size_t>(uniform_int(0, static_cast<int>(alg.num_blocks()) - 1));
  const Eigen::Index n = alg.block_dim(k);
  const CVector x = gaussian_vector(n);
  const CVector y = gaussian_vector(n);
  return AlgElem::in_block(alg, k, x * y.adjoint());
}

AlgElem Sampler::partial_isometry(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) {
    const CMatrix w = unitary_matrix(n);
    return CMatrix(w * projection_matrix(n, uniform_int(0, static_cast<int>(n))));
  });
}

AlgElem Sampler::central_projection(const VNAlgebra& alg) {
  return per_block(alg, [&](Eigen::Index n) -> CMatrix {
    return uniform_int(0, 1) ? CMatrix(CMatrix::Identity(n, n)) : CMatrix(CMatrix::Zero(n, n));
  });
}

AlgElem Sampler::mixed(const VNAlgebra& alg) {
  switch (uniform_int(0, 9)) {
    case 0: return normal(alg);
    case 1: return projection(alg);
    case 2: return unitary(alg);
    case 3: return rank_one(alg);
    case 4: return nilpotent(alg);
    case 5: return AlgElem::scalar(alg, complex_normal());
    case 6: return hermitian(alg);
    case 7: return partial_isometry(alg);
    default: return element(alg);
  }
}

}  // namespace aluthge
