#pragma once

// Reproducible random inputs. The stream is SplitMix64 used in counter mode:
//
//   x_i = mix64(seed + (i + 1) * 0x9E3779B97F4A7C15),  i = 0, 1, 2, ...
//   mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//             z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
//
// Uniforms are (x >> 11) * 2^-53; normals use Box-Muller on two uniforms,
// keeping only the cosine branch. Sub-streams for named tasks are seeded with
// mix64(seed ^ fnv1a64(name)). All of this is plain integer arithmetic, so
// ports in other languages reproduce the same inputs.

#include <cstdint>
#include <string_view>
#include <vector>

#include "aluthge/algebra.hpp"
#include "aluthge/linalg.hpp"

namespace aluthge {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
  return mix64(seed ^ fnv1a64(name));
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return mix64(seed_ + (++counter_) * kGolden); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Draws every random object the checks need from one SplitMix64 stream.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t seed() const { return rng_.seed(); }

  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);         // inclusive
  double normal();
  Complex complex_normal();                // E|z|^2 = 1
  Complex unit_phase();

  CVector gaussian_vector(Eigen::Index n);
  CVector unit_vector(Eigen::Index n);
  CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
  CMatrix hermitian_matrix(Eigen::Index n);
  /// QR of a Gaussian matrix, each column rotated so its first nonzero entry
  /// is real and positive.
  CMatrix unitary_matrix(Eigen::Index n);
  /// Range projection of G G* with G an n x rank Gaussian matrix.
  CMatrix projection_matrix(Eigen::Index n, Eigen::Index rank);
  /// w diag(z) w*, with some eigenvalues forced to repeat or vanish.
  CMatrix normal_matrix(Eigen::Index n);
  /// w [[0, X], [0, 0]] w* with X of size r x r, 2r <= n, so a^2 = 0.
  CMatrix nilpotent_matrix(Eigen::Index n);

  AlgElem element(const VNAlgebra& alg);
  AlgElem hermitian(const VNAlgebra& alg);
  AlgElem unitary(const VNAlgebra& alg);
  AlgElem projection(const VNAlgebra& alg);
  AlgElem minimal_projection(const VNAlgebra& alg);
  /// Minimal projection in block k.
  AlgElem minimal_projection(const VNAlgebra& alg, std::size_t block);
  AlgElem normal(const VNAlgebra& alg);
  AlgElem nilpotent(const VNAlgebra& alg);
  AlgElem rank_one(const VNAlgebra& alg);
  AlgElem partial_isometry(const VNAlgebra& alg);
  /// Central projection: a random 0/1 pattern over the blocks.
  AlgElem central_projection(const VNAlgebra& alg);

  /// A mixed bag for hypothesis checks: Gaussian, normal, projection,
  /// unitary, rank-one, nilpotent, scalar multiples of 1, Hermitian.
  AlgElem mixed(const VNAlgebra& alg);

 private:
  SplitMix64 rng_;
};

}  // namespace aluthge
