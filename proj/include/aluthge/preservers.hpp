#pragma once

// Concrete preserver maps and black-box checkers for the product /
// Jordan-product Aluthge-commutation hypotheses:
//
//   h1  Phi(D(ab))      = D(Phi(a) Phi(b)),      plus Phi(a*) = Phi(a)*
//   h2  Phi(D(a o b))   = D(Phi(a) o Phi(b)),    plus Phi(a*) = Phi(a)*
//   h3  Phi(D(ab*))     = D(Phi(a) Phi(b)*)
//   h4  Phi(D(a o b*))  = D(Phi(a) o Phi(b)*)
//
// where D is the lambda-Aluthge transform for a fixed lambda.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aluthge/algebra.hpp"
#include "aluthge/sampling.hpp"
#include "aluthge/transform.hpp"

namespace aluthge {

// ---------------------------------------------------------------------------
// Map classes

/// a -> v a v*
struct UnitaryConj {
  explicit UnitaryConj(AlgElem v, const Tolerance& tol = {});
  AlgElem v;
};

/// a -> v conj(a) v*, conj = entrywise complex conjugate.
struct ConjLinearConj {
  explicit ConjLinearConj(AlgElem v, const Tolerance& tol = {});
  AlgElem v;
};

/// a -> v a^t v*  (or v conj(a)^t v* = v a* v* with `conjugate`).
struct TransposeConj {
  TransposeConj(AlgElem v, bool conjugate, const Tolerance& tol = {});
  AlgElem v;
  bool conjugate;
};

enum class TraceNormalization { Unnormalized, Normalized };

/// On M_2: a -> c (v a^t v* - Tr(a) 1). With the usual (unnormalized) trace,
/// a^t - Tr(a) 1 = -J a J* for J = [[0, 1], [-1, 0]], so the map is -c times
/// a unitary conjugation. The normalized variant sends 1 to 0.
struct ExceptionalI2 {
  ExceptionalI2(Complex c, AlgElem v,
                TraceNormalization trace = TraceNormalization::Unnormalized,
                const Tolerance& tol = {});
  Complex c;
  AlgElem v;
  TraceNormalization trace;
};

/// Blockwise hybrid: v a v* on the blocks selected by the central projection
/// p_c, w conj(a) w* on the rest.
struct CentralSplit {
  CentralSplit(AlgElem p_c, AlgElem linear_v, AlgElem conj_v, const Tolerance& tol = {});
  AlgElem p_c;
  AlgElem linear_v;
  AlgElem conj_v;
};

/// z -> 1/z on an algebra of 1x1 blocks, 0 -> 0.
struct AbelianInverse {};
/// z -> z|z| on an algebra of 1x1 blocks.
struct AbelianZAbsZ {};

struct ScalarMultiple;
struct Composed;

using PreserverMap = std::variant<UnitaryConj, ConjLinearConj, TransposeConj, ExceptionalI2,
                                  CentralSplit, AbelianInverse, AbelianZAbsZ, ScalarMultiple,
                                  Composed>;

/// a -> c Phi(a)
struct ScalarMultiple {
  ScalarMultiple(Complex c, PreserverMap inner);
  Complex c;
  std::shared_ptr<const PreserverMap> inner;
};

/// maps[0] applied first.
struct Composed {
  explicit Composed(std::vector<PreserverMap> maps);
  std::vector<std::shared_ptr<const PreserverMap>> maps;
};

/// Call as aluthge::apply: with a std::variant argument, ADL also finds std::apply.
AlgElem apply(const PreserverMap& phi, const AlgElem& a);
std::string kind_name(const PreserverMap& phi);

/// Any evaluable map together with the algebra it acts on. Checkers only see
/// this interface, so hand-written lambdas work as well as PreserverMap.
struct MapHandle {
  std::string name;
  VNAlgebra domain;
  std::function<AlgElem(const AlgElem&)> fn;

  AlgElem operator()(const AlgElem& a) const { return fn(a); }
};

MapHandle make_handle(PreserverMap phi, VNAlgebra domain);

// ---------------------------------------------------------------------------
// Reports

enum class Hypothesis { H1, H2, H3, H4 };
std::string to_string(Hypothesis h);

struct TrialReport {
  std::string property;
  std::size_t samples = 0;
  std::size_t vacuous = 0;
  double max_residual = 0;
  bool pass = true;
  std::uint64_t seed = 0;
  std::string note;
  /// Inputs of the worst trial; always present when pass is false.
  std::vector<std::pair<std::string, AlgElem>> counterexample;
};

/// Keeps the largest residual seen and the inputs that produced it.
class ResidualTracker {
 public:
  explicit ResidualTracker(std::string property, std::uint64_t seed);

  /// Records one trial; `inputs` is only invoked when this trial is the new worst.
  template <typename F>
  void update(double residual, F&& inputs) {
    ++report_.samples;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    if (residual > report_.max_residual || report_.samples == 1) {
      report_.max_residual = residual;
      report_.counterexample = inputs();
    }
  }
  void vacuous() { ++report_.vacuous; }
  /// pass iff max residual < limit; drops the payload on success.
  TrialReport finish(double limit, std::string note = {});

 private:
  TrialReport report_;
};

// ---------------------------------------------------------------------------
// Checkers

/// Verdict pass iff the worst relative residual is below 10 eq_tol.
TrialReport check_hypothesis(const MapHandle& phi, Hypothesis which, Lambda lambda,
                             Sampler& sampler, int n_trials, const Tolerance& tol = {});

/// The linear-preserver form: Phi(D(a)) = D(Phi(a)).
TrialReport check_aluthge_commutation(const MapHandle& phi, Lambda lambda, Sampler& sampler,
                                      int n_trials, const Tolerance& tol = {});

/// Items (a)-(k) of the basic consequences of h3 (or h4 with `jordan`).
std::vector<TrialReport> check_basic_properties(const MapHandle& phi, Hypothesis mode,
                                                Lambda lambda, Sampler& sampler, int n_trials,
                                                const Tolerance& tol = {});

/// Hermitian preservation, Jordan multiplicativity, oddness, compressions,
/// center preservation, and the i-linear / i-antilinear central split.
std::vector<TrialReport> check_hermitian_consequences(const MapHandle& phi, Sampler& sampler,
                                                      int n_trials, const Tolerance& tol = {});

/// Locates the central projection p_c with Phi(i p_c) = i Phi(p_c) and
/// Phi(i (1 - p_c)) = -i Phi(1 - p_c). Throws NotProjection if none exists.
AlgElem find_linear_center(const MapHandle& phi, const Tolerance& tol = {});

enum class ScalarClass { Identity, Conjugation, Other };
std::string to_string(ScalarClass c);

struct ScalarMap {
  std::vector<Complex> alphas;
  std::vector<Complex> values;  // h(alpha)
  ScalarClass classification = ScalarClass::Other;
  double identity_residual = 0;
  double conjugation_residual = 0;
};

std::vector<Complex> default_scalar_grid();

/// Phi(alpha 1) = h(alpha) 1 on the grid. Throws NotScalar otherwise.
ScalarMap extract_scalar_map(const MapHandle& phi, const std::vector<Complex>& grid,
                             const Tolerance& tol = {});

/// phi with p a p = phi p for a minimal projection p.
Complex pure_state_value(const AlgElem& p, const AlgElem& a, const Tolerance& tol = {});

/// Phi(p) Phi(a) Phi(p) = h(phi_p(a)) Phi(p) over minimal p and random a,
/// h read off Phi(alpha 1) compressed by Phi(p).
TrialReport check_compression_identity(const MapHandle& phi, Sampler& sampler, int n_trials,
                                       const Tolerance& tol = {});

/// Phi(alpha p + beta q) = Phi(alpha p) + Phi(beta q) and Phi(alpha p) = h(alpha) Phi(p)
/// for orthogonal minimal p, q.
TrialReport check_orthogonal_scalar_additivity(const MapHandle& phi, Sampler& sampler,
                                               int n_trials, const Tolerance& tol = {});

/// Relative residual of Phi(a + b) - Phi(a) - Phi(b).
double additivity_residual(const MapHandle& phi, const AlgElem& a, const AlgElem& b);

/// M_2 lemma: if D(a(1-p)) = mu (1-p) and D((1-p)a*) = conj(mu) (1-p) then
/// p a (1-p) = 0. lhs: both premises; rhs: conclusion.
LemmaVerdict check_m2_lemma(const CMatrix& a, const CMatrix& p, Complex mu, Lambda lambda,
                            const Tolerance& tol = {});

/// For a = xi eta*: ||D(a*) - D(a)*||, which equals |<eta|xi>| ||xi xi* - eta eta*||
/// for unit vectors.
double adjoint_defect(const CVector& xi, const CVector& eta, Lambda lambda,
                      const Tolerance& tol = {});

}  // namespace aluthge
