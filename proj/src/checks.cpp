// Black-box checkers over MapHandle: hypotheses h1-h4, the consequences they
// force, scalar extraction and the M_2 lemma.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aluthge/preservers.hpp"

namespace aluthge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Inputs = std::vector<std::pair<std::string, AlgElem>>;

/// ||lhs - rhs|| / max(1, ||lhs||)
double rel_residual(const AlgElem& lhs, const AlgElem& rhs) {
  lhs.require_same_algebra(rhs);
  return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

double pass_limit(const Tolerance& tol) { return 10.0 * tol.eq_tol; }

/// Product used by each hypothesis on the domain side (and, with images,
/// on the codomain side).
AlgElem product(Hypothesis h, const AlgElem& a, const AlgElem& b) {
  switch (h) {
    case Hypothesis::H1: return a * b;
    case Hypothesis::H2: return jordan(a, b);
    case Hypothesis::H3: return a * adjoint(b);
    case Hypothesis::H4: return jordan(a, adjoint(b));
  }
  return a * b;
}

/// Structured pairs first, then a mix of random ones.
std::pair<AlgElem, AlgElem> hypothesis_pair(const VNAlgebra& alg, Sampler& s, int trial) {
  const AlgElem one = AlgElem::identity(alg);
  switch (trial) {
    case 0: return {one, one};
    case 1: {
      AlgElem p = s.projection(alg);
      return {p, p};
    }
    case 2: return {s.projection(alg), one};
    case 3: return {one, s.element(alg)};
    case 4: return {s.element(alg), one};
    case 5: {
      AlgElem a = s.element(alg);
      return {a, a};
    }
    case 6: return {AlgElem::scalar(alg, Complex(0, 1)), one};
    case 7: return {AlgElem::zero(alg), s.element(alg)};
    default: break;
  }
  AlgElem a = s.mixed(alg);
  AlgElem b = s.mixed(alg);
  return {std::move(a), std::move(b)};
}

/// Mutually orthogonal projections p_1..p_m (some possibly zero): per block,
/// the columns of a random unitary are dealt into m + 1 bins, the last unused.
std::vector<AlgElem> orthogonal_family(const VNAlgebra& alg, Sampler& s, int m) {
  std::vector<std::vector<CMatrix>> blocks(static_cast<std::size_t>(m));
  for (Eigen::Index n : alg.block_dims()) {
    const CMatrix w = s.unitary_matrix(n);
    for (auto& b : blocks) b.push_back(CMatrix::Zero(n, n));
    for (Eigen::Index j = 0; j < n; ++j) {
      const int bin = s.uniform_int(0, m);
      if (bin == m) continue;
      blocks[static_cast<std::size_t>(bin)].back() += w.col(j) * w.col(j).adjoint();
    }
  }
  std::vector<AlgElem> out;
  for (auto& b : blocks) out.emplace_back(alg, std::move(b));
  return out;
}

/// Distance from the center: each block compared with its scalar part.
double central_defect(const AlgElem& a) {
  const AlgElem c = a.map([](const CMatrix& b) -> CMatrix {
    const Eigen::Index n = b.rows();
    return (b.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  });
  return (a - c).norm() / std::max(1.0, a.norm());
}

/// Evaluates a predicate on both sides, residual 1 on disagreement or when
/// the image side is not even well-formed.
template <typename Pred>
double agreement(Pred&& pred, const AlgElem& x, const AlgElem& y, const AlgElem& fx,
                 const AlgElem& fy) {
  try {
    return pred(x, y) == pred(fx, fy) ? 0.0 : 1.0;
  } catch (const Error&) {
    return 1.0;
  }
}

std::string pattern_label(const AlgElem& p_c) {
  std::string out = "[";
  for (std::size_t k = 0; k < p_c.num_blocks(); ++k) {
    if (k) out += ',';
    out += std::abs(p_c.block(k)(0, 0)) > 0.5 ? '1' : '0';
  }
  return out + "]";
}

}  // namespace

TrialReport check_hypothesis(const MapHandle& phi, Hypothesis which, Lambda lambda,
                             Sampler& sampler, int n_trials, const Tolerance& tol) {
  ResidualTracker track(to_string(which) + ":" + phi.name, sampler.seed());
  const bool needs_adjoint = which == Hypothesis::H1 || which == Hypothesis::H2;
  double adjoint_worst = 0;
  for (int t = 0; t < n_trials; ++t) {
    auto [a, b] = hypothesis_pair(phi.domain, sampler, t);
    const AlgElem fa = phi(a);
    const AlgElem fb = phi(b);
    const AlgElem lhs = phi(aluthge(product(which, a, b), lambda, tol));
    const AlgElem rhs = aluthge(product(which, fa, fb), lambda, tol);
    double r = rel_residual(lhs, rhs);
    if (needs_adjoint) {
      const double adj = rel_residual(phi(adjoint(a)), adjoint(fa));
      adjoint_worst = std::max(adjoint_worst, adj);
      r = std::max(r, adj);
    }
    track.update(r, [&] { return Inputs{{"a", a}, {"b", b}}; });
  }
  std::string note = "lambda=" + std::to_string(lambda.value());
  if (needs_adjoint) note += "; adjoint residual " + std::to_string(adjoint_worst);
  return track.finish(pass_limit(tol), note);
}

TrialReport check_aluthge_commutation(const MapHandle& phi, Lambda lambda, Sampler& sampler,
                                      int n_trials, const Tolerance& tol) {
  ResidualTracker track("bmn:" + phi.name, sampler.seed());
  for (int t = 0; t < n_trials; ++t) {
    const AlgElem a = t % 2 ? sampler.element(phi.domain) : sampler.mixed(phi.domain);
    const AlgElem lhs = phi(aluthge(a, lambda, tol));
    const AlgElem rhs = aluthge(phi(a), lambda, tol);
    track.update(rel_residual(lhs, rhs), [&] { return Inputs{{"a", a}}; });
  }
  return track.finish(pass_limit(tol), "lambda=" + std::to_string(lambda.value()));
}

std::vector<TrialReport> check_basic_properties(const MapHandle& phi, Hypothesis mode,
                                                Lambda lambda, Sampler& s, int n_trials,
                                                const Tolerance& tol) {
  if (mode != Hypothesis::H3 && mode != Hypothesis::H4) {
    throw Error(Errc::InvalidArgument, "basic properties are stated for h3 or h4");
  }
  const VNAlgebra& alg = phi.domain;
  const bool jordan_mode = mode == Hypothesis::H4;
  const double limit = pass_limit(tol);
  const std::uint64_t seed = s.seed();
  const AlgElem zero = AlgElem::zero(alg);
  const AlgElem one = AlgElem::identity(alg);
  std::vector<TrialReport> out;

  {
    ResidualTracker t("a:zero", seed);
    const AlgElem f0 = phi(zero);
    t.update(f0.norm(), [&] { return Inputs{{"a", zero}}; });
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t(jordan_mode ? "b:jordan_square" : "b:product_square", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem a = s.mixed(alg);
      const AlgElem fa = phi(a);
      const AlgElem lhs = phi(jordan_mode ? jordan(a, adjoint(a)) : AlgElem(a * adjoint(a)));
      const AlgElem rhs = jordan_mode ? jordan(fa, adjoint(fa)) : AlgElem(fa * adjoint(fa));
      t.update(rel_residual(lhs, rhs), [&] { return Inputs{{"a", a}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("c:projections", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem p = k % 3 ? s.projection(alg) : s.minimal_projection(alg);
      const AlgElem fp = phi(p);
      const double r = std::max(rel_residual(fp, adjoint(fp)), rel_residual(fp * fp, fp));
      t.update(r, [&] { return Inputs{{"p", p}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("d:order", seed);
    auto leq = [&](const AlgElem& x, const AlgElem& y) { return proj_leq(x, y, tol); };
    for (int k = 0; k < n_trials; ++k) {
      AlgElem p = zero, q = zero;
      if (k % 2 == 0) {
        auto fam = orthogonal_family(alg, s, 2);
        p = fam[0];
        q = fam[0] + fam[1];
      } else {
        p = s.projection(alg);
        q = s.projection(alg);
      }
      const AlgElem fp = phi(p), fq = phi(q);
      const double r = std::max(agreement(leq, p, q, fp, fq), agreement(leq, q, p, fq, fp));
      t.update(r, [&] { return Inputs{{"p", p}, {"q", q}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("e:unit", seed);
    const AlgElem f1 = phi(one);
    t.update(rel_residual(f1, one), [&] { return Inputs{{"a", one}}; });
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("f:orthogonality", seed);
    auto orth = [&](const AlgElem& x, const AlgElem& y) { return proj_orthogonal(x, y, tol); };
    for (int k = 0; k < n_trials; ++k) {
      AlgElem p = zero, q = zero;
      if (k % 2 == 0) {
        auto fam = orthogonal_family(alg, s, 2);
        p = fam[0];
        q = fam[1];
      } else {
        p = s.projection(alg);
        q = s.projection(alg);
      }
      const double r = agreement(orth, p, q, phi(p), phi(q));
      t.update(r, [&] { return Inputs{{"p", p}, {"q", q}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("g:minimal", seed);
    auto minimal = [&](const AlgElem& x, const AlgElem&) { return is_minimal_projection(x, tol); };
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem p = k % 2 ? s.projection(alg) : s.minimal_projection(alg);
      const AlgElem fp = phi(p);
      t.update(agreement(minimal, p, p, fp, fp), [&] { return Inputs{{"p", p}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("h:orthogonal_sums", seed);
    for (int k = 0; k < n_trials; ++k) {
      const auto fam = orthogonal_family(alg, s, s.uniform_int(2, 4));
      AlgElem sum = zero, image_sum = zero;
      for (const auto& p : fam) {
        sum = sum + p;
        image_sum = image_sum + phi(p);
      }
      t.update(rel_residual(phi(sum), image_sum), [&] {
        Inputs in;
        for (std::size_t j = 0; j < fam.size(); ++j) in.emplace_back("p" + std::to_string(j), fam[j]);
        return in;
      });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("i:differences", seed);
    for (int k = 0; k < n_trials; ++k) {
      const auto fam = orthogonal_family(alg, s, 2);
      const AlgElem& p = fam[0];
      const AlgElem q = fam[0] + fam[1];
      t.update(rel_residual(phi(q - p), phi(q) - phi(p)), [&] { return Inputs{{"p", p}, {"q", q}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("j:aluthge", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem a = s.mixed(alg);
      t.update(rel_residual(phi(aluthge(a, lambda, tol)), aluthge(phi(a), lambda, tol)),
               [&] { return Inputs{{"a", a}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("k:aluthge_adjoint", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem a = s.mixed(alg);
      t.update(rel_residual(phi(aluthge(adjoint(a), lambda, tol)),
                            aluthge(adjoint(phi(a)), lambda, tol)),
               [&] { return Inputs{{"a", a}}; });
    }
    out.push_back(t.finish(limit));
  }
  return out;
}

AlgElem find_linear_center(const MapHandle& phi, const Tolerance& tol) {
  const VNAlgebra& alg = phi.domain;
  const AlgElem one = AlgElem::identity(alg);
  // Phi(i1) = i(2q - 1)  =>  q = (1 - i Phi(i1)) / 2
  const AlgElem q = 0.5 * (one - Complex(0, 1) * phi(AlgElem::scalar(alg, Complex(0, 1))));
  if (!is_projection(q, tol)) throw Error(Errc::NotProjection, "Phi(i1) is not of the form i(2q - 1)");
  const std::size_t k = alg.num_blocks();
  if (k > 16) throw Error(Errc::InvalidArgument, "too many blocks to search central projections");
  const auto basis = center_basis<double>(alg);
  for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
    AlgElem p = AlgElem::zero(alg);
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (1U << j)) p = p + basis[j];
    }
    if (approx_equal(phi(p), q, tol)) return p;
  }
  throw Error(Errc::NotProjection, "no central projection maps onto q");
}

std::vector<TrialReport> check_hermitian_consequences(const MapHandle& phi, Sampler& s,
                                                      int n_trials, const Tolerance& tol) {
  const VNAlgebra& alg = phi.domain;
  const double limit = pass_limit(tol);
  const std::uint64_t seed = s.seed();
  std::vector<TrialReport> out;

  {
    ResidualTracker t("hermitian_preserved", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem x = s.hermitian(alg);
      const AlgElem fx = phi(x);
      t.update(rel_residual(fx, adjoint(fx)), [&] { return Inputs{{"x", x}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("jordan_on_hermitian", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem x = s.hermitian(alg), y = s.hermitian(alg);
      t.update(rel_residual(phi(jordan(x, y)), jordan(phi(x), phi(y))),
               [&] { return Inputs{{"x", x}, {"y", y}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("odd_on_hermitian", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem x = s.hermitian(alg);
      t.update(rel_residual(phi(-x), -phi(x)), [&] { return Inputs{{"x", x}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("compression", seed);
    for (int k = 0; k < n_trials; ++k) {
      const AlgElem p = s.projection(alg);
      AlgElem b = s.hermitian(alg);
      if (k % 2) b = Complex(0, 1) * b;
      const AlgElem fp = phi(p);
      t.update(rel_residual(phi(p * b * p), fp * phi(b) * fp),
               [&] { return Inputs{{"p", p}, {"b", b}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("center_preserved", seed);
    const auto basis = center_basis<double>(alg);
    for (int k = 0; k < n_trials; ++k) {
      AlgElem z = AlgElem::zero(alg);
      for (const auto& e : basis) z = z + s.complex_normal() * e;
      t.update(central_defect(phi(z)), [&] { return Inputs{{"z", z}}; });
    }
    out.push_back(t.finish(limit));
  }
  {
    ResidualTracker t("imaginary_split", seed);
    std::string note;
    try {
      const AlgElem p_c = find_linear_center(phi, tol);
      const AlgElem rest = AlgElem::identity(alg) - p_c;
      note = "p_c=" + pattern_label(p_c);
      const Complex i(0, 1);
      for (int k = 0; k < n_trials; ++k) {
        const AlgElem h = s.hermitian(alg);
        const AlgElem x = p_c * h;
        const AlgElem y = rest * h;
        const double r = std::max(rel_residual(phi(i * x), i * phi(x)),
                                  rel_residual(phi(i * y), -i * phi(y)));
        t.update(r, [&] { return Inputs{{"x", x}, {"y", y}}; });
      }
    } catch (const Error& e) {
      note = e.what();
      t.update(kInf, [&] { return Inputs{{"a", AlgElem::scalar(alg, Complex(0, 1))}}; });
    }
    out.push_back(t.finish(limit, note));
  }
  return out;
}

std::vector<Complex> default_scalar_grid() {
  return {{0, 0},    {1, 0},     {-1, 0},   {0, 1},    {0, -1},    {2, 0},
          {0.5, 0},  {0, -3},    {1, 1},    {2, -3},   {-0.5, 0.25}, {3, 4},
          {-2, -1},  {0, 0.1},   {10, 0},   {-7, 2}};
}

ScalarMap extract_scalar_map(const MapHandle& phi, const std::vector<Complex>& grid,
                             const Tolerance& tol) {
  ScalarMap out;
  out.alphas = grid;
  for (const Complex& alpha : grid) {
    const AlgElem img = phi(AlgElem::scalar(phi.domain, alpha));
    const Complex h = trace(img) / static_cast<double>(img.algebra().total_dim());
    if (!approx_equal(img, AlgElem::scalar(img.algebra(), h), tol)) {
      throw Error(Errc::NotScalar, "Phi(alpha 1) is not scalar at alpha = (" +
                                       std::to_string(alpha.real()) + ", " +
                                       std::to_string(alpha.imag()) + ")");
    }
    out.values.push_back(h);
    const double scale = std::max(1.0, std::abs(alpha));
    out.identity_residual = std::max(out.identity_residual, std::abs(h - alpha) / scale);
    out.conjugation_residual =
        std::max(out.conjugation_residual, std::abs(h - std::conj(alpha)) / scale);
  }
  if (out.identity_residual <= tol.eq_tol) {
    out.classification = ScalarClass::Identity;
  } else if (out.conjugation_residual <= tol.eq_tol) {
    out.classification = ScalarClass::Conjugation;
  }
  return out;
}

Complex pure_state_value(const AlgElem& p, const AlgElem& a, const Tolerance& tol) {
  p.require_same_algebra(a);
  if (!is_minimal_projection(p, tol)) throw Error(Errc::NotMinimal, "pure_state_value needs a minimal projection");
  return trace(AlgElem(p * a));
}

TrialReport check_compression_identity(const MapHandle& phi, Sampler& s, int n_trials,
                                       const Tolerance& tol) {
  ResidualTracker track("compression:" + phi.name, s.seed());
  std::string note;
  for (int k = 0; k < n_trials; ++k) {
    const AlgElem p = s.minimal_projection(phi.domain);
    const AlgElem a = s.element(phi.domain);
    double r = kInf;
    try {
      const Complex value = pure_state_value(p, a, tol);
      const AlgElem fp = phi(p);
      const Complex h = pure_state_value(fp, phi(AlgElem::scalar(phi.domain, value)), tol);
      r = rel_residual(fp * phi(a) * fp, h * fp);
    } catch (const Error& e) {
      note = e.what();
    }
    track.update(r, [&] { return Inputs{{"p", p}, {"a", a}}; });
  }
  return track.finish(pass_limit(tol), note);
}

TrialReport check_orthogonal_scalar_additivity(const MapHandle& phi, Sampler& s, int n_trials,
                                               const Tolerance& tol) {
  const VNAlgebra& alg = phi.domain;
  ResidualTracker track("orth_additivity:" + phi.name, s.seed());
  std::vector<std::size_t> big;
  for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
    if (alg.block_dim(k) >= 2) big.push_back(k);
  }
  if (big.empty() && alg.num_blocks() < 2) {
    throw Error(Errc::InvalidArgument, "need two orthogonal minimal projections");
  }
  std::string note;
  for (int t = 0; t < n_trials; ++t) {
    AlgElem p = AlgElem::zero(alg), q = AlgElem::zero(alg);
    const bool same_block = !big.empty() && (alg.num_blocks() < 2 || t % 2 == 0);
    if (same_block) {
      const std::size_t k = big[static_cast<std::size_t>(s.uniform_int(0, static_cast<int>(big.size()) - 1))];
      const CMatrix w = s.unitary_matrix(alg.block_dim(k));
      p = AlgElem::in_block(alg, k, w.col(0) * w.col(0).adjoint());
      q = AlgElem::in_block(alg, k, w.col(1) * w.col(1).adjoint());
    } else {
      const int k1 = s.uniform_int(0, static_cast<int>(alg.num_blocks()) - 1);
      int k2 = s.uniform_int(0, static_cast<int>(alg.num_blocks()) - 2);
      if (k2 >= k1) ++k2;
      p = s.minimal_projection(alg, static_cast<std::size_t>(k1));
      q = s.minimal_projection(alg, static_cast<std::size_t>(k2));
    }
    const Complex alpha = t == 0 ? Complex(2, 0) : s.complex_normal() * 2.0;
    const Complex beta = t == 0 ? Complex(0, -3) : s.complex_normal() * 2.0;
    double r = kInf;
    try {
      const AlgElem fp = phi(p);
      const AlgElem fap = phi(alpha * p);
      const Complex h = pure_state_value(fp, phi(AlgElem::scalar(alg, alpha)), tol);
      r = std::max(rel_residual(phi(alpha * p + beta * q), fap + phi(beta * q)),
                   rel_residual(fap, h * fp));
    } catch (const Error& e) {
      note = e.what();
    }
    track.update(r, [&] {
      return Inputs{{"p", p}, {"q", q}, {"alpha", AlgElem::scalar(alg, alpha)},
                    {"beta", AlgElem::scalar(alg, beta)}};
    });
  }
  return track.finish(pass_limit(tol), note);
}

double additivity_residual(const MapHandle& phi, const AlgElem& a, const AlgElem& b) {
  return rel_residual(phi(a + b), phi(a) + phi(b));
}

LemmaVerdict check_m2_lemma(const CMatrix& a, const CMatrix& p, Complex mu, Lambda lambda,
                            const Tolerance& tol) {
  if (a.rows() != 2 || a.cols() != 2 || p.rows() != 2 || p.cols() != 2) {
    throw Error(Errc::DimensionMismatch, "M_2 lemma works in 2x2 matrices");
  }
  if (mu == Complex(0)) throw Error(Errc::InvalidArgument, "mu must be nonzero");
  if (lambda.is_zero()) throw Error(Errc::InvalidArgument, "lemma needs lambda in (0, 1]");
  const AlgElem pe(VNAlgebra{2}, {p});
  if (!is_minimal_projection(pe, tol)) throw Error(Errc::NotMinimal, "p must be a rank-one projection");

  const CMatrix rest = CMatrix::Identity(2, 2) - p;
  LemmaVerdict v;
  const double first = relative_distance(aluthge(CMatrix(a * rest), lambda, tol), CMatrix(mu * rest));
  const double second =
      relative_distance(aluthge(CMatrix(rest * a.adjoint()), lambda, tol), CMatrix(std::conj(mu) * rest));
  v.lhs_residual = std::max(first, second);
  v.lhs = v.lhs_residual <= tol.eq_tol;
  v.rhs_residual = (p * a * rest).norm() / std::max(1.0, a.norm());
  v.rhs = v.rhs_residual <= 10.0 * tol.eq_tol;
  v.vacuous = !v.lhs;
  v.holds = !v.lhs || v.rhs;
  return v;
}

double adjoint_defect(const CVector& xi, const CVector& eta, Lambda lambda, const Tolerance& tol) {
  const CMatrix a = xi * eta.adjoint();
  return (aluthge(CMatrix(a.adjoint()), lambda, tol) - aluthge(a, lambda, tol).adjoint()).norm();
}

}  // namespace aluthge
