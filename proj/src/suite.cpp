#include "aluthge/suite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aluthge {

namespace {

using Inputs = std::vector<std::pair<std::string, AlgElem>>;
using Body = std::function<std::vector<TrialReport>(const VNAlgebra&, std::optional<Lambda>,
                                                    Sampler&, const SuiteConfig&)>;

double limit_of(const SuiteConfig& c) { return 10.0 * c.tol.eq_tol; }

bool any_profile(const VNAlgebra&) { return true; }
bool abelian_profile(const VNAlgebra& a) { return a.is_abelian(); }
bool has_big_block(const VNAlgebra& a) { return a.max_block_dim() >= 2; }
bool single_m2(const VNAlgebra& a) { return a == VNAlgebra{2}; }
bool two_minimal(const VNAlgebra& a) { return a.total_dim() >= 2; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Map factories

MapHandle unitary_conj(const VNAlgebra& alg, Sampler& s) { return make_handle(UnitaryConj(s.unitary(alg)), alg); }

MapHandle conj_linear_conj(const VNAlgebra& alg, Sampler& s) {
  return make_handle(ConjLinearConj(s.unitary(alg)), alg);
}

/// Linear on the first block, conjugate-linear on the others.
MapHandle central_split(const VNAlgebra& alg, Sampler& s) {
  AlgElem p_c = center_basis<double>(alg).front();
  if (alg.num_blocks() == 1) p_c = AlgElem::identity(alg);
  const AlgElem v = s.unitary(alg);
  const AlgElem w = s.unitary(alg);
  return make_handle(CentralSplit(p_c, v, w), alg);
}

MapHandle transpose_conj(const VNAlgebra& alg, Sampler& s) {
  return make_handle(TransposeConj(s.unitary(alg), false), alg);
}

MapHandle exceptional_i2(Sampler& s, TraceNormalization trace) {
  const VNAlgebra m2{2};
  return make_handle(ExceptionalI2(Complex(1, 0), s.unitary(m2), trace), m2);
}

MapHandle scalar_multiple(const VNAlgebra& alg, Sampler& s) {
  return make_handle(ScalarMultiple(Complex(0, 2), UnitaryConj(s.unitary(alg))), alg);
}

using Factory = MapHandle (*)(const VNAlgebra&, Sampler&);

struct NamedFactory {
  const char* name;
  Factory make;
};

const NamedFactory kIsomorphisms[] = {
    {"unitary_conj", unitary_conj},
    {"conj_linear_conj", conj_linear_conj},
    {"central_split", central_split},
};

// ---------------------------------------------------------------------------
// Sample families for the transform lemmas

/// Lemma verdicts are turned into residuals: 0 when the sample agrees with
/// the lemma, 1 when it contradicts it.
double verdict_residual(const LemmaVerdict& v) { return v.holds ? 0.0 : 1.0; }

std::vector<TrialReport> polar_body(const VNAlgebra& alg, std::optional<Lambda>, Sampler& s,
                                    const SuiteConfig& cfg) {
  ResidualTracker t("polar", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    const AlgElem a = k % 2 ? s.element(alg) : s.mixed(alg);
    double r = 0;
    for (const auto& b : a.blocks()) {
      const PolarParts pp = polar_decompose(b, cfg.tol);
      r = std::max(r, relative_distance(CMatrix(pp.u * pp.modulus), b));
      r = std::max(r, relative_distance(CMatrix(pp.u.adjoint() * pp.u), range_projection(pp.modulus, cfg.tol)));
      r = std::max(r, relative_distance(CMatrix(pp.u * pp.u.adjoint() * pp.u), pp.u));
    }
    t.update(r, [&] { return Inputs{{"a", a}}; });
  }
  return {t.finish(limit_of(cfg))};
}

std::vector<TrialReport> psd_body(const VNAlgebra& alg, std::optional<Lambda>, Sampler& s,
                                  const SuiteConfig& cfg) {
  ResidualTracker t("psd_power_additivity", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    const AlgElem g = s.mixed(alg);
    const AlgElem p = g * adjoint(g);
    const double x = s.uniform();
    const double y = s.uniform() * (1.0 - x);
    double r = 0;
    for (const auto& b : p.blocks()) {
      const CMatrix lhs = psd_power(b, x, cfg.tol) * psd_power(b, y, cfg.tol);
      r = std::max(r, relative_distance(lhs, psd_power(b, x + y, cfg.tol)));
    }
    t.update(r, [&] { return Inputs{{"p", p}}; });
  }
  return {t.finish(limit_of(cfg))};
}

std::vector<TrialReport> fixed_point_body(const VNAlgebra& alg, std::optional<Lambda> lambda,
                                          Sampler& s, const SuiteConfig& cfg) {
  ResidualTracker t("fixed_point", s.seed());
  double worst_fixed = 0, closest_moving = INFINITY;
  for (int k = 0; k < cfg.trials; ++k) {
    AlgElem a = AlgElem::zero(alg);
    switch (k % 4) {
      case 0: a = s.normal(alg); break;
      case 1: a = s.unitary(alg) * s.projection(alg) * AlgElem::scalar(alg, s.complex_normal()); break;
      case 2: a = s.element(alg); break;
      default: a = s.mixed(alg); break;
    }
    if (k == 0) a = AlgElem::zero(alg);
    const LemmaVerdict v = check_fixed_point_lemma(a, *lambda, cfg.tol);
    if (v.lhs) {
      worst_fixed = std::max(worst_fixed, v.rhs_residual);
    } else {
      closest_moving = std::min(closest_moving, v.rhs_residual);
    }
    t.update(verdict_residual(v), [&] { return Inputs{{"a", a}}; });
  }
  return {t.finish(0.5, "max fixed residual " + fmt(worst_fixed) + "; min residual off the fixed set " +
                            fmt(closest_moving))};
}

std::vector<TrialReport> kernel_body(const VNAlgebra& alg, std::optional<Lambda> lambda,
                                     Sampler& s, const SuiteConfig& cfg) {
  ResidualTracker t("kernel", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    const AlgElem a = k % 2 ? s.nilpotent(alg) : s.mixed(alg);
    const double na = a.norm();
    const bool zero_transform = aluthge(a, *lambda, cfg.tol).norm() <= cfg.tol.eq_tol * std::max(na, 1e-300);
    const bool square_zero = AlgElem(a * a).norm() <= cfg.tol.eq_tol * std::max(na * na, 1e-300);
    t.update(zero_transform == square_zero ? 0.0 : 1.0, [&] { return Inputs{{"a", a}}; });
  }
  return {t.finish(0.5)};
}

/// a = w diag(N, 0) w*, p = w diag(1, 0) w*: a normal element supported in p.
std::pair<AlgElem, AlgElem> supported_pair(const VNAlgebra& alg, Sampler& s) {
  std::vector<CMatrix> as, ps;
  for (Eigen::Index n : alg.block_dims()) {
    const int r = s.uniform_int(0, static_cast<int>(n));
    const CMatrix w = s.unitary_matrix(n);
    CMatrix core = CMatrix::Zero(n, n), proj = CMatrix::Zero(n, n);
    if (r > 0) {
      core.topLeftCorner(r, r) = s.normal_matrix(r);
      proj.topLeftCorner(r, r) = CMatrix::Identity(r, r);
    }
    as.push_back(w * core * w.adjoint());
    ps.push_back(w * proj * w.adjoint());
  }
  return {AlgElem(alg, std::move(as)), AlgElem(alg, std::move(ps))};
}

std::vector<TrialReport> ap_body(const VNAlgebra& alg, std::optional<Lambda> lambda, Sampler& s,
                                 const SuiteConfig& cfg) {
  ResidualTracker t("ap_lemma", s.seed());
  std::size_t forward = 0;
  for (int k = 0; k < cfg.trials; ++k) {
    AlgElem a = AlgElem::zero(alg), p = AlgElem::zero(alg);
    switch (k % 3) {
      case 0: std::tie(a, p) = supported_pair(alg, s); break;
      case 1: p = s.projection(alg); a = p; break;
      default: a = s.element(alg); p = s.projection(alg); break;
    }
    const LemmaVerdict v = check_ap_lemma(a, p, *lambda, cfg.tol);
    if (v.lhs) ++forward;
    t.update(verdict_residual(v), [&] { return Inputs{{"a", a}, {"p", p}}; });
  }
  return {t.finish(0.5, std::to_string(forward) + " samples with Delta(ap) = a")};
}

std::vector<TrialReport> identity_body(const VNAlgebra& alg, std::optional<Lambda> lambda,
                                       Sampler& s, const SuiteConfig& cfg) {
  ResidualTracker t("identity_lemma", s.seed());
  const AlgElem one = AlgElem::identity(alg);
  for (int k = 0; k < cfg.trials; ++k) {
    AlgElem a = one;
    if (k > 0) {
      do {
        a = k % 2 ? s.element(alg) : one + 0.5 * s.mixed(alg);
      } while ((a - one).norm() <= 0.1);
    }
    const LemmaVerdict v = check_identity_lemma(a, *lambda, cfg.tol);
    if (v.vacuous) t.vacuous();
    t.update(verdict_residual(v), [&] { return Inputs{{"a", a}}; });
  }
  return {t.finish(0.5)};
}

std::vector<TrialReport> qnormal_adjoint_body(const VNAlgebra& alg, std::optional<Lambda> lambda,
                                              Sampler& s, const SuiteConfig& cfg) {
  ResidualTracker t("qnormal_adjoint", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    AlgElem a = AlgElem::zero(alg);
    switch (k % 3) {
      case 0: a = s.hermitian(alg); break;
      case 1: a = Complex(0, 1) * s.projection(alg); break;
      default: a = s.normal(alg); break;
    }
    const LemmaVerdict v = check_qnormal_adjoint_lemma(a, *lambda, cfg.tol);
    if (v.vacuous) t.vacuous();
    t.update(verdict_residual(v), [&] { return Inputs{{"a", a}}; });
  }
  return {t.finish(0.5)};
}

std::vector<TrialReport> rank_one_body(const VNAlgebra& alg, std::optional<Lambda> lambda,
                                       Sampler& s, const SuiteConfig& cfg) {
  ResidualTracker t("rank_one", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    const auto blk = static_cast<std::size_t>(s.uniform_int(0, static_cast<int>(alg.num_blocks()) - 1));
    const Eigen::Index n = alg.block_dim(blk);
    CVector x = s.gaussian_vector(n);
    const CVector y = s.gaussian_vector(n);
    if (k % 4 == 0 && n >= 2) x -= (y.dot(x) / y.squaredNorm()) * y;  // x orthogonal to y
    const CMatrix direct = aluthge(CMatrix(x * y.adjoint()), *lambda, cfg.tol);
    const double r = relative_distance(direct, rank_one_aluthge(x, y));
    t.update(r, [&] {
      return Inputs{{"x_y_star", AlgElem::in_block(alg, blk, x * y.adjoint())}};
    });
  }
  return {t.finish(limit_of(cfg))};
}

std::vector<TrialReport> covariance_body(const VNAlgebra& alg, std::optional<Lambda> lambda,
                                         Sampler& s, const SuiteConfig& cfg) {
  ResidualTracker cov("unitary_covariance", s.seed());
  ResidualTracker routes("polar_route_agreement", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    const AlgElem a = s.mixed(alg);
    const AlgElem w = s.unitary(alg);
    const AlgElem lhs = aluthge(AlgElem(w * a * adjoint(w)), *lambda, cfg.tol);
    const AlgElem rhs = w * aluthge(a, *lambda, cfg.tol) * adjoint(w);
    cov.update(relative_distance(lhs, rhs), [&] { return Inputs{{"a", a}, {"w", w}}; });
    const AlgElem via_polar =
        a.map([&](const CMatrix& b) { return aluthge_via_polar(b, *lambda, cfg.tol); });
    routes.update(relative_distance(aluthge(a, *lambda, cfg.tol), via_polar),
                  [&] { return Inputs{{"a", a}}; });
  }
  return {cov.finish(limit_of(cfg)), routes.finish(limit_of(cfg))};
}

std::vector<TrialReport> m2_body(const VNAlgebra&, std::optional<Lambda> lambda, Sampler& s,
                                 const SuiteConfig& cfg) {
  ResidualTracker lemma("m2_lemma", s.seed());
  ResidualTracker witness("m2_witness_rejected", s.seed());
  const VNAlgebra m2{2};
  for (int k = 0; k < cfg.trials; ++k) {
    const CMatrix w = s.unitary_matrix(2);
    const Complex mu = s.complex_normal() + (s.uniform_int(0, 1) ? 0.5 : -0.5);
    CMatrix core(2, 2);
    core << s.complex_normal(), Complex(0), s.complex_normal(), mu;
    if (k % 2) core(0, 1) = s.complex_normal() * std::pow(10.0, -s.uniform(0.0, 12.0));
    const CMatrix e11 = (CMatrix(2, 2) << 1, 0, 0, 0).finished();
    const CMatrix a = w * core * w.adjoint();
    const CMatrix p = w * e11 * w.adjoint();
    const LemmaVerdict v = check_m2_lemma(a, p, mu, *lambda, cfg.tol);
    if (v.vacuous) lemma.vacuous();
    lemma.update(verdict_residual(v), [&] {
      return Inputs{{"a", AlgElem(m2, {a})}, {"p", AlgElem(m2, {p})}, {"mu", AlgElem::scalar(m2, mu)}};
    });

    // alpha_12 != 0 and alpha_22 = mu != 0 must break a premise.
    CMatrix bad = core;
    bad(0, 1) = s.complex_normal() + 0.5;
    const CMatrix b = w * bad * w.adjoint();
    const LemmaVerdict vb = check_m2_lemma(b, p, mu, *lambda, cfg.tol);
    witness.update(vb.lhs ? 1.0 : 0.0, [&] {
      return Inputs{{"a", AlgElem(m2, {b})}, {"p", AlgElem(m2, {p})}, {"mu", AlgElem::scalar(m2, mu)}};
    });
  }
  const std::size_t live = static_cast<std::size_t>(cfg.trials);
  TrialReport r = lemma.finish(0.5);
  r.note = std::to_string(live - r.vacuous) + " instances satisfied both premises";
  return {r, witness.finish(0.5)};
}

std::vector<TrialReport> adjoint_witness_body(const VNAlgebra& alg, std::optional<Lambda> lambda,
                                              Sampler& s, const SuiteConfig& cfg) {
  ResidualTracker t("adjoint_witness", s.seed());
  std::vector<std::size_t> big;
  for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
    if (alg.block_dim(k) >= 2) big.push_back(k);
  }
  double smallest = INFINITY;
  for (int k = 0; k < cfg.trials; ++k) {
    const std::size_t blk = big[static_cast<std::size_t>(s.uniform_int(0, static_cast<int>(big.size()) - 1))];
    const Eigen::Index n = alg.block_dim(blk);
    CVector xi, eta;
    double overlap = 0;
    do {
      xi = s.unit_vector(n);
      eta = s.unit_vector(n);
      overlap = std::abs(eta.dot(xi));
    } while (overlap < 0.2 || overlap > 0.95);
    const double defect = adjoint_defect(xi, eta, *lambda, cfg.tol);
    const double predicted = overlap * CMatrix(xi * xi.adjoint() - eta * eta.adjoint()).norm();
    smallest = std::min(smallest, defect);
    // Fails if the two sides agree, or if the closed form is off.
    const double r = std::max(defect > 1e-3 ? 0.0 : 1.0, std::abs(defect - predicted));
    t.update(r, [&] { return Inputs{{"xi_eta_star", AlgElem::in_block(alg, blk, xi * eta.adjoint())}}; });
  }
  return {t.finish(limit_of(cfg), "smallest defect " + fmt(smallest))};
}

// ---------------------------------------------------------------------------
// Algebra-level cross checks

std::vector<TrialReport> lattice_body(const VNAlgebra& alg, std::optional<Lambda>, Sampler& s,
                                      const SuiteConfig& cfg) {
  const auto& tol = cfg.tol;
  ResidualTracker order("proj_order_vs_difference", s.seed());
  ResidualTracker minimal("minimal_vs_compression", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    AlgElem p = s.projection(alg), q = s.projection(alg);
    if (k % 2 == 0) {
      auto [x, y] = supported_pair(alg, s);
      (void)x;
      q = y;
      // p: a subprojection of q, spanned by part of q's range.
      p = q.map([&](const CMatrix& b) -> CMatrix {
        const HermEig<double> e = herm_eig(b, tol);
        CMatrix out = CMatrix::Zero(b.rows(), b.cols());
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
          if (e.values(j) > 0.5 && s.uniform_int(0, 1)) out += e.vectors.col(j) * e.vectors.col(j).adjoint();
        }
        return out;
      });
    }
    const AlgElem d = q - p;
    const bool by_def = proj_leq(p, q, tol);
    const bool by_diff = is_projection(d, tol) && is_zero(AlgElem(d * p), tol);
    order.update(by_def == by_diff ? 0.0 : 1.0, [&] { return Inputs{{"p", p}, {"q", q}}; });

    // pAp = C p for ten random elements  <=>  minimal.
    const AlgElem m = k % 2 ? s.minimal_projection(alg) : s.projection(alg);
    bool compresses = !is_zero(m, tol);
    for (int j = 0; j < 10 && compresses; ++j) {
      const AlgElem a = s.element(alg);
      const AlgElem c = m * a * m;
      const Complex phi = trace(c) / std::max(1.0, std::real(trace(m)));
      compresses = approx_equal(c, phi * m, tol);
    }
    minimal.update(compresses == is_minimal_projection(m, tol) ? 0.0 : 1.0,
                   [&] { return Inputs{{"p", m}}; });
  }
  return {order.finish(0.5), minimal.finish(0.5)};
}

std::vector<TrialReport> partial_isometry_body(const VNAlgebra& alg, std::optional<Lambda>, Sampler& s,
                                               const SuiteConfig& cfg) {
  const auto& tol = cfg.tol;
  ResidualTracker t("pi_order_characterizations", s.seed());
  ResidualTracker implied("pi_order_implies_range_conditions", s.seed());
  std::size_t comparable = 0;
  for (int k = 0; k < cfg.trials; ++k) {
    const AlgElem v = s.partial_isometry(alg);
    AlgElem e = s.partial_isometry(alg);
    if (k % 2 == 0) {
      // e = v p with p a subprojection of v*v (so p commutes with v*v).
      const AlgElem init = adjoint(v) * v;
      const AlgElem p = init.map([&](const CMatrix& b) -> CMatrix {
        const HermEig<double> eig = herm_eig(b, tol);
        CMatrix out = CMatrix::Zero(b.rows(), b.cols());
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
          if (eig.values(j) > 0.5 && s.uniform_int(0, 1)) out += eig.vectors.col(j) * eig.vectors.col(j).adjoint();
        }
        return out;
      });
      e = v * p;
    }
    const bool by_def = pi_leq(e, v, tol);
    if (by_def) ++comparable;
    t.update(by_def == pi_leq_via_initial_projection(e, v, tol) ? 0.0 : 1.0,
             [&] { return Inputs{{"e", e}, {"v", v}}; });
    implied.update(by_def && !pi_leq_range_conditions(e, v, tol) ? 1.0 : 0.0,
                   [&] { return Inputs{{"e", e}, {"v", v}}; });
  }
  return {t.finish(0.5, std::to_string(comparable) + " comparable pairs"), implied.finish(0.5)};
}

std::vector<TrialReport> matrix_units_body(const VNAlgebra& alg, std::optional<Lambda>, Sampler& s,
                                           const SuiteConfig& cfg) {
  ResidualTracker t("matrix_unit_axioms", s.seed());
  for (std::size_t blk = 0; blk < alg.num_blocks(); ++blk) {
    const MatrixUnitSystem u = matrix_units<double>(alg, blk);
    AlgElem sum = AlgElem::zero(alg);
    double r = 0;
    for (Eigen::Index i = 0; i < u.n; ++i) {
      sum = sum + u(i, i);
      for (Eigen::Index j = 0; j < u.n; ++j) {
        r = std::max(r, (adjoint(u(i, j)) - u(j, i)).norm());
        for (Eigen::Index k = 0; k < u.n; ++k) {
          for (Eigen::Index l = 0; l < u.n; ++l) {
            const AlgElem expect = j == k ? u(i, l) : AlgElem::zero(alg);
            r = std::max(r, (u(i, j) * u(k, l) - expect).norm());
          }
        }
      }
    }
    r = std::max(r, (sum - center_basis<double>(alg)[blk]).norm());
    t.update(r, [&] { return Inputs{{"unit_00", u(0, 0)}}; });
  }
  return {t.finish(limit_of(cfg))};
}

std::vector<TrialReport> jordan_body(const VNAlgebra& alg, std::optional<Lambda>, Sampler& s,
                                     const SuiteConfig& cfg) {
  ResidualTracker t("jordan_identities", s.seed());
  const AlgElem one = AlgElem::identity(alg);
  for (int k = 0; k < cfg.trials; ++k) {
    const AlgElem a = s.element(alg), b = s.element(alg);
    const AlgElem p = s.projection(alg), x = s.hermitian(alg);
    double r = relative_distance(jordan(a, b), jordan(b, a));
    r = std::max(r, relative_distance(AlgElem(2.0 * jordan(a, b)),
                                      AlgElem((a + b) * (a + b) - a * a - b * b)));
    r = std::max(r, relative_distance(jordan(a, one), a));
    r = std::max(r, relative_distance(triple(p, x, AlgElem(one - p)),
                                      jordan(AlgElem(2.0 * jordan(p, x)), AlgElem(one - p))));
    t.update(r, [&] { return Inputs{{"a", a}, {"b", b}, {"p", p}, {"x", x}}; });
  }
  return {t.finish(limit_of(cfg))};
}

std::vector<TrialReport> commute_body(const VNAlgebra& alg, std::optional<Lambda>, Sampler& s,
                                      const SuiteConfig& cfg) {
  ResidualTracker t("operator_commutation", s.seed());
  for (int k = 0; k < cfg.trials; ++k) {
    const AlgElem h = s.hermitian(alg);
    AlgElem a = h, b = s.hermitian(alg);
    if (k % 2 == 0) {
      const double c0 = s.normal(), c1 = s.normal(), c2 = s.normal();
      a = h * h + c0 * h;
      b = c1 * (h * h * h) + c2 * AlgElem::identity(alg);
    }
    const bool commute = operator_commute(a, b, cfg.tol);
    double worst = 0;
    for (int j = 0; j < 20; ++j) worst = std::max(worst, jordan_associator_residual(a, s.element(alg), b));
    const bool associative = worst <= 10.0 * cfg.tol.eq_tol;
    t.update(commute == associative ? 0.0 : 1.0, [&] { return Inputs{{"a", a}, {"b", b}}; });
  }
  return {t.finish(0.5)};
}

// ---------------------------------------------------------------------------
// Map-level bodies

Body hypothesis_body(Hypothesis h, MapHandle (*make)(const VNAlgebra&, Sampler&)) {
  return [h, make](const VNAlgebra& alg, std::optional<Lambda> lambda, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    return std::vector<TrialReport>{check_hypothesis(phi, h, *lambda, s, cfg.trials, cfg.tol)};
  };
}

Body exceptional_hypothesis_body(Hypothesis h, TraceNormalization trace) {
  return [h, trace](const VNAlgebra&, std::optional<Lambda> lambda, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = exceptional_i2(s, trace);
    return std::vector<TrialReport>{check_hypothesis(phi, h, *lambda, s, cfg.trials, cfg.tol)};
  };
}

Body exceptional_bmn_body(TraceNormalization trace) {
  return [trace](const VNAlgebra&, std::optional<Lambda> lambda, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = exceptional_i2(s, trace);
    return std::vector<TrialReport>{check_aluthge_commutation(phi, *lambda, s, cfg.trials, cfg.tol)};
  };
}

Body bmn_body(MapHandle (*make)(const VNAlgebra&, Sampler&)) {
  return [make](const VNAlgebra& alg, std::optional<Lambda> lambda, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    return std::vector<TrialReport>{check_aluthge_commutation(phi, *lambda, s, cfg.trials, cfg.tol)};
  };
}

Body basic_body(MapHandle (*make)(const VNAlgebra&, Sampler&)) {
  return [make](const VNAlgebra& alg, std::optional<Lambda> lambda, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    std::vector<TrialReport> out;
    for (Hypothesis mode : {Hypothesis::H3, Hypothesis::H4}) {
      for (auto& r : check_basic_properties(phi, mode, *lambda, s, cfg.trials, cfg.tol)) {
        r.property = to_string(mode) + "/" + r.property;
        out.push_back(std::move(r));
      }
    }
    return out;
  };
}

Body hermitian_body(MapHandle (*make)(const VNAlgebra&, Sampler&)) {
  return [make](const VNAlgebra& alg, std::optional<Lambda>, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    return check_hermitian_consequences(phi, s, cfg.trials, cfg.tol);
  };
}

Body compression_body(MapHandle (*make)(const VNAlgebra&, Sampler&)) {
  return [make](const VNAlgebra& alg, std::optional<Lambda>, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    return std::vector<TrialReport>{check_compression_identity(phi, s, cfg.trials, cfg.tol)};
  };
}

Body orth_body(MapHandle (*make)(const VNAlgebra&, Sampler&)) {
  return [make](const VNAlgebra& alg, std::optional<Lambda>, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    return std::vector<TrialReport>{check_orthogonal_scalar_additivity(phi, s, cfg.trials, cfg.tol)};
  };
}

/// The extracted scalar map must have the expected class, and keep it after
/// composing with a unitary conjugation.
Body scalar_map_body(MapHandle (*make)(const VNAlgebra&, Sampler&), ScalarClass expected) {
  return [make, expected](const VNAlgebra& alg, std::optional<Lambda>, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    const UnitaryConj w(s.unitary(alg));
    const MapHandle composed{phi.name + "*unitary_conj", alg,
                             [phi, w](const AlgElem& a) { return aluthge::apply(PreserverMap(w), phi(a)); }};
    ResidualTracker t("scalar_map:" + phi.name, s.seed());
    std::string note;
    try {
      const auto grid = default_scalar_grid();
      const ScalarMap h = extract_scalar_map(phi, grid, cfg.tol);
      const ScalarMap hw = extract_scalar_map(composed, grid, cfg.tol);
      note = "class " + to_string(h.classification) + ", after conjugation " + to_string(hw.classification);
      const double r = (h.classification == expected && hw.classification == expected) ? 0.0 : 1.0;
      const double gap = expected == ScalarClass::Identity      ? h.identity_residual
                         : expected == ScalarClass::Conjugation ? h.conjugation_residual
                                                                : 0.0;
      t.update(std::max(r, gap), [&] { return Inputs{}; });
    } catch (const Error& e) {
      note = e.what();
      t.update(INFINITY, [&] { return Inputs{{"one", AlgElem::identity(alg)}}; });
    }
    return std::vector<TrialReport>{t.finish(expected == ScalarClass::Other ? 0.5 : 10.0 * cfg.tol.eq_tol, note)};
  };
}

Body additivity_body(MapHandle (*make)(const VNAlgebra&, Sampler&)) {
  return [make](const VNAlgebra& alg, std::optional<Lambda>, Sampler& s, const SuiteConfig& cfg) {
    const MapHandle phi = make(alg, s);
    ResidualTracker t("additivity:" + phi.name, s.seed());
    const AlgElem one = AlgElem::identity(alg);
    for (int k = 0; k < cfg.trials; ++k) {
      const AlgElem a = k == 0 ? one : s.mixed(alg);
      const AlgElem b = k == 0 ? one : s.mixed(alg);
      t.update(additivity_residual(phi, a, b), [&] { return Inputs{{"a", a}, {"b", b}}; });
    }
    return std::vector<TrialReport>{t.finish(10.0 * cfg.tol.eq_tol)};
  };
}

MapHandle abelian_inverse(const VNAlgebra& alg, Sampler&) { return make_handle(AbelianInverse{}, alg); }
MapHandle abelian_zabsz(const VNAlgebra& alg, Sampler&) { return make_handle(AbelianZAbsZ{}, alg); }

// ---------------------------------------------------------------------------

std::vector<PropertySpec> build_registry() {
  std::vector<PropertySpec> reg;
  auto add = [&](std::string id, std::string description, Expectation expected,
                 std::function<bool(const VNAlgebra&)> applies, VNAlgebra fallback, bool sweeps,
                 bool positive, Body body) {
    reg.push_back(PropertySpec{std::move(id), std::move(description), expected, std::move(applies),
                               std::move(fallback), sweeps, positive, std::move(body)});
  };
  const auto P = Expectation::Pass;
  const auto F = Expectation::Fail;

  add("polar", "a = u|a|, u partial isometry, u*u = range projection of |a|", P, any_profile, VNAlgebra{2},
      false, false, polar_body);
  add("psd_power", "m^s m^t = m^(s+t) for PSD m and s + t <= 1", P, any_profile, VNAlgebra{2}, false, false,
      psd_body);
  add("fixed_point", "quasi-normal <=> Delta(a) = a", P, any_profile, VNAlgebra{2}, true, true,
      fixed_point_body);
  add("kernel", "Delta(a) = 0 <=> a^2 = 0", P, any_profile, VNAlgebra{2}, true, true, kernel_body);
  add("ap_lemma", "Delta(ap) = a <=> a = pa = ap and a quasi-normal", P, any_profile, VNAlgebra{2}, true, true,
      ap_body);
  add("identity_lemma", "Delta(a) = 1 => a = 1", P, any_profile, VNAlgebra{2}, true, false, identity_body);
  add("qnormal_adjoint", "a quasi-normal, Delta(a*) = a => a = a*", P, any_profile, VNAlgebra{2}, true, false,
      qnormal_adjoint_body);
  add("rank_one", "Delta(x y*) = (<x|y>/|y|^2) y y*", P, any_profile, VNAlgebra{2}, true, true, rank_one_body);
  add("unitary_covariance", "Delta(w a w*) = w Delta(a) w*; SVD and polar routes agree", P, any_profile,
      VNAlgebra{2}, true, false, covariance_body);
  add("m2_lemma", "M_2: both corner premises force p a (1-p) = 0", P, single_m2, VNAlgebra{2}, true, true,
      m2_body);
  add("adjoint_witness", "Delta((xi eta*)*) != Delta(xi eta*)* for non-orthogonal unit xi, eta", P, has_big_block,
      VNAlgebra{2}, true, true, adjoint_witness_body);

  add("algebra:lattice", "projection order and minimality cross-checks", P, any_profile, VNAlgebra{2}, false,
      false, lattice_body);
  add("algebra:partial_isometry", "e <= v by definition agrees with e*e <= v*v, e = v e*e", P, any_profile,
      VNAlgebra{2}, false, false, partial_isometry_body);
  add("algebra:matrix_units", "u_ij* = u_ji, u_ij u_kl = d_jk u_il, sum u_ii = 1", P, any_profile, VNAlgebra{2},
      false, false, matrix_units_body);
  add("algebra:jordan", "Jordan and triple product identities", P, any_profile, VNAlgebra{2}, false, false,
      jordan_body);
  add("algebra:operator_commute", "ab = ba <=> Jordan multiplications commute", P, any_profile, VNAlgebra{2},
      false, false, commute_body);

  const Hypothesis hs[] = {Hypothesis::H1, Hypothesis::H2, Hypothesis::H3, Hypothesis::H4};
  for (const auto& iso : kIsomorphisms) {
    for (Hypothesis h : hs) {
      add(to_string(h) + ":" + iso.name, std::string(iso.name) + " satisfies " + to_string(h), P, any_profile,
          VNAlgebra{2}, true, false, hypothesis_body(h, iso.make));
    }
  }
  for (Hypothesis h : hs) {
    add(to_string(h) + ":transpose_conj", "a -> v a^t v* violates " + to_string(h) + " for lambda > 0", F,
        has_big_block, VNAlgebra{2}, true, false, hypothesis_body(h, transpose_conj));
  }
  add("h3:exceptional_i2", "exceptional M_2 map sends 1 to -c, so h3 fails", F, single_m2, VNAlgebra{2}, true,
      false, exceptional_hypothesis_body(Hypothesis::H3, TraceNormalization::Unnormalized));
  add("h3:scalar_multiple", "2i * unitary conjugation fails h3 at a = b = 1", F, any_profile, VNAlgebra{2}, true,
      false, hypothesis_body(Hypothesis::H3, scalar_multiple));
  add("h3:abelian_inverse", "z -> 1/z satisfies h3 on abelian algebras", P, abelian_profile, VNAlgebra{1}, true,
      false, hypothesis_body(Hypothesis::H3, abelian_inverse));
  add("h3:abelian_zabsz", "z -> z|z| satisfies h3 on abelian algebras", P, abelian_profile, VNAlgebra{1}, true,
      false, hypothesis_body(Hypothesis::H3, abelian_zabsz));

  add("bmn:unitary_conj", "Phi(Delta(a)) = Delta(Phi(a)) for unitary conjugation", P, any_profile, VNAlgebra{2},
      true, false, bmn_body(unitary_conj));
  add("bmn:exceptional_i2", "exceptional M_2 map (usual trace) commutes with Delta", P, single_m2, VNAlgebra{2},
      true, false, exceptional_bmn_body(TraceNormalization::Unnormalized));
  add("bmn:exceptional_i2_normalized", "normalized-trace variant does not commute with Delta", F, single_m2,
      VNAlgebra{2}, true, true, exceptional_bmn_body(TraceNormalization::Normalized));
  add("bmn:scalar_multiple", "2i * unitary conjugation commutes with Delta", P, any_profile, VNAlgebra{2}, true,
      false, bmn_body(scalar_multiple));

  add("additivity:unitary_conj", "unitary conjugation is additive", P, any_profile, VNAlgebra{2}, false, false,
      additivity_body(unitary_conj));
  add("additivity:abelian_inverse", "z -> 1/z is not additive (a = b = 1)", F, abelian_profile, VNAlgebra{1},
      false, false, additivity_body(abelian_inverse));
  add("additivity:abelian_zabsz", "z -> z|z| is not additive (a = b = 1)", F, abelian_profile, VNAlgebra{1},
      false, false, additivity_body(abelian_zabsz));

  for (const auto& iso : kIsomorphisms) {
    add(std::string("basic:") + iso.name, "consequences (a)-(k) in h3 and h4 form", P, any_profile, VNAlgebra{2},
        true, false, basic_body(iso.make));
  }
  for (const auto& iso : kIsomorphisms) {
    add(std::string("hermitian:") + iso.name, "Hermitian, Jordan, center and i-split consequences", P,
        any_profile, VNAlgebra{2}, false, false, hermitian_body(iso.make));
  }
  add("scalar_map:unitary_conj", "h is the identity", P, any_profile, VNAlgebra{2}, false, false,
      scalar_map_body(unitary_conj, ScalarClass::Identity));
  add("scalar_map:conj_linear_conj", "h is complex conjugation", P, any_profile, VNAlgebra{2}, false, false,
      scalar_map_body(conj_linear_conj, ScalarClass::Conjugation));
  add("scalar_map:abelian_zabsz", "h(z) = z|z| is neither identity nor conjugation", P, abelian_profile,
      VNAlgebra{1}, false, false, scalar_map_body(abelian_zabsz, ScalarClass::Other));
  for (const auto& iso : kIsomorphisms) {
    add(std::string("compression:") + iso.name, "Phi(p)Phi(a)Phi(p) = h(phi_p(a)) Phi(p)", P, any_profile,
        VNAlgebra{2}, false, false, compression_body(iso.make));
  }
  for (const auto& iso : kIsomorphisms) {
    add(std::string("orth_additivity:") + iso.name, "Phi(alpha p + beta q) = Phi(alpha p) + Phi(beta q)", P,
        two_minimal, VNAlgebra{2}, false, false, orth_body(iso.make));
  }
  return reg;
}

std::string lambda_key(std::optional<double> l, std::size_t index) {
  return l ? "l" + std::to_string(index) : "-";
}

}  // namespace

void SuiteConfig::validate() const {
  tol.validate();
  if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be at least 1");
  if (profiles.empty()) throw Error(Errc::InvalidArgument, "no block profiles");
  if (lambda_grid.empty()) throw Error(Errc::InvalidArgument, "empty lambda grid");
  for (double l : lambda_grid) Lambda{l};
}

const std::vector<PropertySpec>& property_registry() {
  static const std::vector<PropertySpec> reg = build_registry();
  return reg;
}

PropertyOutcome run_property(const PropertySpec& spec, const SuiteConfig& cfg) {
  PropertyOutcome out{spec.id, spec.expected, true, true, {}};
  std::vector<VNAlgebra> profiles;
  for (const auto& p : cfg.profiles) {
    if (spec.applies(p)) profiles.push_back(p);
  }
  if (profiles.empty()) profiles.push_back(spec.fallback);

  for (const auto& alg : profiles) {
    std::vector<std::optional<double>> lambdas;
    if (spec.sweeps_lambda) {
      for (double l : cfg.lambda_grid) {
        if (!(spec.positive_lambda && l == 0.0)) lambdas.emplace_back(l);
      }
    } else {
      lambdas.emplace_back(std::nullopt);
    }
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const auto& l = lambdas[li];
      Sampler sampler(derive_seed(cfg.seed, spec.id + "|" + alg.label() + "|" + lambda_key(l, li)));
      std::optional<Lambda> lambda;
      if (l) lambda.emplace(*l);
      for (auto& report : spec.body(alg, lambda, sampler, cfg)) {
        out.observed_pass = out.observed_pass && report.pass;
        out.runs.push_back(PropertyRun{alg.label(), l, std::move(report)});
      }
    }
  }
  out.ok = (spec.expected == Expectation::Pass) == out.observed_pass;
  return out;
}

std::vector<const PropertySpec*> select_properties(const std::string& selection) {
  const auto& reg = property_registry();
  std::vector<const PropertySpec*> out;
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : selection + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (tokens.empty()) throw Error(Errc::InvalidArgument, "empty property selection");
  for (const auto& tok : tokens) {
    bool matched = false;
    const bool prefix = tok.back() == '*';
    const std::string stem = prefix ? tok.substr(0, tok.size() - 1) : tok;
    for (const auto& spec : reg) {
      const bool hit = tok == "all" || (prefix ? spec.id.rfind(stem, 0) == 0 : spec.id == tok);
      if (!hit) continue;
      matched = true;
      if (std::find(out.begin(), out.end(), &spec) == out.end()) out.push_back(&spec);
    }
    if (!matched) throw Error(Errc::InvalidArgument, "unknown property \"" + tok + "\"");
  }
  // Registry order, independent of how the selection was spelled.
  std::sort(out.begin(), out.end());
  return out;
}

SuiteResult run_suite(const SuiteConfig& cfg, const std::vector<const PropertySpec*>& selection) {
  cfg.validate();
  if (selection.empty()) throw Error(Errc::InvalidArgument, "empty property selection");
  SuiteResult result;
  Json& rep = result.report;
  rep["tool"] = "aluthge-lab";
  rep["seed"] = cfg.seed;
  Json config;
  config["lambda_grid"] = cfg.lambda_grid;
  Json profiles = Json::array();
  for (const auto& p : cfg.profiles) profiles.push_back(p.label());
  config["profiles"] = std::move(profiles);
  config["trials"] = cfg.trials;
  config["tolerance"] = {{"eq_tol", cfg.tol.eq_tol}, {"rank_tol", cfg.tol.rank_tol}, {"psd_clip", cfg.tol.psd_clip}};
  rep["config"] = std::move(config);

  Json props = Json::array();
  std::size_t ok_count = 0;
  for (const PropertySpec* spec : selection) {
    const PropertyOutcome o = run_property(*spec, cfg);
    Json p;
    p["id"] = o.id;
    p["description"] = spec->description;
    p["expected"] = o.expected == Expectation::Pass ? "pass" : "fail";
    p["observed"] = o.observed_pass ? "pass" : "fail";
    p["ok"] = o.ok;
    Json runs = Json::array();
    for (const auto& r : o.runs) {
      Json jr;
      jr["profile"] = r.profile;
      jr["lambda"] = r.lambda ? Json(*r.lambda) : Json();
      const Json body = to_json(r.report);
      for (const auto& [k, v] : body.items()) jr[k] = v;
      runs.push_back(std::move(jr));
    }
    p["runs"] = std::move(runs);
    props.push_back(std::move(p));
    if (o.ok) ++ok_count;
    result.all_ok = result.all_ok && o.ok;
  }
  rep["properties"] = std::move(props);
  rep["summary"] = {{"properties", selection.size()}, {"ok", ok_count}, {"not_ok", selection.size() - ok_count}};
  return result;
}

VNAlgebra parse_profile(const std::string& text) {
  std::vector<Eigen::Index> dims;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (cur.empty()) throw Error(Errc::Parse, "bad profile \"" + text + "\"");
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(cur, &used);
      } catch (const std::exception&) {
        throw Error(Errc::Parse, "bad profile \"" + text + "\"");
      }
      if (used != cur.size() || v < 1 || v > 64) throw Error(Errc::Parse, "bad profile \"" + text + "\"");
      dims.push_back(v);
      cur.clear();
    } else if (c != ' ' && c != '[' && c != ']') {
      cur += c;
    }
  }
  return VNAlgebra(std::move(dims));
}

std::vector<VNAlgebra> parse_profiles(const std::string& text) {
  std::vector<VNAlgebra> out;
  std::string cur;
  for (char c : text + ";") {
    if (c == ';') {
      if (cur.find_first_not_of(' ') != std::string::npos) out.push_back(parse_profile(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (out.empty()) throw Error(Errc::Parse, "no profiles given");
  return out;
}

}  // namespace aluthge
