// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aluthge/suite.hpp"

namespace aluthge {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::vector<double> kPositive{0.25, 0.5, 0.75, 1.0};
const std::vector<double> kGrid{0.0, 0.25, 0.5, 0.75, 1.0};
const std::vector<VNAlgebra> kProfiles{VNAlgebra{2}, VNAlgebra{3}, VNAlgebra{2, 2}};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!pass) detail << "; ";
      detail << "FAILED " << what;
      pass = false;
    }
  }
};

Sampler sampler_for(const std::string& name) { return Sampler(derive_seed(42, "acceptance|" + name)); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << x;
  return os.str();
}

// 1 -------------------------------------------------------------------------

void polar(Verdict& v) {
  Sampler s = sampler_for("polar");
  const Tolerance tol;
  const auto t0 = Clock::now();
  double worst = 0;
  int count = 0;
  for (Eigen::Index n = 2; n <= 6; ++n) {
    for (int k = 0; k < 500; ++k) {
      CMatrix a = s.gaussian_matrix(n, n);
      // Every fourth sample is rank deficient.
      if (k % 4 == 3) a = s.gaussian_matrix(n, n - 1) * s.gaussian_matrix(n - 1, n);
      const PolarParts pp = polar_decompose(a, tol);
      worst = std::max(worst, relative_distance(CMatrix(pp.u * pp.modulus), a));
      worst = std::max(worst, relative_distance(CMatrix(pp.u.adjoint() * pp.u), range_projection(pp.modulus, tol)));
      ++count;
    }
  }
  const double secs = seconds_since(t0);
  v.require(worst <= 1e-8, "reconstruction");
  v.require(secs < 10.0, "runtime");
  v.detail << count << " matrices, max residual " << sci(worst) << ", " << secs << " s";
}

// 2 -------------------------------------------------------------------------

/// Normal elements built several ways; in finite dimensions these are
/// exactly the quasi-normal ones.
CMatrix quasinormal_sample(Sampler& s, Eigen::Index n, int k) {
  switch (k % 5) {
    case 0: return s.normal_matrix(n);
    case 1: return s.hermitian_matrix(n);
    case 2: return s.complex_normal() * s.unitary_matrix(n);
    case 3: return s.uniform(0.1, 10.0) * s.projection_matrix(n, s.uniform_int(0, static_cast<int>(n)));
    default: {
      const CMatrix w = s.unitary_matrix(n);
      return w * s.normal_matrix(n) * w.adjoint() * 1e3;
    }
  }
}

void fixed_point(Verdict& v) {
  Sampler s = sampler_for("fixed_point");
  const Tolerance tol;
  double worst_fixed = 0, closest_moving = INFINITY;
  int false_pos = 0, false_neg = 0, fixed = 0, moving = 0;
  for (double l : kPositive) {
    for (int k = 0; k < 250; ++k) {
      const CMatrix a = quasinormal_sample(s, 2 + k % 5, k);
      const double r = (aluthge(a, Lambda(l), tol) - a).norm() / std::max(1.0, a.norm());
      worst_fixed = std::max(worst_fixed, r);
      if (!is_quasinormal(a, tol)) ++false_neg;
      ++fixed;
    }
  }
  for (int k = 0; k < 500; ++k) {
    const Lambda l(kPositive[static_cast<std::size_t>(k % 4)]);
    const CMatrix a = s.gaussian_matrix(2 + k % 5, 2 + k % 5);
    const double r = (aluthge(a, l, tol) - a).norm() / std::max(1.0, a.norm());
    closest_moving = std::min(closest_moving, r);
    if (is_quasinormal(a, tol)) ++false_pos;
    ++moving;
  }
  v.require(worst_fixed <= 1e-8, "fixed residual");
  v.require(closest_moving > 1e-6, "moving residual");
  v.require(false_pos == 0 && false_neg == 0, "predicate agreement");
  v.detail << fixed << " quasi-normal, max " << sci(worst_fixed) << "; " << moving << " generic, min "
           << sci(closest_moving) << "; false +/- " << false_pos << "/" << false_neg;
}

// 3 -------------------------------------------------------------------------

void kernel(Verdict& v) {
  Sampler s = sampler_for("kernel");
  const Tolerance tol;
  double worst_nil = 0, closest_other = INFINITY;
  int nil = 0, other = 0;
  for (int k = 0; k < 2000; ++k) {
    const Eigen::Index n = 2 + k % 5;
    const Lambda l(kPositive[static_cast<std::size_t>((k / 5) % 4)]);
    if (k % 2 == 0) {
      const CMatrix a = s.nilpotent_matrix(n);
      worst_nil = std::max(worst_nil, aluthge(a, l, tol).norm() / a.norm());
      ++nil;
      continue;
    }
    // Generic matrices and nilpotents perturbed by up to 1e-2 relative size.
    CMatrix a = s.gaussian_matrix(n, n);
    if (k % 4 == 3) {
      const CMatrix z = s.nilpotent_matrix(n);
      a = z + std::pow(10.0, s.uniform(-2.0, 0.0)) * z.norm() / a.norm() * a;
    }
    if ((a * a).norm() <= 1e-4 * a.squaredNorm()) continue;
    closest_other = std::min(closest_other, aluthge(a, l, tol).norm() / a.norm());
    ++other;
  }
  v.require(worst_nil <= 1e-8, "nilpotent image");
  v.require(closest_other > 1e-6, "non-nilpotent image");
  v.detail << nil << " nilpotent, max |D|/|a| " << sci(worst_nil) << "; " << other
           << " with |a^2| > 1e-4 |a|^2, min |D|/|a| " << sci(closest_other);
}

// 4 -------------------------------------------------------------------------

void rank_one(Verdict& v) {
  Sampler s = sampler_for("rank_one");
  const Tolerance tol;
  double worst = 0;
  int orthogonal = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 2 + k % 5;
    CVector x = s.gaussian_vector(n);
    const CVector y = s.gaussian_vector(n);
    if (k % 4 == 0) {
      x -= (y.dot(x) / y.squaredNorm()) * y;
      ++orthogonal;
    }
    const Lambda l(s.uniform(0.01, 1.0));
    worst = std::max(worst, relative_distance(aluthge(CMatrix(x * y.adjoint()), l, tol), rank_one_aluthge(x, y)));
  }
  v.require(worst <= 1e-8, "closed form");
  v.detail << "200 pairs (" << orthogonal << " orthogonal), max residual " << sci(worst);
}

// 5 -------------------------------------------------------------------------

void m2_lemma(Verdict& v) {
  Sampler s = sampler_for("m2");
  const Tolerance tol;
  const CMatrix e11 = (CMatrix(2, 2) << 1, 0, 0, 0).finished();
  int instances = 0, live = 0, wrong = 0, witness_accepted = 0;
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    const Lambda l(kPositive[static_cast<std::size_t>(k % 4)]);
    const CMatrix w = s.unitary_matrix(2);
    const Complex mu = s.complex_normal() + (s.uniform_int(0, 1) ? 0.5 : -0.5);
    CMatrix core(2, 2);
    core << s.complex_normal(), Complex(0), s.complex_normal(), mu;
    // Off-corner entry: exactly zero, tiny, or generic.
    switch (k % 3) {
      case 0: break;
      case 1: core(0, 1) = s.complex_normal() * std::pow(10.0, -s.uniform(6.0, 14.0)); break;
      default: core(0, 1) = s.complex_normal(); break;
    }
    const CMatrix a = w * core * w.adjoint();
    const CMatrix p = w * e11 * w.adjoint();
    const LemmaVerdict r = check_m2_lemma(a, p, mu, l, tol);
    ++instances;
    if (r.lhs) {
      ++live;
      worst = std::max(worst, (p * a * (CMatrix::Identity(2, 2) - p)).norm());
      if ((p * a * (CMatrix::Identity(2, 2) - p)).norm() > 1e-7) ++wrong;
    }

    CMatrix bad = core;
    bad(0, 1) = s.complex_normal() + 0.5;
    if (check_m2_lemma(CMatrix(w * bad * w.adjoint()), p, mu, l, tol).lhs) ++witness_accepted;
  }
  v.require(instances >= 10000 && live >= 1000, "instance counts");
  v.require(wrong == 0, "conclusion");
  v.require(witness_accepted == 0, "witness rejection");
  v.detail << instances << " instances, " << live << " with both premises, max |p a (1-p)| " << sci(worst)
           << "; witness accepted " << witness_accepted << " times";
}

// 6 -------------------------------------------------------------------------

using Factory = std::function<MapHandle(const VNAlgebra&, Sampler&)>;

struct NamedMap {
  std::string name;
  Factory make;
};

std::vector<NamedMap> isomorphisms() {
  return {
      {"unitary_conj", [](const VNAlgebra& a, Sampler& s) { return make_handle(UnitaryConj(s.unitary(a)), a); }},
      {"conj_linear_conj",
       [](const VNAlgebra& a, Sampler& s) { return make_handle(ConjLinearConj(s.unitary(a)), a); }},
      {"central_split",
       [](const VNAlgebra& a, Sampler& s) {
         AlgElem p_c = a.num_blocks() == 1 ? AlgElem::identity(a) : center_basis<double>(a).front();
         const AlgElem v = s.unitary(a);
         return make_handle(CentralSplit(p_c, v, s.unitary(a)), a);
       }},
  };
}

void isomorphism_hypotheses(Verdict& v) {
  const Tolerance tol;
  double worst = 0;
  int runs = 0, basic_failed = 0, basic_runs = 0;
  for (const auto& m : isomorphisms()) {
    for (const auto& alg : kProfiles) {
      for (double l : kGrid) {
        for (Hypothesis h : {Hypothesis::H1, Hypothesis::H2, Hypothesis::H3, Hypothesis::H4}) {
          Sampler s = sampler_for(m.name + "|" + alg.label() + "|" + to_string(h) + "|" + std::to_string(l));
          const MapHandle phi = m.make(alg, s);
          worst = std::max(worst, check_hypothesis(phi, h, Lambda(l), s, 200, tol).max_residual);
          ++runs;
        }
        if (l == 0.0) continue;
        for (Hypothesis h : {Hypothesis::H3, Hypothesis::H4}) {
          Sampler s = sampler_for("basic|" + m.name + "|" + alg.label() + "|" + to_string(h) + "|" + std::to_string(l));
          const MapHandle phi = m.make(alg, s);
          for (const auto& r : check_basic_properties(phi, h, Lambda(l), s, 50, tol)) {
            ++basic_runs;
            if (!r.pass || r.max_residual >= 1e-7) {
              ++basic_failed;
              std::cerr << "  basic failure: " << m.name << " " << alg.label() << " " << r.property << " "
                        << r.max_residual << "\n";
            }
          }
        }
      }
    }
  }
  v.require(worst < 1e-7, "hypotheses");
  v.require(basic_failed == 0, "basic properties");
  v.detail << runs << " hypothesis runs x 200 trials, max residual " << sci(worst) << "; " << basic_runs
           << " basic-property reports, " << basic_failed << " failed";
}

// 7 -------------------------------------------------------------------------

/// h3 residual for a single pair (a, b).
double h3_residual(const MapHandle& phi, const AlgElem& a, const AlgElem& b, Lambda l) {
  const AlgElem lhs = phi(aluthge(AlgElem(a * adjoint(b)), l));
  const AlgElem rhs = aluthge(AlgElem(phi(a) * adjoint(phi(b))), l);
  return relative_distance(lhs, rhs);
}

void discriminators(Verdict& v) {
  const Tolerance tol;
  const VNAlgebra m2{2};
  const AlgElem one = AlgElem::identity(m2);
  std::ostringstream info;
  for (Complex c : {Complex(1, 0), Complex(0, 1)}) {
    for (double l : kPositive) {
      Sampler s = sampler_for("exceptional|" + std::to_string(c.imag()) + "|" + std::to_string(l));
      const MapHandle phi = make_handle(ExceptionalI2(c, s.unitary(m2)), m2);
      const double bmn = check_aluthge_commutation(phi, Lambda(l), s, 200, tol).max_residual;
      const double h3 = h3_residual(phi, one, one, Lambda(l));
      v.require(bmn < 1e-7, "exceptional BMN (c=" + sci(c.real()) + "+" + sci(c.imag()) + "i)");
      v.require(h3 >= 1.0, "exceptional h3 at (1,1)");
      if (l == 0.5) v.detail << "exceptional c=" << c << ": BMN " << sci(bmn) << ", h3(1,1) " << h3 << "; ";

      const MapHandle norm = make_handle(ExceptionalI2(c, s.unitary(m2), TraceNormalization::Normalized), m2);
      if (l == 0.5) {
        info << " [info: normalized trace, c=" << c << ": Phi(1) norm " << norm(one).norm() << ", h3(1,1) "
             << h3_residual(norm, one, one, Lambda(l)) << ", BMN "
             << sci(check_aluthge_commutation(norm, Lambda(l), s, 200, tol).max_residual) << "]";
      }
    }
  }
  for (const auto& alg : kProfiles) {
    for (double l : kPositive) {
      Sampler s = sampler_for("scalar_multiple|" + alg.label() + "|" + std::to_string(l));
      const MapHandle phi = make_handle(ScalarMultiple(Complex(0, 2), UnitaryConj(s.unitary(alg))), alg);
      const double bmn = check_aluthge_commutation(phi, Lambda(l), s, 200, tol).max_residual;
      const AlgElem id = AlgElem::identity(alg);
      const double h3 = h3_residual(phi, id, id, Lambda(l));
      v.require(bmn < 1e-7, "scalar multiple BMN");
      v.require(h3 > 1e-7, "scalar multiple h3");
      if (l == 0.5 && alg == kProfiles.front()) {
        v.detail << "2i*unitary_conj: BMN " << sci(bmn) << ", h3(1,1) " << h3;
      }
    }
  }
  v.detail << info.str();
}

// 8 -------------------------------------------------------------------------

const PropertySpec& registered(const std::string& id) { return *select_properties(id).front(); }

void abelian(Verdict& v) {
  const Tolerance tol;
  const VNAlgebra ab{1};
  const AlgElem one = AlgElem::identity(ab);
  for (const auto& [name, map] : {std::pair<std::string, PreserverMap>{"abelian_inverse", AbelianInverse{}},
                                  std::pair<std::string, PreserverMap>{"abelian_zabsz", AbelianZAbsZ{}}}) {
    const MapHandle phi = make_handle(map, ab);
    double h3 = 0;
    for (double l : kGrid) {
      Sampler s = sampler_for(name + "|" + std::to_string(l));
      h3 = std::max(h3, check_hypothesis(phi, Hypothesis::H3, Lambda(l), s, 200, tol).max_residual);
    }
    const double add = additivity_residual(phi, one, one);
    v.require(h3 < 1e-9, name + " h3");
    v.require(add > 10.0 * tol.eq_tol, name + " additivity witness");

    SuiteConfig cfg;
    cfg.profiles = {ab};
    const PropertyOutcome hyp = run_property(registered("h3:" + name), cfg);
    const PropertyOutcome sum = run_property(registered("additivity:" + name), cfg);
    v.require(hyp.expected == Expectation::Pass && hyp.observed_pass && hyp.ok, name + " h3 bookkeeping");
    v.require(sum.expected == Expectation::Fail && !sum.observed_pass && sum.ok, name + " additivity bookkeeping");
    v.detail << name << ": h3 max " << sci(h3) << ", additivity at (1,1) " << add << "; ";
  }
  v.detail << "suite records h3 pass / additivity expected-fail";
}

// 9 -------------------------------------------------------------------------

void scalar_maps(Verdict& v) {
  const Tolerance tol;
  const auto grid = default_scalar_grid();
  double id_res = 0, conj_res = 0, compression = 0;
  for (const auto& alg : kProfiles) {
    Sampler s = sampler_for("scalar|" + alg.label());
    const ScalarMap hu = extract_scalar_map(make_handle(UnitaryConj(s.unitary(alg)), alg), grid, tol);
    const ScalarMap hc = extract_scalar_map(make_handle(ConjLinearConj(s.unitary(alg)), alg), grid, tol);
    v.require(hu.classification == ScalarClass::Identity, "identity class on " + alg.label());
    v.require(hc.classification == ScalarClass::Conjugation, "conjugation class on " + alg.label());
    id_res = std::max(id_res, hu.identity_residual);
    conj_res = std::max(conj_res, hc.conjugation_residual);
    for (const auto& m : isomorphisms()) {
      const MapHandle phi = m.make(alg, s);
      compression = std::max(compression, check_compression_identity(phi, s, 200, tol).max_residual);
    }
  }
  v.require(grid.size() == 16, "grid size");
  v.require(id_res <= 1e-9 && conj_res <= 1e-9, "scalar residuals");
  v.require(compression < 1e-7, "compression identity");
  v.detail << grid.size() << "-point grid, identity residual " << sci(id_res) << ", conjugation residual "
           << sci(conj_res) << "; compression max " << sci(compression);
}

// 10 ------------------------------------------------------------------------

void adjoint_witness(Verdict& v) {
  const Tolerance tol;
  double smallest = INFINITY;
  int pairs = 0;
  for (double l : {0.25, 0.5, 0.75}) {
    Sampler s = sampler_for("adjoint|" + std::to_string(l));
    for (int k = 0; k < 50; ++k) {
      const Eigen::Index n = 2 + k % 4;
      CVector xi, eta;
      double overlap = 0;
      // Non-orthogonal and linearly independent, with a margin on both sides.
      do {
        xi = s.unit_vector(n);
        eta = s.unit_vector(n);
        overlap = std::abs(eta.dot(xi));
      } while (overlap < 0.05 || overlap > 0.999);
      smallest = std::min(smallest, adjoint_defect(xi, eta, Lambda(l), tol));
      ++pairs;
    }
  }
  v.require(smallest > 1e-3, "defect");
  v.detail << pairs << " pairs, smallest defect " << sci(smallest);
}

// 11 ------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Verdict& v) {
  const fs::path dir = fs::path(ALUTHGE_ACCEPTANCE_DIR) / "acceptance_work";
  fs::create_directories(dir);
  std::string reports[2];
  double worst = 0;
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / ("report" + std::to_string(k) + ".json");
    const std::string cmd =
        std::string(ALUTHGE_LAB) + " verify --seed 42 --suite all --report " + out.string() + " 2>/dev/null";
    const auto t0 = Clock::now();
    const int status = std::system(cmd.c_str());
    worst = std::max(worst, seconds_since(t0));
    v.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "verify exit status");
    reports[k] = slurp(out);
  }
  v.require(!reports[0].empty() && reports[0] == reports[1], "byte-identical reports");
  v.require(worst < 120.0, "runtime");
  v.detail << "two runs, " << reports[0].size() << " bytes each, identical=" << (reports[0] == reports[1])
           << ", slowest " << worst << " s";
}

}  // namespace
}  // namespace aluthge

int main() {
  using namespace aluthge;
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"polar decomposition", polar},
      {"fixed points are the quasi-normal elements", fixed_point},
      {"kernel: D(a) = 0 iff a^2 = 0", kernel},
      {"rank-one closed form", rank_one},
      {"M_2 lemma", m2_lemma},
      {"isomorphisms satisfy h1-h4 and the basic properties", isomorphism_hypotheses},
      {"BMN commutation does not imply h3", discriminators},
      {"abelian counterexamples", abelian},
      {"scalar map and compression identity", scalar_maps},
      {"adjoint non-commutation witness", adjoint_witness},
      {"deterministic full suite", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      criteria[k].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    if (!v.pass) ++failed;
    std::cout << "criterion " << (k + 1) << " " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[k].first
              << ": " << v.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
