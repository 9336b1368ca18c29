#include "aluthge/preservers.hpp"

#include <cmath>
#include <limits>

namespace aluthge {

namespace {

void require_unitary(const AlgElem& v, const Tolerance& tol, const char* who) {
  if (!is_unitary(v, tol)) throw Error(Errc::InvalidArgument, std::string(who) + ": v is not unitary");
}

void require_domain(const AlgElem& v, const AlgElem& a) { v.require_same_algebra(a); }

void require_abelian(const AlgElem& a) {
  if (!a.algebra().is_abelian()) {
    throw Error(Errc::AlgebraMismatch, "abelian map applied to [" + a.algebra().label() + "]");
  }
}

AlgElem abelian_map(const AlgElem& a, Complex (*f)(Complex)) {
  require_abelian(a);
  return a.map([&](const CMatrix& b) -> CMatrix { return CMatrix::Constant(1, 1, f(b(0, 0))); });
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

UnitaryConj::UnitaryConj(AlgElem v_, const Tolerance& tol) : v(std::move(v_)) {
  require_unitary(v, tol, "UnitaryConj");
}

ConjLinearConj::ConjLinearConj(AlgElem v_, const Tolerance& tol) : v(std::move(v_)) {
  require_unitary(v, tol, "ConjLinearConj");
}

TransposeConj::TransposeConj(AlgElem v_, bool conjugate_, const Tolerance& tol)
    : v(std::move(v_)), conjugate(conjugate_) {
  require_unitary(v, tol, "TransposeConj");
}

ExceptionalI2::ExceptionalI2(Complex c_, AlgElem v_, TraceNormalization trace_, const Tolerance& tol)
    : c(c_), v(std::move(v_)), trace(trace_) {
  if (c == Complex(0)) throw Error(Errc::InvalidArgument, "ExceptionalI2: c must be nonzero");
  if (!(v.algebra() == VNAlgebra{2})) {
    throw Error(Errc::AlgebraMismatch, "ExceptionalI2 lives on M_2, got [" + v.algebra().label() + "]");
  }
  require_unitary(v, tol, "ExceptionalI2");
}

CentralSplit::CentralSplit(AlgElem p_c_, AlgElem linear_v_, AlgElem conj_v_, const Tolerance& tol)
    : p_c(std::move(p_c_)), linear_v(std::move(linear_v_)), conj_v(std::move(conj_v_)) {
  p_c.require_same_algebra(linear_v);
  p_c.require_same_algebra(conj_v);
  if (!is_projection(p_c, tol) || !is_central(p_c, tol)) {
    throw Error(Errc::NotProjection, "CentralSplit: p_c must be a central projection");
  }
  require_unitary(linear_v, tol, "CentralSplit");
  require_unitary(conj_v, tol, "CentralSplit");
}

ScalarMultiple::ScalarMultiple(Complex c_, PreserverMap inner_)
    : c(c_), inner(std::make_shared<const PreserverMap>(std::move(inner_))) {
  if (c == Complex(0)) throw Error(Errc::InvalidArgument, "ScalarMultiple: c must be nonzero");
}

Composed::Composed(std::vector<PreserverMap> ms) {
  if (ms.empty()) throw Error(Errc::InvalidArgument, "Composed needs at least one map");
  for (auto& m : ms) maps.push_back(std::make_shared<const PreserverMap>(std::move(m)));
}

AlgElem apply(const PreserverMap& phi, const AlgElem& a) {
  return std::visit(
      overloaded{
          [&](const UnitaryConj& m) -> AlgElem {
            require_domain(m.v, a);
            return m.v * a * adjoint(m.v);
          },
          [&](const ConjLinearConj& m) -> AlgElem {
            require_domain(m.v, a);
            return m.v * conjugate(a) * adjoint(m.v);
          },
          [&](const TransposeConj& m) -> AlgElem {
            require_domain(m.v, a);
            return m.v * (m.conjugate ? adjoint(a) : transpose(a)) * adjoint(m.v);
          },
          [&](const ExceptionalI2& m) -> AlgElem {
            require_domain(m.v, a);
            Complex tr = trace(a);
            if (m.trace == TraceNormalization::Normalized) tr /= 2.0;
            return m.c * (m.v * transpose(a) * adjoint(m.v) - AlgElem::scalar(a.algebra(), tr));
          },
          [&](const CentralSplit& m) -> AlgElem {
            require_domain(m.p_c, a);
            const AlgElem rest = AlgElem::identity(a.algebra()) - m.p_c;
            return m.p_c * (m.linear_v * a * adjoint(m.linear_v)) +
                   rest * (m.conj_v * conjugate(a) * adjoint(m.conj_v));
          },
          [&](const AbelianInverse&) -> AlgElem {
            return abelian_map(a, [](Complex z) { return z == Complex(0) ? z : Complex(1) / z; });
          },
          [&](const AbelianZAbsZ&) -> AlgElem {
            return abelian_map(a, [](Complex z) { return z * std::abs(z); });
          },
          [&](const ScalarMultiple& m) -> AlgElem { return m.c * aluthge::apply(*m.inner, a); },
          [&](const Composed& m) -> AlgElem {
            AlgElem out = a;
            for (const auto& f : m.maps) out = aluthge::apply(*f, out);
            return out;
          },
      },
      phi);
}

std::string kind_name(const PreserverMap& phi) {
  return std::visit(
      overloaded{
          [](const UnitaryConj&) -> std::string { return "unitary_conj"; },
          [](const ConjLinearConj&) -> std::string { return "conj_linear_conj"; },
          [](const TransposeConj&) -> std::string { return "transpose_conj"; },
          [](const ExceptionalI2&) -> std::string { return "exceptional_i2"; },
          [](const CentralSplit&) -> std::string { return "central_split"; },
          [](const AbelianInverse&) -> std::string { return "abelian_inverse"; },
          [](const AbelianZAbsZ&) -> std::string { return "abelian_zabsz"; },
          [](const ScalarMultiple&) -> std::string { return "scalar_multiple"; },
          [](const Composed&) -> std::string { return "composed"; },
      },
      phi);
}

MapHandle make_handle(PreserverMap phi, VNAlgebra domain) {
  std::string name = kind_name(phi);
  auto shared = std::make_shared<const PreserverMap>(std::move(phi));
  return MapHandle{std::move(name), std::move(domain),
                   [shared](const AlgElem& a) { return aluthge::apply(*shared, a); }};
}

std::string to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "h1";
    case Hypothesis::H2: return "h2";
    case Hypothesis::H3: return "h3";
    case Hypothesis::H4: return "h4";
  }
  return "h?";
}

std::string to_string(ScalarClass c) {
  switch (c) {
    case ScalarClass::Identity: return "identity";
    case ScalarClass::Conjugation: return "conjugation";
    case ScalarClass::Other: return "other";
  }
  return "other";
}

ResidualTracker::ResidualTracker(std::string property, std::uint64_t seed) {
  report_.property = std::move(property);
  report_.seed = seed;
}

TrialReport ResidualTracker::finish(double limit, std::string note) {
  report_.pass = report_.max_residual < limit;
  if (report_.pass) report_.counterexample.clear();
  report_.note = std::move(note);
  return std::move(report_);
}

}  // namespace aluthge
