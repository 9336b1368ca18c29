#include "aluthge/serialize.hpp"

#include <cmath>
#include <string>

namespace aluthge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void parse_error(const std::string& what) { throw Error(Errc::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_error(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_error(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

CMatrix cmatrix_from_json(const Json& j) {
  const Json& rows = field(j, "rows");
  const Json& cols = field(j, "cols");
  if (!rows.is_number_integer() || !cols.is_number_integer()) parse_error("rows/cols must be integers");
  const auto r = rows.get<long long>();
  const auto c = cols.get<long long>();
  if (r < 0 || c < 0) parse_error("negative matrix dimension");
  const Json& re = field(j, "re");
  const Json& im = j.contains("im") ? j.at("im") : Json();
  const auto count = static_cast<std::size_t>(r * c);
  if (!re.is_array() || re.size() != count) parse_error("\"re\" must hold rows*cols numbers");
  if (!im.is_null() && (!im.is_array() || im.size() != count)) {
    parse_error("\"im\" must hold rows*cols numbers");
  }
  CMatrix m(r, c);
  for (std::size_t k = 0; k < count; ++k) {
    const double x = number(re[k], "matrix entry");
    const double y = im.is_null() ? 0.0 : number(im[k], "matrix entry");
    m(static_cast<Eigen::Index>(k) / c, static_cast<Eigen::Index>(k) % c) = Complex(x, y);
  }
  require_finite(m);
  return m;
}

Json to_json(const AlgElem& a) {
  Json out;
  out["block_dims"] = a.algebra().block_dims();
  Json blocks = Json::array();
  for (const auto& b : a.blocks()) blocks.push_back(to_json(b));
  out["blocks"] = std::move(blocks);
  return out;
}

AlgElem algelem_from_json(const Json& j) {
  // A bare matrix is accepted as a one-block element.
  if (j.is_object() && j.contains("rows") && !j.contains("blocks")) {
    CMatrix m = cmatrix_from_json(j);
    require_square(m);
    const VNAlgebra alg{m.rows()};  // read before m is moved from
    return AlgElem(alg, {std::move(m)});
  }
  const Json& dims = field(j, "block_dims");
  const Json& blocks = field(j, "blocks");
  if (!dims.is_array() || !blocks.is_array()) parse_error("block_dims and blocks must be arrays");
  std::vector<Eigen::Index> d;
  for (const auto& x : dims) {
    if (!x.is_number_integer()) parse_error("block_dims entries must be integers");
    d.push_back(x.get<Eigen::Index>());
  }
  std::vector<CMatrix> mats;
  for (const auto& b : blocks) mats.push_back(cmatrix_from_json(b));
  try {
    return AlgElem(VNAlgebra(std::move(d)), std::move(mats));
  } catch (const Error& e) {
    if (e.code() == Errc::NonFinite) throw;
    parse_error(e.what());
  }
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) parse_error("complex numbers are [re, im]");
  return Complex(number(j[0], "real part"), number(j[1], "imaginary part"));
}

Json to_json(const PreserverMap& phi) {
  Json out;
  out["kind"] = kind_name(phi);
  std::visit(overloaded{
                 [&](const UnitaryConj& m) { out["v"] = to_json(m.v); },
                 [&](const ConjLinearConj& m) { out["v"] = to_json(m.v); },
                 [&](const TransposeConj& m) {
                   out["v"] = to_json(m.v);
                   out["conjugate"] = m.conjugate;
                 },
                 [&](const ExceptionalI2& m) {
                   out["c"] = to_json(m.c);
                   out["v"] = to_json(m.v);
                   out["trace"] = m.trace == TraceNormalization::Normalized ? "normalized" : "unnormalized";
                 },
                 [&](const CentralSplit& m) {
                   out["p_c"] = to_json(m.p_c);
                   out["linear_v"] = to_json(m.linear_v);
                   out["conj_v"] = to_json(m.conj_v);
                 },
                 [&](const AbelianInverse&) {},
                 [&](const AbelianZAbsZ&) {},
                 [&](const ScalarMultiple& m) {
                   out["c"] = to_json(m.c);
                   out["inner"] = to_json(*m.inner);
                 },
                 [&](const Composed& m) {
                   Json maps = Json::array();
                   for (const auto& f : m.maps) maps.push_back(to_json(*f));
                   out["maps"] = std::move(maps);
                 },
             },
             phi);
  return out;
}

PreserverMap preserver_from_json(const Json& j) {
  const Json& kind_json = field(j, "kind");
  if (!kind_json.is_string()) parse_error("\"kind\" must be a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "unitary_conj") return UnitaryConj(algelem_from_json(field(j, "v")));
  if (kind == "conj_linear_conj") return ConjLinearConj(algelem_from_json(field(j, "v")));
  if (kind == "transpose_conj") {
    const bool conj = j.contains("conjugate") && j.at("conjugate").get<bool>();
    return TransposeConj(algelem_from_json(field(j, "v")), conj);
  }
  if (kind == "exceptional_i2") {
    auto trace = TraceNormalization::Unnormalized;
    if (j.contains("trace")) {
      const auto t = j.at("trace").get<std::string>();
      if (t == "normalized") {
        trace = TraceNormalization::Normalized;
      } else if (t != "unnormalized") {
        parse_error("trace must be \"normalized\" or \"unnormalized\"");
      }
    }
    return ExceptionalI2(complex_from_json(field(j, "c")), algelem_from_json(field(j, "v")), trace);
  }
  if (kind == "central_split") {
    return CentralSplit(algelem_from_json(field(j, "p_c")), algelem_from_json(field(j, "linear_v")),
                        algelem_from_json(field(j, "conj_v")));
  }
  if (kind == "abelian_inverse") return AbelianInverse{};
  if (kind == "abelian_zabsz") return AbelianZAbsZ{};
  if (kind == "scalar_multiple") {
    return ScalarMultiple(complex_from_json(field(j, "c")), preserver_from_json(field(j, "inner")));
  }
  if (kind == "composed") {
    const Json& maps = field(j, "maps");
    if (!maps.is_array()) parse_error("\"maps\" must be an array");
    std::vector<PreserverMap> out;
    for (const auto& m : maps) out.push_back(preserver_from_json(m));
    return Composed(std::move(out));
  }
  parse_error("unknown map kind \"" + kind + "\"");
}

Json to_json(const TrialReport& r) {
  Json out;
  out["property"] = r.property;
  out["samples"] = r.samples;
  out["vacuous"] = r.vacuous;
  if (std::isfinite(r.max_residual)) {
    out["max_residual"] = r.max_residual;
  } else {
    out["max_residual"] = "inf";
  }
  out["verdict"] = r.pass ? "pass" : "fail";
  out["seed"] = r.seed;
  if (!r.note.empty()) out["note"] = r.note;
  if (!r.counterexample.empty()) {
    Json payload;
    for (const auto& [name, value] : r.counterexample) payload[name] = to_json(value);
    out["counterexample"] = std::move(payload);
  }
  return out;
}

}  // namespace aluthge
