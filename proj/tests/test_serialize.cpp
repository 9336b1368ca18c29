#include <catch_amalgamated.hpp>

#include "aluthge/serialize.hpp"

using namespace aluthge;

namespace {

Errc parse_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("matrix JSON is row-major with split real and imaginary parts") {
  CMatrix m(2, 2);
  m << Complex(1, 2), Complex(3, 0), Complex(0, -1), Complex(4, 5);
  const Json j = to_json(m);
  CHECK(j.dump() == R"({"rows":2,"cols":2,"re":[1.0,3.0,0.0,4.0],"im":[2.0,0.0,-1.0,5.0]})");
  CHECK(cmatrix_from_json(j) == m);
}

TEST_CASE("imaginary part may be omitted") {
  const Json j = Json::parse(R"({"rows":1,"cols":2,"re":[1,2]})");
  const CMatrix m = cmatrix_from_json(j);
  CHECK(m(0, 1) == Complex(2, 0));
}

TEST_CASE("algebra elements round-trip exactly") {
  Sampler s(1);
  const VNAlgebra alg{1, 3};
  const AlgElem a = s.element(alg);
  CHECK(algelem_from_json(Json::parse(to_json(a).dump())) == a);
  const AlgElem bare = algelem_from_json(to_json(CMatrix(CMatrix::Identity(2, 2))));
  CHECK(bare.algebra() == VNAlgebra{2});
}

TEST_CASE("malformed input is a parse error") {
  CHECK(parse_code([] { cmatrix_from_json(Json::parse(R"({"rows":2,"cols":2,"re":[1,2,3]})")); }) == Errc::Parse);
  CHECK(parse_code([] { cmatrix_from_json(Json::parse(R"({"rows":1,"cols":1,"re":["x"]})")); }) == Errc::Parse);
  CHECK(parse_code([] { cmatrix_from_json(Json::parse("[1,2]")); }) == Errc::Parse);
  CHECK(parse_code([] {
          algelem_from_json(Json::parse(R"({"block_dims":[2],"blocks":[{"rows":3,"cols":3,"re":[0,0,0,0,0,0,0,0,0]}]})"));
        }) == Errc::Parse);
  CHECK(parse_code([] { preserver_from_json(Json::parse(R"({"kind":"nope"})")); }) == Errc::Parse);
  CHECK(parse_code([] { complex_from_json(Json::parse("[1]")); }) == Errc::Parse);
}

TEST_CASE("preserver maps round-trip") {
  Sampler s(2);
  const VNAlgebra alg{2};
  const AlgElem v = s.unitary(alg);
  const std::vector<PreserverMap> maps{
      UnitaryConj(v),
      ConjLinearConj(v),
      TransposeConj(v, true),
      ExceptionalI2(Complex(0, 1), v, TraceNormalization::Normalized),
      CentralSplit(AlgElem::identity(alg), v, v),
      AbelianInverse{},
      AbelianZAbsZ{},
      ScalarMultiple(Complex(2, 0), UnitaryConj(v)),
      Composed({UnitaryConj(v), ConjLinearConj(v)}),
  };
  const AlgElem a = s.element(alg);
  for (const auto& phi : maps) {
    const PreserverMap back = preserver_from_json(Json::parse(to_json(phi).dump()));
    CHECK(kind_name(back) == kind_name(phi));
    if (kind_name(phi).rfind("abelian", 0) != 0) CHECK(aluthge::apply(back, a) == aluthge::apply(phi, a));
  }
}

TEST_CASE("trial reports serialize verdicts and payloads") {
  TrialReport r;
  r.property = "demo";
  r.samples = 3;
  r.max_residual = std::numeric_limits<double>::infinity();
  r.pass = false;
  r.seed = 9;
  r.counterexample = {{"a", AlgElem::identity(VNAlgebra{1})}};
  const Json j = to_json(r);
  CHECK(j["verdict"] == "fail");
  CHECK(j["max_residual"] == "inf");
  CHECK(j["counterexample"].contains("a"));
  r.pass = true;
  r.max_residual = 0.5;
  r.counterexample.clear();
  const Json k = to_json(r);
  CHECK(k["verdict"] == "pass");
  CHECK_FALSE(k.contains("counterexample"));
}
