#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aluthge/suite.hpp"

using namespace aluthge;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(ALUTHGE_TEST_DIR) / "cli_work";

int run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + ALUTHGE_LAB + std::string(" ") + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path matrix_file(const std::string& name, const CMatrix& m) { return write_file(name, to_json(m).dump()); }

CMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

AlgElem transform_file(const fs::path& in, const std::string& lambda) {
  const fs::path out = kWork / (in.stem().string() + "_out.json");
  REQUIRE(run("transform --lambda " + lambda + " --in " + in.string() + " --out " + out.string()) == 0);
  return algelem_from_json(Json::parse(read_file(out)));
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("transform examples") {
  const AlgElem id = transform_file(matrix_file("id.json", CMatrix::Identity(2, 2)), "0.3");
  CHECK(relative_distance(id, AlgElem::identity(VNAlgebra{2})) < 1e-15);
  const AlgElem z = transform_file(matrix_file("nil.json", m2(0, 1, 0, 0)), "0.5");
  CHECK(z.norm() < 1e-15);
  const AlgElem r = transform_file(matrix_file("r1.json", m2(1, 1, 0, 0)), "0.5");
  CHECK(relative_distance(r.block(0), m2(0.5, 0.5, 0.5, 0.5)) < 1e-14);
}

TEST_CASE("transform error exits") {
  const fs::path bad = write_file("bad.json", "{not json");
  CHECK(run("transform --lambda 0.5 --in " + bad.string()) == 2);
  const fs::path shape = write_file("shape.json", R"({"rows":2,"cols":2,"re":[1]})");
  CHECK(run("transform --lambda 0.5 --in " + shape.string()) == 2);
  const fs::path ok = matrix_file("ok.json", CMatrix::Identity(2, 2));
  CHECK(run("transform --lambda 1.5 --in " + ok.string() + " --out -") == 2);
  CHECK(run("transform --in " + ok.string()) == 2);
  CHECK(run("transform --lambda 0.5 --in " + (kWork / "missing.json").string()) == 2);
  CHECK(run("bogus") == 2);
}

TEST_CASE("verify exit codes") {
  const fs::path rep = kWork / "fp.json";
  CHECK(run("verify --seed 42 --suite fixed_point --profiles 3 --trials 50 --report " + rep.string()) == 0);
  const Json j = Json::parse(read_file(rep));
  CHECK(j["properties"][0]["ok"] == true);
  CHECK(run("verify --seed 42 --suite h3:exceptional_i2 --trials 20 --report " + rep.string()) == 0);
  CHECK(run("verify --suite \"\" --report " + rep.string()) == 2);
  CHECK(run("verify --suite no_such_property --report " + rep.string()) == 2);
  CHECK(run("verify --suite polar --profiles 0 --report " + rep.string()) == 2);
  // A tolerance far below double precision makes round-off a failure.
  CHECK(run("verify --suite polar --trials 20 --report " + rep.string(), "ALUTHGE_TOL=1e-30") == 1);
  const Json failed = Json::parse(read_file(rep));
  CHECK(failed["config"]["tolerance"]["eq_tol"] == 1e-30);
  CHECK(failed["properties"][0]["runs"][0].contains("counterexample"));
  CHECK(run("verify --suite polar --report " + rep.string(), "ALUTHGE_TOL=abc") == 2);
}

TEST_CASE("listing") {
  const fs::path out = kWork / "list.txt";
  REQUIRE(run("list-properties > " + out.string()) == 0);
  const auto listed = lines(read_file(out));
  CHECK(listed.size() == property_registry().size());
  REQUIRE(run("verify --list > " + out.string()) == 0);
  CHECK(lines(read_file(out)).size() == listed.size());
}

TEST_CASE("orbit output") {
  const fs::path normal = matrix_file("normal.json", m2(2, 0, 0, Complex(0, 1)));
  const fs::path csv = kWork / "orbit.csv";
  REQUIRE(run("orbit --lambda 0.5 --steps 4 --in " + normal.string() + " --out " + csv.string()) == 0);
  auto rows = lines(read_file(csv));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "step,qn_residual,dist_prev");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    std::stringstream ss(rows[k]);
    std::string step, qn, dist;
    std::getline(ss, step, ',');
    std::getline(ss, qn, ',');
    std::getline(ss, dist, ',');
    CHECK(std::stod(qn) < 1e-14);
    CHECK(std::stod(dist) < 1e-14);
  }

  const fs::path nil = matrix_file("nil_orbit.json", m2(0, 3, 0, 0));
  REQUIRE(run("orbit --lambda 0.5 --steps 3 --in " + nil.string() + " --out " + csv.string()) == 0);
  rows = lines(read_file(csv));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].rfind("1,0,3", 0) == 0);  // zero after one step, moved by |a| = 3
  CHECK(rows[2] == "2,0,0");

  REQUIRE(run("orbit --lambda 0.5 --steps 50 --random 4 --seed 7 --out " + csv.string()) == 0);
  CHECK(lines(read_file(csv)).size() == 51);
  CHECK(run("orbit --lambda 0.5 --steps 3 --out " + csv.string()) == 2);
}

TEST_CASE("sample writes parseable elements") {
  const fs::path out = kWork / "sample.json";
  REQUIRE(run("sample --kind nilpotent --profile 1,3 --seed 3 --out " + out.string()) == 0);
  const AlgElem a = algelem_from_json(Json::parse(read_file(out)));
  CHECK(a.algebra() == VNAlgebra{1, 3});
  CHECK(AlgElem(a * a).norm() < 1e-12);
  CHECK(run("sample --kind nope --out " + out.string()) == 2);
}
