// aluthge-lab: transform, orbit and seeded verification from the command line.
//
// Exit codes: 0 success / all properties as expected, 1 property failure,
// 2 usage or parse error, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "aluthge/suite.hpp"

namespace {

using namespace aluthge;

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::NoConvergence:
    case Errc::NonFinite:
    case Errc::NotPSD:
      return kNumeric;
    default:
      return kUsage;
  }
}

/// eq_tol from ALUTHGE_TOL if set; the rest of the policy keeps its defaults.
Tolerance tolerance_from_env() {
  Tolerance tol;
  if (const char* env = std::getenv("ALUTHGE_TOL"); env && *env) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(env).size() || !(v > 0)) {
      throw Error(Errc::InvalidArgument, std::string("ALUTHGE_TOL must be a positive number, got \"") + env + "\"");
    }
    tol.eq_tol = v;
  }
  tol.validate();
  return tol;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, path + ": " + e.what());
  }
}

/// "-" means stdout.
void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path);
  out << text;
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(Errc::Parse, "bad lambda \"" + item + "\"");
    }
    if (used != item.size()) throw Error(Errc::Parse, "bad lambda \"" + item + "\"");
    out.push_back(Lambda(v).value());
  }
  if (out.empty()) throw Error(Errc::Parse, "empty lambda grid");
  return out;
}

AlgElem draw(Sampler& s, const std::string& kind, const VNAlgebra& alg) {
  if (kind == "element") return s.element(alg);
  if (kind == "hermitian") return s.hermitian(alg);
  if (kind == "unitary") return s.unitary(alg);
  if (kind == "projection") return s.projection(alg);
  if (kind == "normal") return s.normal(alg);
  if (kind == "nilpotent") return s.nilpotent(alg);
  if (kind == "rank_one") return s.rank_one(alg);
  if (kind == "partial_isometry") return s.partial_isometry(alg);
  throw Error(Errc::InvalidArgument, "unknown sample kind \"" + kind + "\"");
}

std::string orbit_csv(const AlgElem& a, Lambda lambda, int steps, const Tolerance& tol) {
  const auto orbit = aluthge_orbit(a, lambda, steps, tol);
  std::ostringstream os;
  os << std::setprecision(17);
  os << "step,qn_residual,dist_prev\n";
  for (std::size_t k = 1; k < orbit.size(); ++k) {
    os << k << ',' << quasinormal_residual(orbit[k]) << ',' << (orbit[k] - orbit[k - 1]).norm() << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aluthge transform toolkit and preserver property checker"};
  app.require_subcommand(1);

  double lambda = 0.5;
  std::string in_path, out_path = "-";

  auto* transform = app.add_subcommand("transform", "write Delta_lambda(a) for the element in --in");
  transform->add_option("--lambda", lambda, "lambda in [0, 1]")->required();
  transform->add_option("--in", in_path, "input element JSON")->required();
  transform->add_option("--out", out_path, "output JSON ('-' for stdout)");

  int steps = 10;
  std::uint64_t seed = 42;
  std::string random_profile;
  auto* orbit = app.add_subcommand("orbit", "iterate Delta_lambda and write step,qn_residual,dist_prev as CSV");
  orbit->add_option("--lambda", lambda, "lambda in [0, 1]")->required();
  orbit->add_option("--steps", steps, "number of iterations")->required()->check(CLI::NonNegativeNumber);
  auto* orbit_in = orbit->add_option("--in", in_path, "input element JSON");
  auto* orbit_random =
      orbit->add_option("--random", random_profile, "start from a random element of this block profile instead");
  orbit_in->excludes(orbit_random);
  orbit->add_option("--seed", seed, "seed for --random");
  orbit->add_option("--out", out_path, "output CSV ('-' for stdout)");

  std::string suite = "all", profiles_text, lambdas_text, report_path = "-";
  int trials = 200;
  bool list = false;
  auto* verify = app.add_subcommand("verify", "run seeded property checks and write a JSON report");
  verify->add_option("--seed", seed, "master seed");
  verify->add_option("--suite", suite, "\"all\", or comma-separated ids (a trailing * matches a prefix)");
  verify->add_option("--profiles", profiles_text, "block profiles, e.g. \"2;3;2,2\"");
  verify->add_option("--lambdas", lambdas_text, "lambda grid, e.g. \"0,0.5,1\"");
  verify->add_option("--trials", trials, "trials per property run")->check(CLI::PositiveNumber);
  verify->add_option("--report", report_path, "report path ('-' for stdout)");
  verify->add_flag("--list", list, "list property ids and exit");

  auto* list_props = app.add_subcommand("list-properties", "list property ids, expectations and descriptions");

  std::string kind = "element", profile_text = "2";
  auto* sample = app.add_subcommand("sample", "write a random element as JSON");
  sample->add_option("--kind", kind,
                     "element|hermitian|unitary|projection|normal|nilpotent|rank_one|partial_isometry");
  sample->add_option("--profile", profile_text, "block profile, e.g. \"2,2\"");
  sample->add_option("--seed", seed, "seed");
  sample->add_option("--out", out_path, "output JSON ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  auto print_list = [] {
    for (const auto& spec : property_registry()) {
      std::cout << spec.id << '\t' << (spec.expected == Expectation::Pass ? "pass" : "fail") << '\t'
                << spec.description << '\n';
    }
  };

  try {
    const Tolerance tol = tolerance_from_env();

    if (*transform) {
      const AlgElem a = algelem_from_json(read_json(in_path));
      const AlgElem d = aluthge::aluthge(a, Lambda(lambda), tol);
      write_text(out_path, to_json(d).dump(2) + "\n");
      return kOk;
    }

    if (*orbit) {
      AlgElem a = AlgElem::zero(VNAlgebra{1});
      if (!random_profile.empty()) {
        Sampler s(seed);
        a = s.element(parse_profile(random_profile));
      } else if (!in_path.empty()) {
        a = algelem_from_json(read_json(in_path));
      } else {
        throw Error(Errc::InvalidArgument, "orbit needs --in or --random");
      }
      write_text(out_path, orbit_csv(a, Lambda(lambda), steps, tol));
      return kOk;
    }

    if (*list_props || (*verify && list)) {
      print_list();
      return kOk;
    }

    if (*sample) {
      Sampler s(seed);
      write_text(out_path, to_json(draw(s, kind, parse_profile(profile_text))).dump(2) + "\n");
      return kOk;
    }

    SuiteConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.tol = tol;
    if (!profiles_text.empty()) cfg.profiles = parse_profiles(profiles_text);
    if (!lambdas_text.empty()) cfg.lambda_grid = parse_lambdas(lambdas_text);
    const auto selection = select_properties(suite);
    const SuiteResult result = run_suite(cfg, selection);
    write_text(report_path, result.report.dump(2) + "\n");
    if (report_path != "-") {
      const auto& s = result.report["summary"];
      std::cerr << s["ok"].get<std::size_t>() << "/" << s["properties"].get<std::size_t>()
                << " properties as expected\n";
      for (const auto& p : result.report["properties"]) {
        if (!p["ok"].get<bool>()) std::cerr << "  unexpected: " << p["id"].get<std::string>() << '\n';
      }
    }
    return result.all_ok ? kOk : kPropertyFailure;
  } catch (const Error& e) {
    std::cerr << "aluthge-lab: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "aluthge-lab: " << e.what() << '\n';
    return kNumeric;
  }
}
