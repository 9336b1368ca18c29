#pragma once

// Registry of named, seeded property checks and the deterministic report
// built from running a selection of them.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aluthge/preservers.hpp"
#include "aluthge/serialize.hpp"

namespace aluthge {

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::vector<double> lambda_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<VNAlgebra> profiles{VNAlgebra{2}, VNAlgebra{3}, VNAlgebra{2, 2}, VNAlgebra{1},
                                  VNAlgebra{1, 2}};
  int trials = 200;
  Tolerance tol;

  void validate() const;
};

enum class Expectation { Pass, Fail };

struct PropertyRun {
  std::string profile;
  std::optional<double> lambda;
  TrialReport report;
};

/// One named check. `body` receives the profile, the lambda (if the property
/// sweeps the grid) and a sampler seeded for this (property, profile, lambda).
struct PropertySpec {
  std::string id;
  std::string description;
  Expectation expected = Expectation::Pass;
  /// Which configured profiles the property runs on.
  std::function<bool(const VNAlgebra&)> applies;
  /// Used when no configured profile applies.
  VNAlgebra fallback{2};
  bool sweeps_lambda = false;
  bool positive_lambda = false;
  std::function<std::vector<TrialReport>(const VNAlgebra&, std::optional<Lambda>, Sampler&,
                                         const SuiteConfig&)>
      body;
};

const std::vector<PropertySpec>& property_registry();

struct PropertyOutcome {
  std::string id;
  Expectation expected;
  bool observed_pass = true;
  bool ok = true;
  std::vector<PropertyRun> runs;
};

/// Runs one property over the configured profiles and lambda grid.
PropertyOutcome run_property(const PropertySpec& spec, const SuiteConfig& config);

/// Resolves "all" or a comma-separated list of ids (a trailing '*' matches a
/// prefix, e.g. "h3:*"). Throws InvalidArgument on unknown ids or an empty list.
std::vector<const PropertySpec*> select_properties(const std::string& selection);

struct SuiteResult {
  Json report;
  bool all_ok = true;
};

SuiteResult run_suite(const SuiteConfig& config, const std::vector<const PropertySpec*>& selection);

/// "2,2" -> VNAlgebra{2, 2}; profiles separated by ';' or whitespace.
VNAlgebra parse_profile(const std::string& text);
std::vector<VNAlgebra> parse_profiles(const std::string& text);

}  // namespace aluthge
