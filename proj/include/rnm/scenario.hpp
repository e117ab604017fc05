#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnm/dynamics.hpp"

namespace rnm {

/// Convergence-check knobs shared by every scenario.
struct CheckParams {
  double epsilon = 1e-3;
  double lambda = 0.01;
  double tail_fraction = 0.25;  // the checked tail is the last quarter
  double conclusion_tol = 1e-6;
  int horizon = 64;
  std::uint64_t seed = 20240;
};

/// A parsed scenario file: space, fiber, body, map and sequence sections are
/// kept as validated documents and instantiated by the experiment runner.
struct ScenarioConfig {
  std::string name;
  std::vector<double> weights;
  int dimension = 1;
  double q = 2.0;
  nlohmann::json body;
  nlohmann::json map;
  nlohmann::json sequence;
  CheckParams checks;

  static ScenarioConfig from_json(const nlohmann::json& doc,
                                  const std::string& fallback_name);
  static ScenarioConfig from_file(const std::string& path);

  /// Canonical form with defaults filled in; hashing and echoing use this.
  nlohmann::json to_json() const;

  /// FNV-1a over the canonical serialization, as 16 hex digits.
  std::string hash() const;
};

/// Scenario-level builders; each throws ConfigError on malformed sections.
SpacePtr build_space(const ScenarioConfig& config);
FiberSpec build_fiber(const ScenarioConfig& config);
ConvexBody build_body(const SpacePtr& space, const FiberSpec& fiber,
                      const nlohmann::json& body);
AsymptoticMap build_map(const ConvexBody& body, const nlohmann::json& map);

/// Constructor names build_map accepts.
const std::vector<std::string>& registered_constructors();

}  // namespace rnm
