#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sociotraffic/model.hpp"
#include "sociotraffic/route_choice.hpp"
#include "sociotraffic/solver.hpp"

// nlohmann::json is forward-declared via the header; scenario files are JSON
// with a versioned top-level schema field.
#include <json.hpp>

namespace sociotraffic::cli {

inline constexpr int kSchemaVersion = 1;

/// A fully validated batch-run description. Exactly one of social /
/// alpha_override supplies the class split.
struct Scenario {
  int schema = kSchemaVersion;
  std::string name;
  std::uint64_t seed = 0;
  std::optional<route_choice::SocialScenario> social;
  std::optional<double> alpha_override;

  // Geometry; alpha is attached when resolved (see resolve_alpha).
  double domain_start = 0.0;
  double junction = 1.0;
  double domain_end = 1.0;

  model::OperatingPoint op;
  solver::SolverConfig solver_config;
  std::string outputs = "out";

  model::ModelParams make_model_params(double alpha) const {
    return {alpha, domain_start, junction, domain_end};
  }
};

/// Parses and validates a scenario file. Malformed JSON raises ParseError
/// with the library's position diagnostics; a well-formed file with invalid
/// content raises ValidationError listing every violation at once.
Scenario parse_scenario(const std::filesystem::path& file);

Scenario parse_scenario_json(const nlohmann::json& j);

nlohmann::json scenario_to_json(const Scenario& scenario);

/// The class split for this scenario: alpha_override when given, otherwise
/// the route-choice pipeline (deterministic in the scenario seed).
double resolve_alpha(const Scenario& scenario);

}  // namespace sociotraffic::cli
