#pragma once

#include <optional>
#include <string>

#include "safecomp/agents.hpp"

namespace safecomp {

/// Expectations a scenario file can pin; the CLI exits nonzero on the first
/// violated one.
struct ScenarioExpectations {
  std::optional<std::string> final_status;
  std::optional<std::string> result;  // rendered result text
  std::optional<std::set<std::uint64_t>> V;
  std::optional<std::set<std::uint64_t>> L;
  std::optional<std::uint32_t> n;
};

struct ScenarioFile {
  Scenario scenario;
  ScenarioExpectations expect;
};

/// Parses a scenario document (JSON). ScenarioError on malformed input.
ScenarioFile load_scenario(const std::string& json_text, const TaskRegistry& registry);

/// First violated expectation, or nullopt when all hold.
std::optional<std::string> check_expectations(const ScenarioExpectations& expect,
                                              const ScenarioReport& report);

/// Machine-readable report document (JSON).
std::string report_to_json(const ScenarioReport& report);

}  // namespace safecomp
