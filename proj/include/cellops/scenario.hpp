/*
 * Copyright 2026 The cellops Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellops/agent.hpp"
#include "cellops/service.hpp"

namespace cellops {

/// A replayable demonstration: a station seed, policy overrides, a provider
/// and an ordered list of steps.
///
///   {"name": "...", "station_seed": 42, "policy": {...},
///    "provider": {"kind": "scripted", "script": [...]} | {"kind": "live"},
///    "steps": [{"say": "..."}, {"approve": true}, {"reject": true},
///              {"inject_fault": "SYNC_LOSS"}, {"tick": 5, "dt_s": 1.0},
///              {"expect": {<one predicate>}}]}
///
/// Predicates:
///   {"lifecycle": "RUNNING"}                   station lifecycle
///   {"fault": "SYNC_LOSS" | null}              active fault
///   {"outcome": "completed"}                   last turn
///   {"approval": "pending"}                    last turn
///   {"tool_calls": {"op": "<=", "value": 6}}   last turn's iterations
///   {"answer_contains": "SYNC_LOSS"}           last turn's final answer
///   {"citations_include": "doc#0001" | {"heading_contains": "..."}}
///   {"config_matches_pre_turn": true|false}    byte equality with the config before the last turn
///   {"active_config": {field: value, ...}}     subset match
///   {"kpi": {"metric": "...", "op": ">", "value": 0, "window": 5}}
///       summary of the last `window` samples; metrics are the KpiSummary
///       fields
struct Scenario {
  std::string name;
  std::uint64_t station_seed = 42;
  nlohmann::json policy = nlohmann::json::object();
  std::string provider_kind = "scripted";
  nlohmann::json script = nlohmann::json::array();
  nlohmann::json steps = nlohmann::json::array();
};

/// Throws Error("bad-scenario") for structural problems, including a
/// scenario without any expect step.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

struct StepResult {
  std::size_t step = 0;  // 1-based index into steps
  std::string description;
  bool passed = false;
  std::string detail;  // observed value or failure reason
  bool operator==(const StepResult&) const = default;
};

struct ScenarioResult {
  std::string name;
  std::vector<StepResult> checks;  // expects plus any step that could not run
  std::vector<AgentTurn> turns;
  std::vector<AuditRecord> audit;
  StationSnapshot final_station;
  bool passed() const;
};

void to_json(nlohmann::json& j, const StepResult& r);
/// {"name", "passed", "checks"}; turns and audit are left out.
nlohmann::json summary_json(const ScenarioResult& r);
/// Aligned pass/fail table, one line per check.
std::string format_table(const ScenarioResult& r);

struct ScenarioOptions {
  std::optional<std::uint64_t> seed;  // overrides station_seed
  bool auto_approve = false;          // disables the approval gate; approve/reject steps become no-ops
  ProviderSettings live;              // used when the scenario asks for a live provider
};

/// Runs every step in order on a fresh station with a logical audit clock.
ScenarioResult run_scenario(const Scenario& scenario, const ScenarioOptions& options = {});

}  // namespace cellops
