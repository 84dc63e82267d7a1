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

// A complete single-session setup around one scripted provider: station,
// manual index from data/kb, logical-clock audit log and a recording sleeper.

#include <chrono>
#include <memory>
#include <vector>

#include "cellops/agent.hpp"
#include "cellops/band_table.hpp"
#include "cellops/config_json.hpp"
#include "cellops/scripted_provider.hpp"

namespace agent_rig {

inline std::shared_ptr<const cellops::rag::Index> manual_index() {
  static const auto index = std::make_shared<const cellops::rag::Index>(
      cellops::rag::Index::build(cellops::rag::ingest_directory(cellops::default_data_dir() / "data" / "kb").chunks));
  return index;
}

inline nlohmann::json call(const std::string& name, nlohmann::json args = nlohmann::json::object()) {
  return {{"tool_call", {{"name", name}, {"args", std::move(args)}}}};
}

inline nlohmann::json final_answer(const std::string& text) { return {{"final", text}}; }

struct Rig {
  explicit Rig(nlohmann::json script, std::uint64_t seed = 42, cellops::Policy policy = {})
      : station(seed, std::make_shared<const cellops::BandTable>(cellops::BandTable::load_default())),
        kb(manual_index()),
        audit(cellops::logical_clock()),
        provider(cellops::ScriptedProvider::from_json(script)),
        ctx{"s1", station, kb, audit, provider, policy, "system prompt",
            [this](std::chrono::milliseconds d) { sleeps.push_back(d.count()); }} {}

  cellops::AgentTurn turn(const std::string& message, bool approve = true) {
    return cellops::run_turn(ctx, "t" + std::to_string(++turns), message, {}, nullptr,
                             [approve](const cellops::AgentTurn&) { return approve; });
  }

  cellops::StationHost station;
  cellops::rag::KnowledgeBase kb;
  cellops::AuditLog audit;
  cellops::ScriptedProvider provider;
  cellops::SessionContext ctx;
  std::vector<std::int64_t> sleeps;
  int turns = 0;
};

inline cellops::Policy no_approval() {
  cellops::Policy p;
  p.require_approval = false;
  return p;
}

}  // namespace agent_rig
