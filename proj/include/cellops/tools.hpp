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
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cellops/audit_log.hpp"
#include "cellops/rag.hpp"
#include "cellops/station_host.hpp"

namespace cellops {

struct ToolSpec {
  std::string name;
  std::string description;
  nlohmann::json parameters;  // JSON Schema subset: type, properties, required, additionalProperties, items, minimum, maximum
  bool mutates_station = false;
};

/// The closed tool registry offered to the model.
const std::vector<ToolSpec>& tool_registry();
const ToolSpec* find_tool(std::string_view name);
/// `[{name, description, parameters}, ...]` in registry order.
nlohmann::json tool_schemas();

/// Throws Error("schema-violation") naming the offending path.
void validate_against_schema(const nlohmann::json& schema, const nlohmann::json& value, const std::string& path = "args");

struct ToolCall {
  std::string name;
  nlohmann::json args = nlohmann::json::object();
  nlohmann::json result;
  bool ok = false;
  std::int64_t latency_ms = 0;
  std::string origin = "agent";  // agent | verification | rollback

  bool operator==(const ToolCall&) const = default;
};

void to_json(nlohmann::json& j, const ToolCall& c);

struct ToolContext {
  StationHost& station;
  const rag::KnowledgeBase& kb;
  AuditLog& audit;
  std::string session_id;
  std::string turn_id;
};

/// `{"error": {"tool", "code", "message", ...detail}}`
nlohmann::json tool_error(const std::string& tool, const std::string& code, const std::string& message,
                          nlohmann::json detail = nullptr);

/// Validates the call against the registry, dispatches it to the station,
/// the config rules or the knowledge index, and appends it to the audit log
/// before returning. Failures (unknown tool, schema violation, downstream
/// errors) come back as error results with ok == false rather than throwing.
nlohmann::json execute_tool(ToolCall& call, ToolContext& ctx);

/// Audits a call that was decided without being dispatched (e.g. refused by
/// a guardrail).
void record_tool_call(ToolContext& ctx, const ToolCall& call);

}  // namespace cellops
