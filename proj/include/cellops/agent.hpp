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

#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellops/audit_log.hpp"
#include "cellops/config_diff.hpp"
#include "cellops/kpi.hpp"
#include "cellops/policy.hpp"
#include "cellops/provider.hpp"
#include "cellops/rag.hpp"
#include "cellops/station_host.hpp"
#include "cellops/tools.hpp"

namespace cellops {

enum class Approval { kNotRequired, kPending, kApproved, kRejected };
enum class Outcome { kCompleted, kRolledBack, kIterationLimit, kProviderError };

const char* to_string(Approval a);
const char* to_string(Outcome o);

struct ProposedDiff {
  std::optional<CellConfig> old_config;
  CellConfig new_config;
  std::vector<ConfigDiffEntry> entries;
  bool operator==(const ProposedDiff&) const = default;
};

/// One user request and everything the loop did about it.
struct AgentTurn {
  std::string turn_id;
  std::string user_message;
  std::vector<ToolCall> iterations;    // calls the model asked for, at most max_iterations
  std::vector<ToolCall> engine_calls;  // verification reads and rollback steps run by the loop itself
  std::vector<std::string> retrieved_citations;
  std::optional<ProposedDiff> proposed_diff;
  Approval approval = Approval::kNotRequired;
  std::string final_answer;
  std::optional<Outcome> outcome;  // unset while the turn is running or suspended

  bool operator==(const AgentTurn&) const = default;
};

void to_json(nlohmann::json& j, const ProposedDiff& d);
void to_json(nlohmann::json& j, const AgentTurn& t);

struct TurnEvent {
  std::string type;  // turn_started | tool_call | approval_required | turn_finished
  nlohmann::json data;
};

using EventSink = std::function<void(const TurnEvent&)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;

void real_sleep(std::chrono::milliseconds d);

/// Everything a turn needs from its session. References must outlive the
/// turn.
struct SessionContext {
  std::string session_id;
  StationHost& station;
  const rag::KnowledgeBase& kb;
  AuditLog& audit;
  Provider& provider;
  Policy policy;
  std::string system_prompt;
  Sleeper sleep = real_sleep;
};

/// Resumable agent loop for one turn.
///
/// run() assembles the prompt (system prompt, conversation, top-k manual
/// chunks for the user message), then alternates provider asks and tool
/// executions until the model answers, the iteration budget runs out, or the
/// provider fails after its retries. Guardrails:
///  - station.apply_config is refused unless config.validate reported
///    valid == true on the byte-identical config earlier in the turn;
///  - with policy.require_approval, apply_config suspends the turn (run()
///    returns kSuspended) until resolve() delivers the operator decision;
///  - after a successful start that follows an apply, the loop reads KPIs
///    itself and rolls back to the pre-turn config on a regression.
class TurnRunner {
 public:
  enum class Status { kSuspended, kFinished };

  TurnRunner(SessionContext& ctx, std::string turn_id, std::string user_message,
             std::vector<ChatMessage> history = {}, EventSink sink = nullptr);

  Status run();
  /// Throws Error("no-pending-approval") unless the turn is suspended.
  void resolve(bool approved);

  bool suspended() const { return pending_.has_value(); }
  bool finished() const { return turn_.outcome.has_value(); }
  const AgentTurn& turn() const { return turn_; }

 private:
  void begin();
  void finish(Outcome outcome, std::string answer);
  std::optional<ProviderResponse> ask_with_retries(std::string& failure);
  void handle_tool_request(ToolRequest request);
  void complete_call(ToolCall call);
  void execute_apply(ToolCall& call);
  void verify_after_start(ToolCall& start_call);
  void rollback(nlohmann::json& report);
  ToolCall engine_call(const std::string& name, nlohmann::json args, const std::string& origin);
  void emit(const std::string& type, nlohmann::json data);
  void add_citations(const nlohmann::json& kb_result);

  SessionContext& ctx_;
  ToolContext tools_;
  EventSink sink_;
  AgentTurn turn_;
  ProviderRequest request_;
  bool started_ = false;
  bool rolled_back_ = false;
  bool verification_pending_ = false;
  std::optional<KpiSummary> baseline_;
  std::optional<CellConfig> pre_turn_config_;
  Lifecycle pre_turn_lifecycle_ = Lifecycle::kStopped;
  std::set<std::string> validated_configs_;  // canonical bytes
  std::optional<ToolCall> pending_;
  int call_counter_ = 0;
};

/// Runs a whole turn synchronously. When the turn suspends for approval,
/// `decide` supplies the operator decision; without one the change is
/// rejected.
AgentTurn run_turn(SessionContext& ctx, const std::string& turn_id, const std::string& user_message,
                   std::vector<ChatMessage> history = {}, EventSink sink = nullptr,
                   std::function<bool(const AgentTurn&)> decide = nullptr);

/// Loads a prompt asset (prompts/system_prompt.v1.txt by default).
std::string load_system_prompt(const std::filesystem::path& path);
std::filesystem::path default_system_prompt_path();

}  // namespace cellops
