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

#include "cellops/agent.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "cellops/band_table.hpp"
#include "cellops/config_json.hpp"
#include "cellops/sim_json.hpp"

namespace cellops {

using nlohmann::json;

const char* to_string(Approval a) {
  switch (a) {
    case Approval::kNotRequired: return "not_required";
    case Approval::kPending: return "pending";
    case Approval::kApproved: return "approved";
    case Approval::kRejected: return "rejected";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kCompleted: return "completed";
    case Outcome::kRolledBack: return "rolled_back";
    case Outcome::kIterationLimit: return "iteration_limit";
    case Outcome::kProviderError: return "provider_error";
  }
  return "?";
}

void to_json(json& j, const ProposedDiff& d) {
  j = json{{"old_config", d.old_config ? json(*d.old_config) : json(nullptr)},
           {"new_config", d.new_config},
           {"entries", d.entries}};
}

void to_json(json& j, const AgentTurn& t) {
  j = json{{"turn_id", t.turn_id},
           {"user_message", t.user_message},
           {"iterations", t.iterations},
           {"engine_calls", t.engine_calls},
           {"retrieved_citations", t.retrieved_citations},
           {"proposed_diff", t.proposed_diff ? json(*t.proposed_diff) : json(nullptr)},
           {"approval", to_string(t.approval)},
           {"final_answer", t.final_answer},
           {"outcome", t.outcome ? json(to_string(*t.outcome)) : json(nullptr)}};
}

void real_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

TurnRunner::TurnRunner(SessionContext& ctx, std::string turn_id, std::string user_message,
                       std::vector<ChatMessage> history, EventSink sink)
    : ctx_(ctx),
      tools_{ctx.station, ctx.kb, ctx.audit, ctx.session_id, turn_id},
      sink_(std::move(sink)) {
  turn_.turn_id = std::move(turn_id);
  turn_.user_message = std::move(user_message);
  request_.conversation = std::move(history);
}

void TurnRunner::emit(const std::string& type, json data) {
  if (sink_) sink_(TurnEvent{type, std::move(data)});
}

void TurnRunner::begin() {
  started_ = true;
  const auto snap = ctx_.station.snapshot();
  pre_turn_config_ = snap.active_config;
  pre_turn_lifecycle_ = snap.lifecycle;

  request_.system_prompt = ctx_.system_prompt;
  request_.tool_schemas = tool_schemas();
  const auto index = ctx_.kb.current();
  if (ctx_.policy.kb_top_k > 0) {
    for (const auto& hit : index->retrieve(turn_.user_message, static_cast<std::size_t>(ctx_.policy.kb_top_k))) {
      const auto* chunk = index->find(hit.chunk_id);
      request_.retrieved_context.push_back({hit.chunk_id, chunk->heading_path, chunk->text, hit.score});
      turn_.retrieved_citations.push_back(hit.chunk_id);
    }
  }
  request_.conversation.push_back({Role::kUser, turn_.user_message, std::nullopt, {}});
  emit("turn_started", {{"turn_id", turn_.turn_id},
                        {"user_message", turn_.user_message},
                        {"retrieved_citations", turn_.retrieved_citations}});
}

TurnRunner::Status TurnRunner::run() {
  if (finished()) return Status::kFinished;
  if (suspended()) return Status::kSuspended;
  if (!started_) begin();

  while (true) {
    if (static_cast<int>(turn_.iterations.size()) >= ctx_.policy.max_iterations) {
      finish(Outcome::kIterationLimit,
             "I stopped after " + std::to_string(ctx_.policy.max_iterations) +
                 " tool calls without reaching an answer, so I am not making further changes.");
      return Status::kFinished;
    }
    std::string failure;
    auto response = ask_with_retries(failure);
    if (!response) {
      finish(Outcome::kProviderError, "The language model is unavailable (" + failure + "); no answer was produced.");
      return Status::kFinished;
    }
    if (auto* answer = std::get_if<FinalAnswer>(&*response)) {
      finish(Outcome::kCompleted, answer->text);
      return Status::kFinished;
    }
    handle_tool_request(std::get<ToolRequest>(std::move(*response)));
    if (suspended()) return Status::kSuspended;
  }
}

std::optional<ProviderResponse> TurnRunner::ask_with_retries(std::string& failure) {
  for (int attempt = 0; attempt <= ctx_.policy.max_retries; ++attempt) {
    try {
      auto response = ctx_.provider.ask(request_);
      ctx_.audit.append(ctx_.session_id, turn_.turn_id, "provider",
                        {{"attempt", attempt}, {"ok", true}, {"response", response_to_json(response)}});
      return response;
    } catch (const std::exception& e) {
      const auto* pe = dynamic_cast<const ProviderError*>(&e);
      const std::string code = pe != nullptr ? pe->code() : "provider-exception";
      failure = code + ": " + e.what();
      ctx_.audit.append(ctx_.session_id, turn_.turn_id, "provider",
                        {{"attempt", attempt}, {"ok", false}, {"error", {{"code", code}, {"message", e.what()}}}});
      if (attempt < ctx_.policy.max_retries && ctx_.sleep) {
        ctx_.sleep(std::chrono::milliseconds(static_cast<std::int64_t>(ctx_.policy.retry_backoff_ms) << attempt));
      }
    }
  }
  return std::nullopt;
}

void TurnRunner::handle_tool_request(ToolRequest request) {
  ToolCall call;
  call.name = request.name;
  call.args = request.args.is_object() ? request.args : json::object();
  request_.conversation.push_back(
      {Role::kAssistant, {}, ToolRequest{call.name, call.args}, "call_" + std::to_string(++call_counter_)});

  const ToolSpec* spec = find_tool(call.name);
  if (spec != nullptr && call.name == "station.apply_config") {
    std::optional<CellConfig> config;
    try {
      validate_against_schema(spec->parameters, call.args);
      config = parse_cell_config(call.args.at("config"));
    } catch (const Error&) {
      execute_tool(call, tools_);  // reports the schema violation
      complete_call(std::move(call));
      return;
    }
    if (!validated_configs_.contains(canonical_bytes(*config))) {
      call.ok = false;
      call.result = tool_error(call.name, "guardrail-violation",
                               "apply_config refused: config.validate must report valid == true on this exact "
                               "configuration earlier in the turn");
      record_tool_call(tools_, call);
      complete_call(std::move(call));
      return;
    }
    const auto active = ctx_.station.snapshot().active_config;
    turn_.proposed_diff = ProposedDiff{active, *config, diff_configs(active, *config)};
    if (ctx_.policy.require_approval) {
      turn_.approval = Approval::kPending;
      emit("approval_required", {{"turn_id", turn_.turn_id}, {"proposed_diff", *turn_.proposed_diff}});
      pending_ = std::move(call);
      return;
    }
    execute_apply(call);
    complete_call(std::move(call));
    return;
  }

  execute_tool(call, tools_);
  if (call.ok && call.name == "config.validate" && call.result.value("valid", false)) {
    validated_configs_.insert(canonical_bytes(parse_cell_config(call.args.at("config"))));
  } else if (call.ok && call.name == "kb.search") {
    add_citations(call.result);
  } else if (call.ok && call.name == "station.start" && verification_pending_) {
    verify_after_start(call);
  }
  complete_call(std::move(call));
}

void TurnRunner::resolve(bool approved) {
  if (!pending_) throw Error("no-pending-approval", "turn " + turn_.turn_id + " is not waiting for approval");
  ToolCall call = std::move(*pending_);
  pending_.reset();
  turn_.approval = approved ? Approval::kApproved : Approval::kRejected;
  ctx_.audit.append(ctx_.session_id, turn_.turn_id, "approval",
                    {{"decision", to_string(turn_.approval)}, {"proposed_diff", *turn_.proposed_diff}});
  if (approved) {
    execute_apply(call);
  } else {
    call.ok = false;
    call.result = tool_error(call.name, "rejected-by-operator", "the operator rejected this configuration change");
    record_tool_call(tools_, call);
  }
  complete_call(std::move(call));
}

void TurnRunner::execute_apply(ToolCall& call) {
  if (!baseline_) {
    const auto samples = ctx_.station.recent_running_samples(static_cast<std::size_t>(ctx_.policy.verify_samples));
    if (!samples.empty()) baseline_ = summarize(samples);
  }
  execute_tool(call, tools_);
  if (call.ok) verification_pending_ = true;
}

void TurnRunner::verify_after_start(ToolCall& start_call) {
  verification_pending_ = false;
  const int settle = ctx_.policy.verify_settle_ticks;
  const int measured = ctx_.policy.verify_samples;
  ToolCall read = engine_call("station.read_kpi", {{"samples", settle + measured}, {"dt_s", ctx_.policy.verify_dt_s}},
                              "verification");
  json report;
  if (!read.ok) {
    report = {{"error", read.result}};
    start_call.result["verification"] = report;
    return;
  }
  std::vector<KpiSample> window;
  const auto& samples = read.result.at("samples");
  for (std::size_t i = static_cast<std::size_t>(settle); i < samples.size(); ++i) {
    window.push_back(samples[i].get<KpiSample>());
  }
  const KpiSummary observed = summarize(window);
  RegressionCheck check;
  if (baseline_) check = compare_to_baseline(*baseline_, observed, ctx_.policy.regression_threshold);
  report = {{"baseline", baseline_ ? json(*baseline_) : json(nullptr)},
            {"observed", observed},
            {"threshold", ctx_.policy.regression_threshold},
            {"attach_rate_drop", check.attach_rate_drop},
            {"throughput_drop", check.throughput_drop},
            {"regressed", check.regressed},
            {"rolled_back", false}};
  if (check.regressed) rollback(report);
  start_call.result["verification"] = report;
}

void TurnRunner::rollback(json& report) {
  if (on_air(ctx_.station.snapshot().lifecycle)) engine_call("station.stop", json::object(), "rollback");
  if (pre_turn_config_) {
    const json cfg = *pre_turn_config_;
    engine_call("config.validate", {{"config", cfg}}, "rollback");
    engine_call("station.apply_config", {{"config", cfg}}, "rollback");
    if (on_air(pre_turn_lifecycle_)) engine_call("station.start", json::object(), "rollback");
  } else {
    engine_call("station.reset", json::object(), "rollback");
  }
  rolled_back_ = true;
  report["rolled_back"] = true;
  report["restored_config"] = pre_turn_config_ ? json(*pre_turn_config_) : json(nullptr);
}

ToolCall TurnRunner::engine_call(const std::string& name, json args, const std::string& origin) {
  ToolCall call;
  call.name = name;
  call.args = std::move(args);
  call.origin = origin;
  if (name == "station.reset") {
    // Not offered to the model; only the rollback path clears a config.
    ctx_.station.reset();
    call.ok = true;
    call.result = {{"lifecycle", to_string(ctx_.station.snapshot().lifecycle)}};
    record_tool_call(tools_, call);
  } else {
    execute_tool(call, tools_);
  }
  turn_.engine_calls.push_back(call);
  return call;
}

void TurnRunner::complete_call(ToolCall call) {
  request_.conversation.push_back({Role::kTool, call.result.dump(), std::nullopt, "call_" + std::to_string(call_counter_)});
  turn_.iterations.push_back(std::move(call));
  emit("tool_call", {{"turn_id", turn_.turn_id},
                     {"index", turn_.iterations.size() - 1},
                     {"call", turn_.iterations.back()}});
}

void TurnRunner::add_citations(const json& kb_result) {
  for (const auto& r : kb_result.value("results", json::array())) {
    const auto id = r.at("chunk_id").get<std::string>();
    if (std::find(turn_.retrieved_citations.begin(), turn_.retrieved_citations.end(), id) ==
        turn_.retrieved_citations.end()) {
      turn_.retrieved_citations.push_back(id);
    }
  }
}

void TurnRunner::finish(Outcome outcome, std::string answer) {
  turn_.outcome = rolled_back_ ? Outcome::kRolledBack : outcome;
  turn_.final_answer = std::move(answer);
  emit("turn_finished", {{"turn_id", turn_.turn_id}, {"turn", turn_}});
}

AgentTurn run_turn(SessionContext& ctx, const std::string& turn_id, const std::string& user_message,
                   std::vector<ChatMessage> history, EventSink sink, std::function<bool(const AgentTurn&)> decide) {
  TurnRunner runner(ctx, turn_id, user_message, std::move(history), std::move(sink));
  while (runner.run() == TurnRunner::Status::kSuspended) {
    runner.resolve(decide ? decide(runner.turn()) : false);
  }
  return runner.turn();
}

std::filesystem::path default_system_prompt_path() {
  return default_data_dir() / "prompts" / "system_prompt.v1.txt";
}

std::string load_system_prompt(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read system prompt " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace cellops
