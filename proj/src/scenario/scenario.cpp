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

#include "cellops/scenario.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "cellops/band_table.hpp"
#include "cellops/config_json.hpp"
#include "cellops/http_provider.hpp"
#include "cellops/scripted_provider.hpp"
#include "cellops/sim_json.hpp"

namespace cellops {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error("bad-scenario", message); }

const std::set<std::string>& predicate_names() {
  static const std::set<std::string> names{"lifecycle",     "fault",           "outcome",
                                           "approval",      "tool_calls",      "answer_contains",
                                           "citations_include", "config_matches_pre_turn", "active_config",
                                           "kpi"};
  return names;
}

const std::set<std::string>& comparison_ops() {
  static const std::set<std::string> ops{"<", "<=", "==", "!=", ">=", ">"};
  return ops;
}

const std::set<std::string>& kpi_metrics() {
  static const std::set<std::string> m{"attach_success_rate", "mean_throughput_mbps", "mean_connected_ues",
                                       "mean_rsrp_dbm",       "attach_attempts",      "attach_successes"};
  return m;
}

void check_comparison(const json& c, const std::string& where) {
  if (!c.is_object() || !c.contains("op") || !c.contains("value") || !c["op"].is_string() ||
      !comparison_ops().contains(c["op"].get<std::string>()) || !c["value"].is_number()) {
    bad(where + " needs {\"op\": one of < <= == != >= >, \"value\": number}");
  }
}

void check_expect(const json& e, const std::string& where) {
  if (!e.is_object() || e.size() != 1) bad(where + ": expect must hold exactly one predicate");
  const auto& [name, v] = *e.items().begin();
  if (!predicate_names().contains(name)) bad(where + ": unknown predicate '" + name + "'");
  if (name == "lifecycle" && !(v.is_string() && parse_lifecycle(v.get<std::string>()))) bad(where + ": bad lifecycle");
  if (name == "fault" && !(v.is_null() || (v.is_string() && parse_fault_kind(v.get<std::string>())))) {
    bad(where + ": fault must be a fault kind or null");
  }
  if ((name == "outcome" || name == "approval" || name == "answer_contains") && !v.is_string()) {
    bad(where + ": " + name + " must be a string");
  }
  if (name == "tool_calls") check_comparison(v, where + ": tool_calls");
  if (name == "citations_include" && !v.is_string() && !(v.is_object() && v.contains("heading_contains"))) {
    bad(where + ": citations_include must be a chunk id or {\"heading_contains\": text}");
  }
  if (name == "config_matches_pre_turn" && !v.is_boolean()) bad(where + ": config_matches_pre_turn must be boolean");
  if (name == "active_config" && !v.is_object()) bad(where + ": active_config must be an object");
  if (name == "kpi") {
    check_comparison(v, where + ": kpi");
    if (!v.contains("metric") || !v["metric"].is_string() || !kpi_metrics().contains(v["metric"].get<std::string>())) {
      bad(where + ": kpi.metric must be a KPI summary field");
    }
    if (!v.contains("window") || !v["window"].is_number_integer() || v["window"].get<int>() < 1) {
      bad(where + ": kpi.window must be a positive integer");
    }
  }
}

void check_step(const json& s, std::size_t index) {
  const std::string where = "step " + std::to_string(index);
  if (!s.is_object()) bad(where + " must be an object");
  if (s.contains("say")) {
    if (s.size() != 1 || !s["say"].is_string()) bad(where + ": say takes a single string");
  } else if (s.contains("approve") || s.contains("reject")) {
    if (s.size() != 1) bad(where + ": approve/reject stand alone");
  } else if (s.contains("inject_fault")) {
    if (s.size() != 1 || !s["inject_fault"].is_string() || !parse_fault_kind(s["inject_fault"].get<std::string>())) {
      bad(where + ": inject_fault takes PA_OVERHEAT, SYNC_LOSS or BACKHAUL_DOWN");
    }
  } else if (s.contains("tick")) {
    for (const auto& [k, _] : s.items()) {
      if (k != "tick" && k != "dt_s") bad(where + ": unknown key '" + k + "'");
    }
    if (!s["tick"].is_number_integer() || s["tick"].get<int>() < 1) bad(where + ": tick must be a positive integer");
    if (s.contains("dt_s") && !(s["dt_s"].is_number() && s["dt_s"].get<double>() > 0)) {
      bad(where + ": dt_s must be positive");
    }
  } else if (s.contains("expect")) {
    if (s.size() != 1) bad(where + ": expect stands alone");
    check_expect(s["expect"], where);
  } else {
    bad(where + ": unknown step");
  }
}

bool compare(double lhs, const std::string& op, double rhs) {
  if (op == "<") return lhs < rhs;
  if (op == "<=") return lhs <= rhs;
  if (op == "==") return lhs == rhs;
  if (op == "!=") return lhs != rhs;
  if (op == ">=") return lhs >= rhs;
  return lhs > rhs;
}

std::string num(double v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

std::shared_ptr<const rag::Index> shipped_index() {
  static const auto index = std::make_shared<const rag::Index>(
      rag::Index::build(rag::ingest_directory(default_data_dir() / "data" / "kb").chunks));
  return index;
}

std::shared_ptr<const BandTable> shipped_bands() {
  static const auto bands = std::make_shared<const BandTable>(BandTable::load_default());
  return bands;
}

class Runner {
 public:
  Runner(const Scenario& sc, const ScenarioOptions& opt)
      : sc_(sc),
        opt_(opt),
        station_(opt.seed.value_or(sc.station_seed), shipped_bands()),
        kb_(shipped_index()),
        audit_(logical_clock()) {
    Policy policy = apply_overrides(Policy{}, sc.policy);
    if (opt.auto_approve) policy.require_approval = false;
    Sleeper sleep = [](std::chrono::milliseconds) {};
    if (sc.provider_kind == "scripted") {
      provider_.reset(new ScriptedProvider(ScriptedProvider::from_json(sc.script)));
    } else {
      const auto& p = opt.live;
      provider_ = std::make_unique<HttpProvider>(HttpProviderConfig{
          p.endpoint, p.model, p.credential_env, std::chrono::milliseconds(static_cast<std::int64_t>(p.timeout_s * 1000))});
      sleep = real_sleep;
    }
    ctx_ = std::unique_ptr<SessionContext>(new SessionContext{"scenario", station_, kb_, audit_, *provider_, policy,
                                                              load_system_prompt(default_system_prompt_path()), sleep});
  }

  ScenarioResult run() {
    ScenarioResult result;
    result.name = sc_.name;
    for (std::size_t i = 0; i < sc_.steps.size(); ++i) step(sc_.steps[i], i + 1, result);
    if (runner_ && runner_->suspended()) {
      result.checks.push_back({sc_.steps.size(), "scenario end", false, "a turn is still awaiting approval"});
    }
    result.audit = audit_.all();
    result.final_station = station_.snapshot();
    return result;
  }

 private:
  void step(const json& s, std::size_t index, ScenarioResult& result) {
    auto fail = [&](const std::string& what, const std::string& why) {
      result.checks.push_back({index, what, false, why});
    };
    if (s.contains("say")) {
      if (runner_ && runner_->suspended()) {
        fail("say", "previous turn is still awaiting approval");
        return;
      }
      pre_turn_ = station_.snapshot().active_config;
      text_ = s["say"].get<std::string>();
      runner_ = std::make_unique<TurnRunner>(*ctx_, "t" + std::to_string(result.turns.size() + 1), text_, history_);
      advance(result);
    } else if (s.contains("approve") || s.contains("reject")) {
      if (opt_.auto_approve) return;
      const bool approve = s.contains("approve");
      if (!runner_ || !runner_->suspended()) {
        fail(approve ? "approve" : "reject", "no turn is awaiting approval");
        return;
      }
      runner_->resolve(approve);
      advance(result);
    } else if (s.contains("inject_fault")) {
      try {
        station_.inject_fault(*parse_fault_kind(s["inject_fault"].get<std::string>()));
      } catch (const Error& e) {
        fail("inject_fault", e.code() + ": " + e.what());
      }
    } else if (s.contains("tick")) {
      station_.tick(s["tick"].get<int>(), s.value("dt_s", 1.0));
    } else if (s.contains("expect")) {
      result.checks.push_back(evaluate(s["expect"], index));
    }
  }

  void advance(ScenarioResult& result) {
    if (runner_->run() != TurnRunner::Status::kFinished) return;
    result.turns.push_back(runner_->turn());
    history_.push_back({Role::kUser, text_, std::nullopt, {}});
    history_.push_back({Role::kAssistant, runner_->turn().final_answer, std::nullopt, {}});
  }

  StepResult evaluate(const json& e, std::size_t index) {
    const auto& [name, v] = *e.items().begin();
    StepResult r{index, name, false, ""};
    const AgentTurn* turn = runner_ ? &runner_->turn() : nullptr;
    auto need_turn = [&]() {
      if (turn == nullptr) r.detail = "no turn has run";
      return turn != nullptr;
    };
    const auto snap = station_.snapshot();

    if (name == "lifecycle") {
      r.description = "lifecycle == " + v.get<std::string>();
      r.detail = to_string(snap.lifecycle);
      r.passed = r.detail == v.get<std::string>();
    } else if (name == "fault") {
      const std::string want = v.is_null() ? "none" : v.get<std::string>();
      r.description = "fault == " + want;
      r.detail = snap.active_fault ? to_string(*snap.active_fault) : "none";
      r.passed = r.detail == want;
    } else if (name == "outcome") {
      r.description = "outcome == " + v.get<std::string>();
      if (need_turn()) {
        r.detail = turn->outcome ? to_string(*turn->outcome) : "unfinished";
        r.passed = r.detail == v.get<std::string>();
      }
    } else if (name == "approval") {
      r.description = "approval == " + v.get<std::string>();
      if (need_turn()) {
        r.detail = to_string(turn->approval);
        r.passed = r.detail == v.get<std::string>();
      }
    } else if (name == "tool_calls") {
      r.description = "tool_calls " + v["op"].get<std::string>() + " " + v["value"].dump();
      if (need_turn()) {
        r.detail = std::to_string(turn->iterations.size());
        r.passed = compare(static_cast<double>(turn->iterations.size()), v["op"], v["value"].get<double>());
      }
    } else if (name == "answer_contains") {
      r.description = "answer contains \"" + v.get<std::string>() + "\"";
      if (need_turn()) {
        r.passed = turn->final_answer.find(v.get<std::string>()) != std::string::npos;
        r.detail = turn->final_answer;
      }
    } else if (name == "citations_include") {
      if (need_turn()) {
        const auto index_ptr = kb_.current();
        std::string ids;
        for (const auto& id : turn->retrieved_citations) {
          ids += (ids.empty() ? "" : " ") + id;
          if (v.is_string()) {
            r.passed = r.passed || id == v.get<std::string>();
          } else if (const auto* c = index_ptr->find(id)) {
            std::string path;
            for (const auto& h : c->heading_path) path += h + " / ";
            r.passed = r.passed || path.find(v["heading_contains"].get<std::string>()) != std::string::npos;
          }
        }
        r.detail = ids;
      }
      r.description = v.is_string() ? "citations include " + v.get<std::string>()
                                    : "citations include a chunk under \"" + v["heading_contains"].get<std::string>() + "\"";
    } else if (name == "config_matches_pre_turn") {
      r.description = std::string("config ") + (v.get<bool>() ? "==" : "!=") + " pre-turn config";
      if (need_turn()) {
        const std::string now = snap.active_config ? canonical_bytes(*snap.active_config) : "null";
        const std::string pre = pre_turn_ ? canonical_bytes(*pre_turn_) : "null";
        r.passed = (now == pre) == v.get<bool>();
        r.detail = now == pre ? "byte-identical" : "differs";
      }
    } else if (name == "active_config") {
      r.description = "active_config matches " + v.dump();
      if (!snap.active_config) {
        r.detail = "no active config";
      } else {
        const json cfg = *snap.active_config;
        r.passed = true;
        for (const auto& [k, want] : v.items()) {
          if (!cfg.contains(k) || cfg[k] != want) r.passed = false;
        }
        r.detail = cfg.dump();
      }
    } else if (name == "kpi") {
      const std::string metric = v["metric"];
      const int window = v["window"];
      r.description = metric + " over last " + std::to_string(window) + " samples " + v["op"].get<std::string>() + " " +
                      v["value"].dump();
      const auto samples = station_.recent_samples(static_cast<std::size_t>(window));
      if (samples.empty()) {
        r.detail = "no samples";
      } else {
        const json summary = summarize(samples);
        if (summary[metric].is_null()) {
          r.detail = "undefined (no connected UEs)";
        } else {
          const double got = summary[metric].get<double>();
          r.detail = num(got);
          r.passed = compare(got, v["op"], v["value"].get<double>());
        }
      }
    }
    return r;
  }

  const Scenario& sc_;
  const ScenarioOptions& opt_;
  StationHost station_;
  rag::KnowledgeBase kb_;
  AuditLog audit_;
  std::unique_ptr<Provider> provider_;
  std::unique_ptr<SessionContext> ctx_;
  std::unique_ptr<TurnRunner> runner_;
  std::vector<ChatMessage> history_;
  std::optional<CellConfig> pre_turn_;
  std::string text_;
};

}  // namespace

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) bad("scenario must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    if (k != "name" && k != "station_seed" && k != "policy" && k != "provider" && k != "steps") {
      bad("unknown key '" + k + "'");
    }
  }
  Scenario sc;
  if (!j.contains("name") || !j["name"].is_string()) bad("name is required");
  sc.name = j["name"];
  if (j.contains("station_seed")) {
    if (!j["station_seed"].is_number_unsigned()) bad("station_seed must be a non-negative integer");
    sc.station_seed = j["station_seed"];
  }
  if (j.contains("policy")) {
    sc.policy = j["policy"];
    try {
      (void)apply_overrides(Policy{}, sc.policy);
    } catch (const Error& e) {
      bad(std::string("policy: ") + e.what());
    }
  }
  if (!j.contains("provider") || !j["provider"].is_object()) bad("provider is required");
  const json& p = j["provider"];
  sc.provider_kind = p.value("kind", "");
  if (sc.provider_kind == "scripted") {
    sc.script = p.value("script", json());
    try {
      (void)ScriptedProvider::from_json(sc.script);
    } catch (const Error& e) {
      bad(std::string("provider.script: ") + e.what());
    }
  } else if (sc.provider_kind != "live") {
    bad("provider.kind must be scripted or live");
  }
  if (!j.contains("steps") || !j["steps"].is_array()) bad("steps must be an array");
  sc.steps = j["steps"];
  std::size_t expects = 0;
  for (std::size_t i = 0; i < sc.steps.size(); ++i) {
    check_step(sc.steps[i], i + 1);
    if (sc.steps[i].contains("expect")) ++expects;
  }
  if (expects == 0) bad("a scenario needs at least one expect step");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read scenario " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) bad(path.string() + " is not valid JSON");
  return parse_scenario(j);
}

bool ScenarioResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const StepResult& r) { return r.passed; });
}

void to_json(json& j, const StepResult& r) {
  j = json{{"step", r.step}, {"description", r.description}, {"passed", r.passed}, {"detail", r.detail}};
}

json summary_json(const ScenarioResult& r) {
  return {{"name", r.name}, {"passed", r.passed()}, {"checks", r.checks}};
}

std::string format_table(const ScenarioResult& r) {
  std::size_t width = 0;
  for (const auto& c : r.checks) width = std::max(width, c.description.size());
  std::ostringstream out;
  out << "scenario " << r.name << "\n";
  std::size_t passed = 0;
  for (const auto& c : r.checks) {
    passed += c.passed ? 1 : 0;
    out << "  " << (c.passed ? "PASS" : "FAIL") << "  step " << std::setw(2) << c.step << "  " << std::left
        << std::setw(static_cast<int>(width)) << c.description << std::right << "  [" << c.detail << "]\n";
  }
  out << passed << "/" << r.checks.size() << " checks passed\n";
  return out.str();
}

ScenarioResult run_scenario(const Scenario& scenario, const ScenarioOptions& options) {
  return Runner(scenario, options).run();
}

}  // namespace cellops
