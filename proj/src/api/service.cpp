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

#include "cellops/service.hpp"

#include <fstream>

#include "cellops/config_json.hpp"
#include "cellops/http_provider.hpp"
#include "cellops/scripted_provider.hpp"
#include "cellops/sim_json.hpp"

namespace cellops {

using nlohmann::json;

struct Service::Session {
  std::string id;
  std::int64_t created_at = 0;
  std::unique_ptr<Provider> provider;
  std::unique_ptr<SessionContext> ctx;
  std::vector<ChatMessage> history;
  std::vector<AgentTurn> transcript;

  // the turn in flight, if any
  bool busy = false;
  std::string turn_id;
  std::string text;
  AgentTurn live;
  bool awaiting = false;
  std::optional<bool> decision;
};

namespace {

rag::Index initial_index(const ServiceConfig& c) {
  if (c.index_path) return rag::load_index(*c.index_path);
  return rag::Index::build(rag::ingest_directory(c.knowledge_dir).chunks);
}

Service::ProviderFactory default_factory(const ProviderSettings& p) {
  if (p.kind == "scripted") {
    // parse once so a broken script fails at startup
    (void)ScriptedProvider::from_json(p.script);
    return [script = p.script](const std::string&) {
      return std::unique_ptr<Provider>(new ScriptedProvider(ScriptedProvider::from_json(script)));
    };
  }
  HttpProviderConfig hc{p.endpoint, p.model, p.credential_env,
                        std::chrono::milliseconds(static_cast<std::int64_t>(p.timeout_s * 1000))};
  (void)HttpProvider(hc);
  return [hc](const std::string&) { return std::unique_ptr<Provider>(std::make_unique<HttpProvider>(hc)); };
}

}  // namespace

int http_status_for(const std::string& code) {
  if (code == "unknown-session" || code == "unknown-turn" || code == "not-found") return 404;
  if (code == "busy-session" || code == "no-pending-approval" || code == "wrong-state") return 409;
  if (code == "invalid-policy-override" || code == "window-out-of-range" || code == "malformed-cursor" ||
      code == "bad-request" || code == "schema-violation" || code == "unknown-fault" || code == "non-positive-dt") {
    return 400;
  }
  return 500;
}

Service::Service(ServiceConfig config, ProviderFactory factory)
    : config_(std::move(config)),
      factory_(factory ? std::move(factory) : default_factory(config_.provider)),
      station_(config_.station_seed, std::make_shared<const BandTable>(BandTable::load_default())),
      kb_(std::make_shared<const rag::Index>(initial_index(config_))),
      audit_(config_.logical_clock ? logical_clock() : Clock(wall_clock_us), config_.audit_log),
      system_prompt_(load_system_prompt(config_.system_prompt)) {}

Service::~Service() { shutdown(); }

Service::Session& Service::find(const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error("unknown-session", "no session '" + session_id + "'");
  return *it->second;
}

std::string Service::create_session(const json& policy_overrides) {
  const Policy policy = apply_overrides(config_.policy, policy_overrides.is_null() ? json::object() : policy_overrides);
  std::lock_guard lock(mu_);
  auto s = std::make_unique<Session>();
  s->id = "s" + std::to_string(++session_counter_);
  s->created_at = audit_.now();
  s->provider = factory_(s->id);
  s->ctx = std::unique_ptr<SessionContext>(
      new SessionContext{s->id, station_, kb_, audit_, *s->provider, policy, system_prompt_, real_sleep});
  const std::string id = s->id;
  sessions_.emplace(id, std::move(s));
  return id;
}

json Service::session_record(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  const Session& s = find(session_id);
  return {{"session_id", s.id}, {"created_at", s.created_at}, {"policy", s.ctx->policy}, {"transcript", s.transcript}};
}

std::string Service::reserve_turn(const std::string& session_id, const std::string& text) {
  std::lock_guard lock(mu_);
  Session& s = find(session_id);
  if (s.busy) throw Error("busy-session", "session " + session_id + " already has turn " + s.turn_id + " in flight");
  s.busy = true;
  s.turn_id = "t" + std::to_string(s.transcript.size() + 1);
  s.text = text;
  s.live = AgentTurn{};
  s.live.turn_id = s.turn_id;
  s.live.user_message = text;
  s.awaiting = false;
  s.decision.reset();
  return s.turn_id;
}

void Service::cancel_reservation(const std::string& session_id) {
  std::lock_guard lock(mu_);
  Session& s = find(session_id);
  s.busy = false;
}

AgentTurn Service::run_reserved(const std::string& session_id, const EventSink& sink) {
  Session* s = nullptr;
  std::string turn_id, text;
  std::vector<ChatMessage> history;
  {
    std::lock_guard lock(mu_);
    s = &find(session_id);
    if (!s->busy) throw Error("no-reservation", "session " + session_id + " has no reserved turn");
    turn_id = s->turn_id;
    text = s->text;
    history = s->history;
  }

  TurnRunner* runner_ptr = nullptr;
  auto observe = [&](const TurnEvent& e) {
    {
      std::lock_guard lock(mu_);
      s->live = runner_ptr->turn();
      if (e.type == "approval_required") s->awaiting = true;
    }
    if (sink) sink(e);
  };

  try {
    TurnRunner runner(*s->ctx, turn_id, text, std::move(history), observe);
    runner_ptr = &runner;
    while (runner.run() == TurnRunner::Status::kSuspended) {
      bool approved = false;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return s->decision.has_value() || shutting_down_; });
        approved = s->decision.value_or(false);
        s->decision.reset();
        s->awaiting = false;
      }
      runner.resolve(approved);
    }
    AgentTurn turn = runner.turn();
    {
      std::lock_guard lock(mu_);
      s->transcript.push_back(turn);
      s->history.push_back({Role::kUser, text, std::nullopt, {}});
      s->history.push_back({Role::kAssistant, turn.final_answer, std::nullopt, {}});
      s->busy = false;
    }
    write_snapshot();
    return turn;
  } catch (...) {
    std::lock_guard lock(mu_);
    s->busy = false;
    throw;
  }
}

AgentTurn Service::post_message(const std::string& session_id, const std::string& text, const EventSink& sink) {
  reserve_turn(session_id, text);
  return run_reserved(session_id, sink);
}

void Service::resolve_approval(const std::string& session_id, const std::string& turn_id, bool approved) {
  std::lock_guard lock(mu_);
  Session& s = find(session_id);
  if (!s.busy || s.turn_id != turn_id || !s.awaiting || s.decision) {
    throw Error("no-pending-approval", "turn " + turn_id + " of session " + session_id + " is not awaiting approval");
  }
  s.decision = approved;
  cv_.notify_all();
}

json Service::turn_state(const std::string& session_id, const std::string& turn_id) const {
  std::lock_guard lock(mu_);
  const Session& s = find(session_id);
  for (const auto& t : s.transcript) {
    if (t.turn_id == turn_id) return {{"state", "finished"}, {"turn", t}};
  }
  if (s.busy && s.turn_id == turn_id) {
    return {{"state", s.awaiting ? "awaiting_approval" : "running"}, {"turn", s.live}};
  }
  throw Error("unknown-turn", "no turn '" + turn_id + "' in session " + session_id);
}

StationSnapshot Service::get_station() const { return station_.snapshot(); }

std::vector<KpiSample> Service::get_kpis(double window_s) const { return station_.kpis_in_window(window_s); }

json Service::search_kb(const std::string& query, int k) const {
  if (k < 1 || k > 50) throw Error("bad-request", "k must be in 1..50");
  const auto index = kb_.current();
  json results = json::array();
  for (const auto& hit : index->retrieve(query, static_cast<std::size_t>(k))) {
    const auto* c = index->find(hit.chunk_id);
    results.push_back({{"chunk_id", hit.chunk_id},
                       {"doc_id", c->doc_id},
                       {"heading_path", c->heading_path},
                       {"score", hit.score},
                       {"text", c->text}});
  }
  return {{"query", query}, {"k", k}, {"results", results}};
}

std::vector<AuditRecord> Service::get_audit(std::int64_t after_ts) const { return audit_.after(after_ts); }

std::vector<KpiSample> Service::tick(int count, double dt_s) {
  if (count < 1 || count > 3600) throw Error("bad-request", "count must be in 1..3600");
  return station_.tick(count, dt_s);
}

void Service::inject_fault(FaultKind kind) { station_.inject_fault(kind); }

void Service::shutdown() {
  std::lock_guard lock(mu_);
  shutting_down_ = true;
  cv_.notify_all();
}

void Service::write_snapshot() {
  if (!config_.config_snapshot) return;
  const auto snap = station_.snapshot();
  std::lock_guard lock(mu_);
  if (snap.active_config == last_snapshot_) return;
  last_snapshot_ = snap.active_config;
  const auto tmp = config_.config_snapshot->string() + ".tmp";
  std::error_code ec;
  if (config_.config_snapshot->has_parent_path()) {
    std::filesystem::create_directories(config_.config_snapshot->parent_path(), ec);
  }
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << json(snap).dump(2) << "\n";
  }
  std::filesystem::rename(tmp, *config_.config_snapshot);
}

}  // namespace cellops
