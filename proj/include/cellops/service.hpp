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

#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellops/agent.hpp"

namespace cellops {

struct ProviderSettings {
  std::string kind = "http";  // http | scripted
  std::string endpoint;
  std::string model;
  std::string credential_env = "CELLOPS_LLM_API_KEY";
  double timeout_s = 60.0;
  nlohmann::json script = nlohmann::json::array();  // scripted only; every session replays it from the top
};

struct ServiceConfig {
  std::uint64_t station_seed = 42;
  std::filesystem::path knowledge_dir;             // ingested at startup unless index_path is set
  std::optional<std::filesystem::path> index_path;  // written by `cellops ingest --out`
  std::filesystem::path system_prompt;
  std::optional<std::filesystem::path> audit_log;        // JSONL, appended
  std::optional<std::filesystem::path> config_snapshot;  // rewritten after each turn that changed the config
  ProviderSettings provider;
  Policy policy;  // session defaults
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
  double tick_interval_s = 1.0;  // serve only: wall-clock ticking of the station, 0 disables
  bool logical_clock = false;    // audit timestamps from a logical clock (replay)
};

/// Built-in defaults rooted at the data directory, scripted-free.
ServiceConfig default_service_config();
/// JSON file; relative paths resolve against the file's directory. Unknown
/// keys throw Error("bad-service-config").
ServiceConfig load_service_config(const std::filesystem::path& path);
ServiceConfig parse_service_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// The control surface shared by the HTTP server, the CLI and the scenario
/// runner: one station, one knowledge base, one audit log, many sessions.
///
/// A turn runs on the caller's thread. While it waits for an operator
/// decision it blocks only that thread; resolve_approval() from any other
/// thread releases it.
class Service {
 public:
  using ProviderFactory = std::function<std::unique_ptr<Provider>(const std::string& session_id)>;

  /// Without a factory the provider comes from config.provider; an http
  /// provider is constructed once up front so a missing credential fails
  /// here, before any turn runs.
  explicit Service(ServiceConfig config, ProviderFactory factory = nullptr);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Throws Error("invalid-policy-override").
  std::string create_session(const nlohmann::json& policy_overrides = nlohmann::json::object());
  /// {session_id, created_at, policy, transcript}. Throws Error("unknown-session").
  nlohmann::json session_record(const std::string& session_id) const;

  /// Claims the session for one turn. Throws unknown-session / busy-session.
  std::string reserve_turn(const std::string& session_id, const std::string& text);
  /// Runs the reserved turn to completion, including any approval waits.
  AgentTurn run_reserved(const std::string& session_id, const EventSink& sink = nullptr);
  /// Releases a reservation that will never run (e.g. the client went away).
  void cancel_reservation(const std::string& session_id);
  AgentTurn post_message(const std::string& session_id, const std::string& text, const EventSink& sink = nullptr);

  /// Throws unknown-session / no-pending-approval.
  void resolve_approval(const std::string& session_id, const std::string& turn_id, bool approved);
  /// {state: running|awaiting_approval|finished, turn}. Throws unknown-turn.
  nlohmann::json turn_state(const std::string& session_id, const std::string& turn_id) const;

  StationSnapshot get_station() const;
  std::vector<KpiSample> get_kpis(double window_s) const;
  nlohmann::json search_kb(const std::string& query, int k) const;
  std::vector<AuditRecord> get_audit(std::int64_t after_ts) const;

  std::vector<KpiSample> tick(int count, double dt_s);
  void inject_fault(FaultKind kind);

  /// Rejects every pending approval so blocked turns can finish.
  void shutdown();

  const ServiceConfig& config() const { return config_; }
  StationHost& station() { return station_; }
  AuditLog& audit() { return audit_; }
  rag::KnowledgeBase& kb() { return kb_; }

 private:
  struct Session;
  Session& find(const std::string& session_id) const;
  void write_snapshot();

  ServiceConfig config_;
  ProviderFactory factory_;
  StationHost station_;
  rag::KnowledgeBase kb_;
  AuditLog audit_;
  std::string system_prompt_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool shutting_down_ = false;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  int session_counter_ = 0;
  std::optional<CellConfig> last_snapshot_;
};

/// HTTP status for a service error code.
int http_status_for(const std::string& code);

}  // namespace cellops
