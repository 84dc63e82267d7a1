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

#include <fstream>
#include <set>

#include "cellops/band_table.hpp"
#include "cellops/service.hpp"

namespace cellops {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error("bad-service-config", message); }

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) bad("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(where + "." + key + " has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

ServiceConfig default_service_config() {
  ServiceConfig c;
  c.knowledge_dir = default_data_dir() / "data" / "kb";
  c.system_prompt = default_system_prompt_path();
  return c;
}

ServiceConfig parse_service_config(const json& j, const fs::path& base_dir) {
  only_keys(j,
            {"station_seed", "knowledge_dir", "index_path", "system_prompt", "audit_log", "config_snapshot",
             "provider", "policy", "listen", "tick_interval_s", "logical_clock"},
            "service config");
  ServiceConfig c = default_service_config();
  if (j.contains("station_seed")) c.station_seed = get<std::uint64_t>(j, "station_seed", "config");
  if (j.contains("knowledge_dir")) c.knowledge_dir = resolve(base_dir, get<std::string>(j, "knowledge_dir", "config"));
  if (j.contains("index_path") && !j["index_path"].is_null()) {
    c.index_path = resolve(base_dir, get<std::string>(j, "index_path", "config"));
  }
  if (j.contains("system_prompt")) c.system_prompt = resolve(base_dir, get<std::string>(j, "system_prompt", "config"));
  if (j.contains("audit_log") && !j["audit_log"].is_null()) {
    c.audit_log = resolve(base_dir, get<std::string>(j, "audit_log", "config"));
  }
  if (j.contains("config_snapshot") && !j["config_snapshot"].is_null()) {
    c.config_snapshot = resolve(base_dir, get<std::string>(j, "config_snapshot", "config"));
  }
  if (j.contains("provider")) {
    const json& p = j["provider"];
    only_keys(p, {"kind", "endpoint", "model", "credential_env", "timeout_s", "script"}, "provider");
    if (p.contains("kind")) c.provider.kind = get<std::string>(p, "kind", "provider");
    if (c.provider.kind != "http" && c.provider.kind != "scripted") bad("provider.kind must be http or scripted");
    if (p.contains("endpoint")) c.provider.endpoint = get<std::string>(p, "endpoint", "provider");
    if (p.contains("model")) c.provider.model = get<std::string>(p, "model", "provider");
    if (p.contains("credential_env")) c.provider.credential_env = get<std::string>(p, "credential_env", "provider");
    if (p.contains("timeout_s")) c.provider.timeout_s = get<double>(p, "timeout_s", "provider");
    if (c.provider.timeout_s <= 0) bad("provider.timeout_s must be positive");
    if (p.contains("script")) c.provider.script = p["script"];
  }
  if (j.contains("policy")) {
    try {
      c.policy = apply_overrides(Policy{}, j["policy"]);
    } catch (const Error& e) {
      bad("policy: " + std::string(e.what()));
    }
  }
  if (j.contains("listen")) {
    const json& l = j["listen"];
    only_keys(l, {"host", "port"}, "listen");
    if (l.contains("host")) c.listen_host = get<std::string>(l, "host", "listen");
    if (l.contains("port")) c.listen_port = get<int>(l, "port", "listen");
    if (c.listen_port < 0 || c.listen_port > 65535) bad("listen.port out of range");
  }
  if (j.contains("tick_interval_s")) c.tick_interval_s = get<double>(j, "tick_interval_s", "config");
  if (c.tick_interval_s < 0) bad("tick_interval_s must be >= 0");
  if (j.contains("logical_clock")) c.logical_clock = get<bool>(j, "logical_clock", "config");
  return c;
}

ServiceConfig load_service_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read service config " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) bad(path.string() + " is not valid JSON");
  return parse_service_config(j, fs::absolute(path).parent_path());
}

}  // namespace cellops
