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

#include "cellops/provider.hpp"

#include "cellops/scripted_provider.hpp"

namespace cellops {

const char* to_string(Role role) {
  switch (role) {
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
    case Role::kTool: return "tool";
  }
  return "?";
}

void to_json(nlohmann::json& j, const ToolRequest& t) { j = nlohmann::json{{"name", t.name}, {"args", t.args}}; }

void to_json(nlohmann::json& j, const ChatMessage& m) {
  j = nlohmann::json{{"role", to_string(m.role)}, {"content", m.content}};
  if (m.tool_call) j["tool_call"] = *m.tool_call;
  if (!m.tool_call_id.empty()) j["tool_call_id"] = m.tool_call_id;
}

void to_json(nlohmann::json& j, const RetrievedContext& c) {
  j = nlohmann::json{{"chunk_id", c.chunk_id}, {"heading_path", c.heading_path}, {"text", c.text}, {"score", c.score}};
}

void to_json(nlohmann::json& j, const ProviderRequest& r) {
  j = nlohmann::json{{"system_prompt", r.system_prompt},
                     {"conversation", r.conversation},
                     {"tool_schemas", r.tool_schemas},
                     {"retrieved_context", r.retrieved_context}};
}

nlohmann::json response_to_json(const ProviderResponse& r) {
  if (const auto* t = std::get_if<ToolRequest>(&r)) return {{"tool_call", *t}};
  return {{"final", std::get<FinalAnswer>(r).text}};
}

ProviderResponse response_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.size() == 1) {
    if (auto it = j.find("final"); it != j.end() && it->is_string()) return FinalAnswer{it->get<std::string>()};
    if (auto it = j.find("tool_call"); it != j.end() && it->is_object() && it->contains("name") &&
                                       (*it)["name"].is_string()) {
      ToolRequest t{(*it)["name"].get<std::string>(), it->value("args", nlohmann::json::object())};
      if (!t.args.is_object()) throw Error("bad-script", "tool_call args must be an object");
      return t;
    }
  }
  throw Error("bad-script", "script entry must be {\"tool_call\": {name, args}} or {\"final\": text}: " + j.dump());
}

ScriptedProvider::ScriptedProvider(std::vector<Entry> script) : script_(std::move(script)) {
  if (script_.empty()) throw Error("bad-script", "script must not be empty");
}

ScriptedProvider ScriptedProvider::from_json(const nlohmann::json& script) {
  if (!script.is_array()) throw Error("bad-script", "script must be an array");
  std::vector<Entry> entries;
  for (const auto& e : script) {
    if (e.is_object() && e.size() == 1 && e.contains("fail") && e["fail"].is_string()) {
      entries.emplace_back(Failure{e["fail"].get<std::string>()});
      continue;
    }
    auto r = response_from_json(e);
    if (auto* t = std::get_if<ToolRequest>(&r)) {
      entries.emplace_back(std::move(*t));
    } else {
      entries.emplace_back(std::get<FinalAnswer>(std::move(r)));
    }
  }
  return ScriptedProvider(std::move(entries));
}

ProviderResponse ScriptedProvider::ask(const ProviderRequest& request) {
  std::lock_guard lock(mu_);
  seen_.push_back(request);
  if (next_ >= script_.size()) {
    throw ProviderError("script-exhausted", "scripted provider has no response left");
  }
  const Entry& e = script_[next_++];
  if (const auto* f = std::get_if<Failure>(&e)) throw ProviderError("scripted-failure", f->message);
  if (const auto* t = std::get_if<ToolRequest>(&e)) return *t;
  return std::get<FinalAnswer>(e);
}

std::vector<ProviderRequest> ScriptedProvider::requests() const {
  std::lock_guard lock(mu_);
  return seen_;
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mu_);
  return script_.size() - next_;
}

}  // namespace cellops
