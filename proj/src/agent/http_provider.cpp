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

#include "cellops/http_provider.hpp"

#include <atomic>
#include <cstdlib>
#include <regex>

#include <httplib.h>

namespace cellops {

using nlohmann::json;

namespace {

std::atomic<std::size_t> g_instances{0};
std::atomic<std::size_t> g_requests{0};

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string context_block(const std::vector<RetrievedContext>& chunks) {
  std::string out = "Operations manual excerpts (cite by chunk id):\n";
  for (const auto& c : chunks) {
    out += "\n[" + c.chunk_id + "]";
    for (const auto& h : c.heading_path) out += " " + h + " >";
    if (!c.heading_path.empty()) out.pop_back();
    out += "\n" + c.text + "\n";
  }
  return out;
}

[[noreturn]] void malformed(const std::string& why) { throw ProviderError("malformed-response", why); }

}  // namespace

std::string HttpProvider::wire_tool_name(const std::string& name) { return replace_all(name, ".", "__"); }
std::string HttpProvider::registry_tool_name(const std::string& wire_name) { return replace_all(wire_name, "__", "."); }

std::size_t HttpProvider::instances_created() { return g_instances.load(); }
std::size_t HttpProvider::requests_sent() { return g_requests.load(); }

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
  const char* secret = std::getenv(config_.credential_env.c_str());
  if (secret == nullptr || *secret == '\0') {
    throw Error("missing-credential", "environment variable " + config_.credential_env + " is not set");
  }
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint_url, m, url)) {
    throw Error("bad-endpoint", "cannot parse endpoint URL '" + config_.endpoint_url + "'");
  }
  credential_ = secret;
  base_ = m[1];
  path_ = m[2].matched ? std::string(m[2]) : "/v1/chat/completions";
  ++g_instances;
}

json HttpProvider::to_wire(const ProviderRequest& request, const std::string& model) {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  if (!request.retrieved_context.empty()) {
    messages.push_back({{"role", "system"}, {"content", context_block(request.retrieved_context)}});
  }
  for (const auto& m : request.conversation) {
    if (m.role == Role::kAssistant && m.tool_call) {
      messages.push_back({{"role", "assistant"},
                          {"content", nullptr},
                          {"tool_calls", json::array({{{"id", m.tool_call_id},
                                                       {"type", "function"},
                                                       {"function", {{"name", wire_tool_name(m.tool_call->name)},
                                                                     {"arguments", m.tool_call->args.dump()}}}}})}});
    } else if (m.role == Role::kTool) {
      messages.push_back({{"role", "tool"}, {"tool_call_id", m.tool_call_id}, {"content", m.content}});
    } else {
      messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
  }
  json tools = json::array();
  for (const auto& t : request.tool_schemas) {
    tools.push_back({{"type", "function"},
                     {"function", {{"name", wire_tool_name(t.at("name").get<std::string>())},
                                   {"description", t.at("description")},
                                   {"parameters", t.at("parameters")}}}});
  }
  json body{{"model", model}, {"messages", std::move(messages)}};
  if (!tools.empty()) body["tools"] = std::move(tools);
  return body;
}

ProviderResponse HttpProvider::from_wire(const json& body) {
  if (!body.is_object() || !body.contains("choices") || !body["choices"].is_array() || body["choices"].empty()) {
    malformed("response has no choices");
  }
  const json& message = body["choices"][0].value("message", json());
  if (!message.is_object()) malformed("choice has no message");
  if (message.contains("tool_calls") && message["tool_calls"].is_array() && !message["tool_calls"].empty()) {
    const json& fn = message["tool_calls"][0].value("function", json());
    if (!fn.is_object() || !fn.contains("name") || !fn["name"].is_string()) malformed("tool call without a name");
    json args = json::object();
    if (fn.contains("arguments")) {
      const json& raw = fn["arguments"];
      if (raw.is_string()) {
        args = json::parse(raw.get<std::string>(), nullptr, false);
        if (args.is_discarded()) malformed("tool call arguments are not JSON");
      } else {
        args = raw;
      }
      if (!args.is_object()) malformed("tool call arguments are not an object");
    }
    return ToolRequest{registry_tool_name(fn["name"].get<std::string>()), std::move(args)};
  }
  if (message.contains("content") && message["content"].is_string() &&
      !message["content"].get<std::string>().empty()) {
    return FinalAnswer{message["content"].get<std::string>()};
  }
  malformed("message is neither a tool call nor text");
}

ProviderResponse HttpProvider::ask(const ProviderRequest& request) {
  httplib::Client client(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_bearer_token_auth(credential_);

  ++g_requests;
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(path_, to_wire(request, config_.model).dump(), "application/json");
  if (!res) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                           (res.error() == httplib::Error::Read && elapsed >= config_.timeout);
    throw ProviderError(timed_out ? "timeout" : "network", "request to " + base_ + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError("network", "model endpoint answered HTTP " + std::to_string(res->status));
  }
  const json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded()) malformed("response body is not JSON");
  return from_wire(body);
}

}  // namespace cellops
