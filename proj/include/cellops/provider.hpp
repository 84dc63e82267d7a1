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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cellops/error.hpp"

namespace cellops {

struct ToolRequest {
  std::string name;
  nlohmann::json args = nlohmann::json::object();
  bool operator==(const ToolRequest&) const = default;
};

struct FinalAnswer {
  std::string text;
  bool operator==(const FinalAnswer&) const = default;
};

enum class Role { kUser, kAssistant, kTool };

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
  std::optional<ToolRequest> tool_call;  // assistant messages that requested a tool
  std::string tool_call_id;              // pairs a tool result with its request
  bool operator==(const ChatMessage&) const = default;
};

struct RetrievedContext {
  std::string chunk_id;
  std::vector<std::string> heading_path;
  std::string text;
  double score = 0.0;
  bool operator==(const RetrievedContext&) const = default;
};

struct ProviderRequest {
  std::string system_prompt;
  std::vector<ChatMessage> conversation;
  nlohmann::json tool_schemas = nlohmann::json::array();
  std::vector<RetrievedContext> retrieved_context;
  bool operator==(const ProviderRequest&) const = default;
};

/// Exactly one of: a tool call or a final answer.
using ProviderResponse = std::variant<ToolRequest, FinalAnswer>;

/// Any failure talking to the model. Codes: "network", "timeout",
/// "malformed-response", "script-exhausted", "scripted-failure".
class ProviderError : public Error {
 public:
  using Error::Error;
};

/// The LLM boundary.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse ask(const ProviderRequest& request) = 0;
};

const char* to_string(Role role);
void to_json(nlohmann::json& j, const ToolRequest& t);
void to_json(nlohmann::json& j, const ChatMessage& m);
void to_json(nlohmann::json& j, const RetrievedContext& c);
void to_json(nlohmann::json& j, const ProviderRequest& r);
nlohmann::json response_to_json(const ProviderResponse& r);

/// Parses `{"tool_call": {"name", "args"}}` or `{"final": "..."}`.
/// Throws Error("bad-script") on anything else.
ProviderResponse response_from_json(const nlohmann::json& j);

}  // namespace cellops
