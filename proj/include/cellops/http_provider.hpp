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
#include <cstddef>
#include <string>

#include <json.hpp>

#include "cellops/provider.hpp"

namespace cellops {

struct HttpProviderConfig {
  std::string endpoint_url;  // e.g. https://host/v1/chat/completions
  std::string model;
  std::string credential_env = "CELLOPS_LLM_API_KEY";  // name of the variable, never the secret
  std::chrono::milliseconds timeout{60000};
};

/// Live model over a chat-completions HTTP interface with function calling.
/// Tool names travel with '.' replaced by "__" since function names on the
/// wire are restricted to [A-Za-z0-9_-]. One ask is one POST; retries belong
/// to the agent loop.
class HttpProvider : public Provider {
 public:
  /// Throws Error("missing-credential") when the variable is unset or empty
  /// and Error("bad-endpoint") for an unparseable URL.
  explicit HttpProvider(HttpProviderConfig config);

  /// Throws ProviderError "network", "timeout" or "malformed-response".
  ProviderResponse ask(const ProviderRequest& request) override;

  static nlohmann::json to_wire(const ProviderRequest& request, const std::string& model);
  static ProviderResponse from_wire(const nlohmann::json& body);

  static std::string wire_tool_name(const std::string& name);
  static std::string registry_tool_name(const std::string& wire_name);

  /// Process-wide counters, used to prove offline runs never touched a model.
  static std::size_t instances_created();
  static std::size_t requests_sent();

 private:
  HttpProviderConfig config_;
  std::string credential_;
  std::string base_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace cellops
