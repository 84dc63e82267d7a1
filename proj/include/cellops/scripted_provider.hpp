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

#include <cstddef>
#include <mutex>
#include <variant>
#include <vector>

#include "cellops/provider.hpp"

namespace cellops {

/// Deterministic stand-in for the LLM: replays a fixed list of responses in
/// order, one per ask, and keeps every request it was shown.
class ScriptedProvider : public Provider {
 public:
  /// Simulated provider outage for one ask.
  struct Failure {
    std::string message;
    bool operator==(const Failure&) const = default;
  };
  using Entry = std::variant<ToolRequest, FinalAnswer, Failure>;

  /// Throws Error("bad-script") on an empty script.
  explicit ScriptedProvider(std::vector<Entry> script);
  /// Array of `{"tool_call": {...}}`, `{"final": "..."}` or `{"fail": "..."}`.
  static ScriptedProvider from_json(const nlohmann::json& script);

  /// Throws ProviderError("script-exhausted") once the script runs out.
  ProviderResponse ask(const ProviderRequest& request) override;

  std::vector<ProviderRequest> requests() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::vector<Entry> script_;
  std::size_t next_ = 0;
  std::vector<ProviderRequest> seen_;
};

}  // namespace cellops
