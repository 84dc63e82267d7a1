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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cellops {

/// Microsecond clock. Injectable so replays can run on logical time.
using Clock = std::function<std::int64_t()>;

std::int64_t wall_clock_us();

/// Logical clock for tests and scenario replay: each reading advances by
/// `step_us`.
Clock logical_clock(std::int64_t start_us = 0, std::int64_t step_us = 1000);

struct AuditRecord {
  std::int64_t ts = 0;  // strictly increasing; doubles as the read cursor
  std::string session_id;
  std::string turn_id;
  std::string kind;  // tool_call | provider | approval
  nlohmann::json payload;

  bool operator==(const AuditRecord&) const = default;
};

void to_json(nlohmann::json& j, const AuditRecord& r);

/// Append-only audit trail, one JSON object per line when backed by a file.
class AuditLog {
 public:
  explicit AuditLog(Clock clock = wall_clock_us, std::optional<std::filesystem::path> file = std::nullopt);

  AuditRecord append(const std::string& session_id, const std::string& turn_id, const std::string& kind,
                     nlohmann::json payload);

  /// Records with ts > cursor, in order.
  std::vector<AuditRecord> after(std::int64_t cursor) const;
  std::vector<AuditRecord> all() const { return after(-1); }
  std::int64_t now() const { return clock_(); }

 private:
  Clock clock_;
  mutable std::mutex mu_;
  std::vector<AuditRecord> records_;
  std::int64_t last_ts_ = -1;
  std::ofstream file_;
};

}  // namespace cellops
