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

#include "cellops/audit_log.hpp"

#include <algorithm>
#include <chrono>
#include <memory>

#include "cellops/error.hpp"

namespace cellops {

std::int64_t wall_clock_us() {
  using namespace std::chrono;
  return duration_cast<microseconds>(system_clock::now().time_since_epoch()).count();
}

Clock logical_clock(std::int64_t start_us, std::int64_t step_us) {
  auto t = std::make_shared<std::int64_t>(start_us);
  auto mu = std::make_shared<std::mutex>();
  return [t, mu, step_us] {
    std::lock_guard lock(*mu);
    *t += step_us;
    return *t;
  };
}

void to_json(nlohmann::json& j, const AuditRecord& r) {
  j = nlohmann::json{{"ts", r.ts},
                     {"session_id", r.session_id},
                     {"turn_id", r.turn_id},
                     {"kind", r.kind},
                     {"payload", r.payload}};
}

AuditLog::AuditLog(Clock clock, std::optional<std::filesystem::path> file) : clock_(std::move(clock)) {
  if (file) {
    std::error_code ec;
    if (file->has_parent_path()) std::filesystem::create_directories(file->parent_path(), ec);
    file_.open(*file, std::ios::app);
    if (!file_) throw Error("io-error", "cannot open audit log " + file->string());
  }
}

AuditRecord AuditLog::append(const std::string& session_id, const std::string& turn_id, const std::string& kind,
                             nlohmann::json payload) {
  std::lock_guard lock(mu_);
  AuditRecord r{std::max(clock_(), last_ts_ + 1), session_id, turn_id, kind, std::move(payload)};
  last_ts_ = r.ts;
  if (file_.is_open()) {
    file_ << nlohmann::json(r).dump() << '\n';
    file_.flush();
  }
  records_.push_back(r);
  return r;
}

std::vector<AuditRecord> AuditLog::after(std::int64_t cursor) const {
  std::lock_guard lock(mu_);
  auto it = std::upper_bound(records_.begin(), records_.end(), cursor,
                             [](std::int64_t c, const AuditRecord& r) { return c < r.ts; });
  return {it, records_.end()};
}

}  // namespace cellops
