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

#include <string>
#include <string_view>
#include <vector>

#include "cellops/service.hpp"

namespace httplib {
class Server;
}

namespace cellops {

/// Registers the HTTP/JSON routes on `server`:
///
///   POST /sessions                                  {"policy": {...}}?
///   GET  /sessions/{id}
///   POST /sessions/{id}/message                     {"text": "..."} -> SSE
///   POST /sessions/{id}/turns/{tid}/approval        {"decision": "approved"|"rejected"}
///   GET  /sessions/{id}/turns/{tid}                 polling fallback
///   GET  /station
///   GET  /station/kpis?window_s=
///   POST /station/fault                             {"kind": "SYNC_LOSS"}
///   POST /station/tick                              {"count": n, "dt_s": x}
///   GET  /kb/search?q=&k=
///   GET  /audit?after=
///
/// Errors are `{"error": {"code", "message"}}` with a 4xx/5xx status. The
/// message stream carries `event: <type>` / `data: <json>` frames in turn
/// order; turn_finished is always the last frame.
void mount_routes(httplib::Server& server, Service& service);

std::string format_sse(const std::string& event, const std::string& data, std::size_t id);

struct SseFrame {
  std::string event;
  std::string data;
};

/// Incremental decoder for the message stream; frames may arrive split
/// across reads.
class SseParser {
 public:
  std::vector<SseFrame> feed(std::string_view chunk);

 private:
  std::string buffer_;
};

}  // namespace cellops
