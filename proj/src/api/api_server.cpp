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

#include "cellops/api_server.hpp"

#include <charconv>
#include <memory>

#include <httplib.h>

#include "cellops/sim_json.hpp"

namespace cellops {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const std::string& code, const std::string& message) {
  send_json(res, {{"error", {{"code", code}, {"message", message}}}}, http_status_for(code));
}

json body_object(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error("bad-request", "request body must be a JSON object");
  return j;
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, "bad-request", e.what());
    }
  };
}

double parse_double(const std::string& text, const std::string& code) {
  double v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw Error(code, "cannot parse '" + text + "' as a number");
  return v;
}

std::int64_t parse_int(const std::string& text, const std::string& code) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw Error(code, "cannot parse '" + text + "' as an integer");
  return v;
}

// State shared between the SSE content provider and its releaser.
struct Stream {
  std::string session_id;
  bool ran = false;
};

}  // namespace

std::string format_sse(const std::string& event, const std::string& data, std::size_t id) {
  return "id: " + std::to_string(id) + "\nevent: " + event + "\ndata: " + data + "\n\n";
}

std::vector<SseFrame> SseParser::feed(std::string_view chunk) {
  buffer_.append(chunk);
  std::vector<SseFrame> frames;
  std::size_t end;
  while ((end = buffer_.find("\n\n")) != std::string::npos) {
    SseFrame f;
    std::size_t pos = 0;
    while (pos < end) {
      std::size_t nl = buffer_.find('\n', pos);
      if (nl == std::string::npos || nl > end) nl = end;
      const std::string_view line(buffer_.data() + pos, nl - pos);
      if (line.starts_with("event: ")) f.event = line.substr(7);
      if (line.starts_with("data: ")) f.data += line.substr(6);
      pos = nl + 1;
    }
    frames.push_back(std::move(f));
    buffer_.erase(0, end + 2);
  }
  return frames;
}

void mount_routes(httplib::Server& server, Service& service) {
  server.Post("/sessions", guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = body_object(req);
                const std::string id = service.create_session(body.value("policy", json::object()));
                send_json(res, service.session_record(id), 201);
              }));

  server.Get(R"(/sessions/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
               send_json(res, service.session_record(req.matches[1]));
             }));

  server.Post(R"(/sessions/([^/]+)/message)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = body_object(req);
                if (!body.contains("text") || !body["text"].is_string()) {
                  throw Error("bad-request", "body must carry a string 'text'");
                }
                auto stream = std::make_shared<Stream>();
                stream->session_id = req.matches[1];
                service.reserve_turn(stream->session_id, body["text"].get<std::string>());
                res.set_header("Cache-Control", "no-cache");
                res.set_chunked_content_provider(
                    "text/event-stream",
                    [&service, stream](std::size_t, httplib::DataSink& sink) {
                      stream->ran = true;
                      std::size_t seq = 0;
                      bool open = true;
                      // The turn finishes even if the client goes away; later frames are dropped.
                      service.run_reserved(stream->session_id, [&](const TurnEvent& e) {
                        if (!open) return;
                        const std::string frame = format_sse(e.type, e.data.dump(), ++seq);
                        open = sink.write(frame.data(), frame.size());
                      });
                      sink.done();
                      return true;
                    },
                    [&service, stream](bool) {
                      if (!stream->ran) service.cancel_reservation(stream->session_id);
                    });
              }));

  server.Post(R"(/sessions/([^/]+)/turns/([^/]+)/approval)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = body_object(req);
                const std::string decision = body.value("decision", "");
                if (decision != "approved" && decision != "rejected") {
                  throw Error("bad-request", "decision must be 'approved' or 'rejected'");
                }
                service.resolve_approval(req.matches[1], req.matches[2], decision == "approved");
                send_json(res, {{"session_id", req.matches[1]}, {"turn_id", req.matches[2]}, {"decision", decision}});
              }));

  server.Get(R"(/sessions/([^/]+)/turns/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
               send_json(res, service.turn_state(req.matches[1], req.matches[2]));
             }));

  server.Get("/station", guarded([&](const httplib::Request&, httplib::Response& res) {
               send_json(res, service.get_station());
             }));

  server.Get("/station/kpis", guarded([&](const httplib::Request& req, httplib::Response& res) {
               if (!req.has_param("window_s")) throw Error("bad-request", "window_s is required");
               const double w = parse_double(req.get_param_value("window_s"), "window-out-of-range");
               send_json(res, {{"window_s", w}, {"samples", service.get_kpis(w)}});
             }));

  server.Post("/station/fault", guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = body_object(req);
                const auto kind = parse_fault_kind(body.value("kind", ""));
                if (!kind) throw Error("unknown-fault", "kind must be PA_OVERHEAT, SYNC_LOSS or BACKHAUL_DOWN");
                service.inject_fault(*kind);
                send_json(res, service.get_station());
              }));

  server.Post("/station/tick", guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = body_object(req);
                const auto samples = service.tick(body.value("count", 1), body.value("dt_s", 1.0));
                send_json(res, {{"samples", samples}});
              }));

  server.Get("/kb/search", guarded([&](const httplib::Request& req, httplib::Response& res) {
               if (!req.has_param("q")) throw Error("bad-request", "q is required");
               const int k = req.has_param("k") ? static_cast<int>(parse_int(req.get_param_value("k"), "bad-request")) : 3;
               send_json(res, service.search_kb(req.get_param_value("q"), k));
             }));

  server.Get("/audit", guarded([&](const httplib::Request& req, httplib::Response& res) {
               const std::int64_t after =
                   req.has_param("after") ? parse_int(req.get_param_value("after"), "malformed-cursor") : -1;
               const auto records = service.get_audit(after);
               send_json(res, {{"records", records}, {"cursor", records.empty() ? after : records.back().ts}});
             }));
}

}  // namespace cellops
