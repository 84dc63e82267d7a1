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

#include <doctest.h>

#include <chrono>
#include <future>
#include <thread>

#include <httplib.h>

#include "agent_rig.hpp"
#include "cellops/api_server.hpp"
#include "cellops/service.hpp"
#include "cellops/sim_json.hpp"
#include "fixtures.hpp"

using namespace cellops;
using agent_rig::call;
using agent_rig::final_answer;
using nlohmann::json;

namespace {

json band3() { return json(fixtures::band3_config()); }

json configure_script() {
  return json::array({call("config.validate", {{"config", band3()}}), call("station.apply_config", {{"config", band3()}}),
                      call("station.start"), call("station.read_kpi", {{"samples", 5}}), final_answer("on air")});
}

ServiceConfig scripted(json script) {
  ServiceConfig c = default_service_config();
  c.provider.kind = "scripted";
  c.provider.script = std::move(script);
  c.logical_clock = true;
  return c;
}

template <typename Pred>
bool eventually(Pred pred) {
  for (int i = 0; i < 500; ++i) {
    if (pred()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return false;
}

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("sessions and policy overrides") {
  Service svc(scripted(configure_script()));
  const auto a = svc.create_session();
  CHECK(svc.session_record(a)["policy"] == json(Policy{}));
  const auto b = svc.create_session({{"require_approval", false}});
  CHECK(svc.session_record(b)["policy"]["require_approval"] == false);
  CHECK(a != b);
  CHECK(error_code([&] { svc.create_session({{"regression_threshold", -1}}); }) == "invalid-policy-override");
  CHECK(error_code([&] { svc.session_record("nope"); }) == "unknown-session");
  CHECK(error_code([&] { svc.post_message("nope", "hi"); }) == "unknown-session");
}

TEST_CASE("service config file") {
  const auto cfg = parse_service_config(
      {{"station_seed", 7}, {"knowledge_dir", "kb"}, {"provider", {{"kind", "scripted"}, {"script", json::array()}}},
       {"policy", {{"max_iterations", 4}}}, {"listen", {{"port", 9000}}}},
      "/srv/cellops");
  CHECK(cfg.station_seed == 7);
  CHECK(cfg.knowledge_dir == std::filesystem::path("/srv/cellops/kb"));
  CHECK(cfg.policy.max_iterations == 4);
  CHECK(cfg.listen_port == 9000);
  CHECK(error_code([] { parse_service_config({{"api_key", "x"}}, "/"); }) == "bad-service-config");
  CHECK(error_code([] { parse_service_config({{"provider", {{"api_key", "x"}}}}, "/"); }) == "bad-service-config");
  CHECK(error_code([] { parse_service_config({{"policy", {{"max_iterations", 0}}}}, "/"); }) == "bad-service-config");
}

TEST_CASE("http provider without credential fails at startup") {
  ServiceConfig c = default_service_config();
  c.provider.kind = "http";
  c.provider.endpoint = "http://127.0.0.1:9/v1/chat/completions";
  c.provider.credential_env = "CELLOPS_UNSET_FOR_TEST";
  ::unsetenv("CELLOPS_UNSET_FOR_TEST");
  CHECK(error_code([&] { Service svc(c); }) == "missing-credential");
}

TEST_CASE("read views") {
  Service svc(scripted(configure_script()));
  CHECK(svc.get_station().lifecycle == Lifecycle::kStopped);
  CHECK(svc.get_audit(-1).empty());

  svc.station().apply_config(fixtures::band3_config());
  svc.station().start();
  svc.tick(100, 1.0);
  const auto last10 = svc.get_kpis(10.0);
  REQUIRE(last10.size() == 10);
  CHECK(last10.front().sim_time_s == 91.0);
  CHECK(last10.back().sim_time_s == 100.0);
  CHECK(error_code([&] { svc.get_kpis(0.0); }) == "window-out-of-range");
  CHECK(error_code([&] { svc.get_kpis(86401.0); }) == "window-out-of-range");

  const auto hits = svc.search_kb("power", 2);
  CHECK(hits["results"].size() == 2);
  CHECK(error_code([&] { svc.search_kb("x", 0); }) == "bad-request");
}

TEST_CASE("kpi ring buffer is bounded and time-ordered") {
  Service svc(scripted(configure_script()));
  svc.station().apply_config(fixtures::band3_config());
  svc.station().start();
  for (int i = 0; i < 4; ++i) svc.tick(1000, 0.5);
  const auto all = svc.get_kpis(StationHost::kMaxWindowS);
  CHECK(all.size() == StationHost::kHistoryCapacity);
  CHECK(svc.station().history_size() == StationHost::kHistoryCapacity);
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].sim_time_s > all[i - 1].sim_time_s);
}

TEST_CASE("event order follows the turn") {
  Service svc(scripted(configure_script()));
  const auto sid = svc.create_session({{"require_approval", false}});
  std::vector<TurnEvent> events;
  const auto turn = svc.post_message(sid, "bring up band 3", [&](const TurnEvent& e) { events.push_back(e); });
  CHECK(turn.outcome == Outcome::kCompleted);
  REQUIRE(events.size() == 2 + turn.iterations.size());
  CHECK(events.front().type == "turn_started");
  CHECK(events.back().type == "turn_finished");
  CHECK(events.back().data["turn"] == json(turn));
  for (std::size_t i = 0; i < turn.iterations.size(); ++i) {
    CHECK(events[i + 1].type == "tool_call");
    CHECK(events[i + 1].data["call"] == json(turn.iterations[i]));
  }
  CHECK(svc.session_record(sid)["transcript"].size() == 1);
  CHECK(svc.turn_state(sid, turn.turn_id)["state"] == "finished");
  CHECK(error_code([&] { svc.turn_state(sid, "t9"); }) == "unknown-turn");
}

TEST_CASE("provider failure still ends with turn_finished") {
  Service svc(scripted(json::array({json{{"fail", "down"}}})));
  const auto sid = svc.create_session({{"retry_backoff_ms", 0}});
  std::vector<std::string> types;
  const auto turn = svc.post_message(sid, "hi", [&](const TurnEvent& e) { types.push_back(e.type); });
  CHECK(turn.outcome == Outcome::kProviderError);
  CHECK(types == std::vector<std::string>{"turn_started", "turn_finished"});
}

TEST_CASE("approval across threads") {
  Service svc(scripted(configure_script()));
  const auto sid = svc.create_session();
  auto fut = std::async(std::launch::async, [&] { return svc.post_message(sid, "bring up band 3"); });
  REQUIRE(eventually([&] {
    try {
      return svc.turn_state(sid, "t1")["state"] == "awaiting_approval";
    } catch (const Error&) {
      return false;
    }
  }));
  CHECK(svc.turn_state(sid, "t1")["turn"]["approval"] == "pending");
  CHECK(error_code([&] { svc.post_message(sid, "again"); }) == "busy-session");
  CHECK(error_code([&] { svc.resolve_approval(sid, "t2", true); }) == "no-pending-approval");
  // another session is not blocked by the suspended one
  const auto other = svc.create_session();
  CHECK(svc.get_station().lifecycle == Lifecycle::kStopped);

  SUBCASE("approved") {
    svc.resolve_approval(sid, "t1", true);
    const auto turn = fut.get();
    CHECK(turn.approval == Approval::kApproved);
    CHECK(svc.get_station().lifecycle == Lifecycle::kRunning);
  }
  SUBCASE("rejected") {
    svc.resolve_approval(sid, "t1", false);
    const auto turn = fut.get();
    CHECK(turn.approval == Approval::kRejected);
    CHECK_FALSE(svc.get_station().active_config);
  }
  CHECK(error_code([&] { svc.resolve_approval(sid, "t1", true); }) == "no-pending-approval");
  (void)other;
}

TEST_CASE("reads never mutate") {
  auto run = [](bool with_reads) {
    Service svc(scripted(configure_script()));
    const auto sid = svc.create_session({{"require_approval", false}});
    svc.post_message(sid, "bring up band 3", [&](const TurnEvent&) {
      if (!with_reads) return;
      for (int i = 0; i < 3; ++i) {
        svc.get_station();
        try {
          svc.get_kpis(30.0);
        } catch (const Error&) {
        }
        svc.search_kb("power", 3);
        svc.get_audit(0);
        svc.session_record(sid);
        svc.turn_state(sid, "t1");
      }
    });
    return json(svc.session_record(sid)["transcript"]).dump() + json(svc.get_station()).dump();
  };
  CHECK(run(true) == run(false));
}

namespace {

struct Server {
  explicit Server(Service& svc) {
    mount_routes(server, svc);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Server() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    return c;
  }
  httplib::Server server;
  int port = 0;
  std::thread thread;
};

std::vector<SseFrame> stream_message(const Server& srv, const std::string& sid, const std::string& text, int* status) {
  auto c = srv.client();
  SseParser parser;
  std::vector<SseFrame> frames;
  httplib::Request req;
  req.method = "POST";
  req.path = "/sessions/" + sid + "/message";
  req.body = json{{"text", text}}.dump();
  req.set_header("Content-Type", "application/json");
  req.content_receiver = [&](const char* data, std::size_t len, std::uint64_t, std::uint64_t) {
    for (auto& f : parser.feed(std::string_view(data, len))) frames.push_back(std::move(f));
    return true;
  };
  auto res = c.send(req);
  *status = res ? res->status : -1;
  return frames;
}

}  // namespace

TEST_CASE("http surface") {
  Service svc(scripted(configure_script()));
  Server srv(svc);
  auto c = srv.client();

  auto created = c.Post("/sessions", "{}", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const auto sid = json::parse(created->body)["session_id"].get<std::string>();

  auto bad = c.Post("/sessions", R"({"policy":{"regression_threshold":-1}})", "application/json");
  CHECK(bad->status == 400);
  CHECK(json::parse(bad->body)["error"]["code"] == "invalid-policy-override");

  auto station = c.Get("/station");
  CHECK(json::parse(station->body)["lifecycle"] == "STOPPED");
  CHECK(c.Get("/station/kpis?window_s=abc")->status == 400);
  CHECK(json::parse(c.Get("/station/kpis?window_s=0")->body)["error"]["code"] == "window-out-of-range");
  CHECK(json::parse(c.Get("/audit?after=xyz")->body)["error"]["code"] == "malformed-cursor");
  CHECK(c.Get("/sessions/nope")->status == 404);
  CHECK(c.Post("/sessions/nope/message", R"({"text":"hi"})", "application/json")->status == 404);

  // stream the gated turn while approving from a second connection
  int status = 0;
  auto fut = std::async(std::launch::async, [&] { return stream_message(srv, sid, "bring up band 3", &status); });
  REQUIRE(eventually([&] {
    auto r = c.Get("/sessions/" + sid + "/turns/t1");
    return r && r->status == 200 && json::parse(r->body)["state"] == "awaiting_approval";
  }));
  CHECK(c.Post("/sessions/" + sid + "/message", R"({"text":"again"})", "application/json")->status == 409);
  CHECK(c.Post("/sessions/" + sid + "/turns/t1/approval", R"({"decision":"maybe"})", "application/json")->status == 400);
  auto approved = c.Post("/sessions/" + sid + "/turns/t1/approval", R"({"decision":"approved"})", "application/json");
  CHECK(approved->status == 200);
  const auto frames = fut.get();
  CHECK(status == 200);

  std::vector<std::string> types;
  for (const auto& f : frames) types.push_back(f.event);
  CHECK(types == std::vector<std::string>{"turn_started", "tool_call", "approval_required", "tool_call", "tool_call",
                                          "tool_call", "turn_finished"});
  const auto turn = json::parse(frames.back().data)["turn"];
  CHECK(turn["outcome"] == "completed");
  CHECK(turn["approval"] == "approved");
  CHECK(c.Post("/sessions/" + sid + "/turns/t1/approval", R"({"decision":"approved"})", "application/json")->status ==
        409);

  auto kpis = json::parse(c.Get("/station/kpis?window_s=3")->body);
  CHECK(kpis["samples"].size() == 3);
  auto kb = json::parse(c.Get("/kb/search?q=transmit%20power&k=2")->body);
  CHECK(kb["results"].size() == 2);

  auto audit = json::parse(c.Get("/audit?after=-1")->body);
  const auto cursor = audit["cursor"].get<std::int64_t>();
  CHECK(audit["records"].size() > 4);
  CHECK(json::parse(c.Get("/audit?after=" + std::to_string(cursor))->body)["records"].empty());

  auto fault = c.Post("/station/fault", R"({"kind":"SYNC_LOSS"})", "application/json");
  CHECK(json::parse(fault->body)["active_fault"] == "SYNC_LOSS");
  CHECK(c.Post("/station/fault", R"({"kind":"FIRE"})", "application/json")->status == 400);
  auto ticked = c.Post("/station/tick", R"({"count":2,"dt_s":1.0})", "application/json");
  CHECK(json::parse(ticked->body)["samples"].size() == 2);
}
