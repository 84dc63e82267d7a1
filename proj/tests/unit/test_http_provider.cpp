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

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "agent_rig.hpp"
#include "cellops/http_provider.hpp"
#include "cellops/tools.hpp"

using namespace cellops;
using nlohmann::json;

namespace {

// Loopback chat-completions stub answering every POST with `reply`.
struct Stub {
  explicit Stub(std::string reply, int status = 200) {
    server.Post("/v1/chat/completions", [this, reply, status](const httplib::Request& req, httplib::Response& res) {
      last_auth = req.get_header_value("Authorization");
      last_body = json::parse(req.body);
      res.status = status;
      res.set_content(reply, "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Stub() {
    server.stop();
    thread.join();
  }
  HttpProviderConfig config() const {
    return {"http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "stub-model", "CELLOPS_TEST_KEY",
            std::chrono::milliseconds(2000)};
  }

  httplib::Server server;
  int port = 0;
  std::thread thread;
  std::string last_auth;
  json last_body;
};

ProviderRequest sample_request() {
  ProviderRequest r;
  r.system_prompt = "sys";
  r.tool_schemas = tool_schemas();
  r.retrieved_context = {{"troubleshooting.md#0001", {"Troubleshooting", "Sync loss (SYNC_LOSS)"}, "text", 1.5}};
  r.conversation = {{Role::kUser, "hello", std::nullopt, {}},
                    {Role::kAssistant, {}, ToolRequest{"station.get_state", json::object()}, "call_1"},
                    {Role::kTool, R"({"lifecycle":"STOPPED"})", std::nullopt, "call_1"}};
  return r;
}

const char* kToolReply = R"({"choices":[{"message":{"role":"assistant","content":null,"tool_calls":[
  {"id":"x","type":"function","function":{"name":"kb__search","arguments":"{\"query\":\"sync loss\",\"k\":2}"}}]}}]})";

}  // namespace

TEST_CASE("tool name mapping") {
  CHECK(HttpProvider::wire_tool_name("station.read_kpi") == "station__read_kpi");
  for (const auto& spec : tool_registry()) {
    CHECK(HttpProvider::registry_tool_name(HttpProvider::wire_tool_name(spec.name)) == spec.name);
  }
}

TEST_CASE("missing credential fails at construction") {
  ::unsetenv("CELLOPS_TEST_KEY");
  try {
    HttpProvider p({"http://127.0.0.1:9/v1/chat/completions", "m", "CELLOPS_TEST_KEY"});
    FAIL("constructed without a credential");
  } catch (const Error& e) {
    CHECK(e.code() == "missing-credential");
  }
}

TEST_CASE("loopback stub") {
  ::setenv("CELLOPS_TEST_KEY", "sk-test-123", 1);

  SUBCASE("tool-call payload decodes into the matching request") {
    Stub stub(kToolReply);
    HttpProvider p(stub.config());
    const auto r = p.ask(sample_request());
    const auto& tr = std::get<ToolRequest>(r);
    CHECK(tr.name == "kb.search");
    CHECK(tr.args == json{{"query", "sync loss"}, {"k", 2}});
    CHECK(stub.last_auth == "Bearer sk-test-123");
    CHECK(stub.last_body["model"] == "stub-model");
    const auto& msgs = stub.last_body["messages"];
    REQUIRE(msgs.size() == 5);
    CHECK(msgs[0]["content"] == "sys");
    CHECK(msgs[1]["content"].get<std::string>().find("[troubleshooting.md#0001]") != std::string::npos);
    CHECK(msgs[3]["tool_calls"][0]["function"]["name"] == "station__get_state");
    CHECK(msgs[4]["tool_call_id"] == "call_1");
    CHECK(stub.last_body["tools"].size() == tool_registry().size());
  }
  SUBCASE("final text") {
    Stub stub(R"({"choices":[{"message":{"role":"assistant","content":"all good"}}]})");
    HttpProvider p(stub.config());
    CHECK(std::get<FinalAnswer>(p.ask(sample_request())).text == "all good");
  }
  SUBCASE("malformed payloads") {
    for (const std::string body : {"not json", R"({"choices":[]})", R"({"choices":[{"message":{"content":""}}]})",
                                   R"({"choices":[{"message":{"tool_calls":[{"function":{"name":"kb__search","arguments":"{oops"}}]}}]})"}) {
      CAPTURE(body);
      Stub stub(body);
      HttpProvider p(stub.config());
      try {
        p.ask(sample_request());
        FAIL("accepted");
      } catch (const ProviderError& e) {
        CHECK(e.code() == "malformed-response");
      }
    }
  }
  SUBCASE("server error status") {
    Stub stub("{}", 500);
    HttpProvider p(stub.config());
    CHECK_THROWS_AS(p.ask(sample_request()), ProviderError);
  }
  SUBCASE("unreachable endpoint is a network error and never leaks the key") {
    httplib::Server probe;
    const int port = probe.bind_to_any_port("127.0.0.1");  // bound but never listening
    HttpProvider p({"http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "m", "CELLOPS_TEST_KEY",
                    std::chrono::milliseconds(300)});
    try {
      p.ask(sample_request());
      FAIL("reached a closed port");
    } catch (const ProviderError& e) {
      CHECK((e.code() == "network" || e.code() == "timeout"));
      CHECK(std::string(e.what()).find("sk-test-123") == std::string::npos);
    }
  }
  SUBCASE("a malformed model surfaces as a provider_error turn") {
    Stub stub(R"({"choices":[{"message":{}}]})");
    HttpProvider p(stub.config());
    agent_rig::Rig rig(json::array({agent_rig::final_answer("unused")}));
    SessionContext ctx{"s1", rig.station, rig.kb, rig.audit, p, Policy{}, "sys", [](auto) {}};
    const auto t = run_turn(ctx, "t1", "hello");
    CHECK(t.outcome == Outcome::kProviderError);
  }
  ::unsetenv("CELLOPS_TEST_KEY");
}
