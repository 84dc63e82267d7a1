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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <unistd.h>
#include <spawn.h>
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cellops/band_table.hpp"

extern char** environ;

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

std::string repo(const std::string& rel) { return (cellops::default_data_dir() / rel).string(); }

fs::path temp_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("cellops-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string(CELLOPS_CLI) + " " + args + " 2>&1";
  if (!stdin_text.empty()) {
    static int n = 0;
    const auto in = temp_dir() / ("stdin-" + std::to_string(++n) + ".txt");
    std::ofstream(in) << stdin_text;
    cmd += " < " + in.string();
  }
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = temp_dir() / name;
  std::ofstream(path) << content;
  return path.string();
}

json scenario_json(const std::string& name) {
  std::ifstream in(repo("scenarios/" + name + ".json"));
  return json::parse(in);
}

int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("validate").status == 2);
  CHECK(run("validate --bogus x").status == 2);
  CHECK(run("validate /nonexistent/cfg.json").status == 2);
  CHECK(run("validate " + write_temp("broken.json", "{not json")).status == 2);
  CHECK(run("scenario /nonexistent.json").status == 2);
  CHECK(run("ingest /nonexistent-dir").status == 2);
  CHECK(run("serve --config " + write_temp("svc-bad.json", R"({"api_key":"x"})")).status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("validate") {
  const auto ok = run("validate " + repo("configs/band3_10mhz.json"));
  CHECK(ok.status == 0);
  CHECK(ok.out.starts_with("valid"));

  const auto bad = run("validate " + repo("configs/band3_pci504.json"));
  CHECK(bad.status == 1);
  CHECK(bad.out.find("pci") != std::string::npos);

  const auto js = run("validate --json " + repo("configs/band3_pci504.json"));
  CHECK(js.status == 1);
  CHECK(json::parse(js.out)["valid"] == false);

  CHECK(run("validate " + write_temp("partial.json", R"({"band":3})")).status == 1);
}

TEST_CASE("ingest") {
  const auto out = (temp_dir() / "index.json").string();
  const auto r = run("ingest " + repo("data/kb") + " --out " + out);
  CHECK(r.status == 0);
  CHECK(r.out.find("troubleshooting.md") != std::string::npos);
  CHECK(fs::exists(out));
  CHECK(run("ingest --json " + repo("data/kb") + " --out " + out).status == 0);
}

TEST_CASE("scenario") {
  const auto r = run("scenario " + repo("scenarios/configure-band3.json"));
  CHECK(r.status == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);

  SUBCASE("deterministic across runs") {
    const auto a = run("scenario --json " + repo("scenarios/diagnose-sync-loss.json"));
    const auto b = run("scenario --json " + repo("scenarios/diagnose-sync-loss.json"));
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out)["passed"] == true);
  }
  SUBCASE("failed expect exits 1") {
    auto sc = scenario_json("configure-band3");
    sc["steps"].push_back({{"expect", {{"lifecycle", "FAULT"}}}});
    const auto f = run("scenario " + write_temp("failing.json", sc.dump()));
    CHECK(f.status == 1);
    CHECK(f.out.find("FAIL") != std::string::npos);
  }
  SUBCASE("zero expects is a usage error") {
    json sc = {{"name", "empty"},
               {"provider", {{"kind", "scripted"}, {"script", json::array({{{"final", "x"}}})}}},
               {"steps", json::array({{{"say", "hi"}}})}};
    CHECK(run("scenario " + write_temp("noexpect.json", sc.dump())).status == 2);
  }
  SUBCASE("--auto skips the gate and warns") {
    const auto a = run("scenario --auto " + repo("scenarios/configure-band3.json"));
    CHECK(a.out.find("warning") != std::string::npos);
    // the expect on a pending approval now fails
    CHECK(a.status == 1);
  }
  SUBCASE("--seed overrides the scenario seed") {
    CHECK(run("scenario --seed 7 " + repo("scenarios/rollback-on-regression.json")).status <= 1);
  }
}

TEST_CASE("chat against unreachable service") {
  CHECK(run("chat --endpoint http://127.0.0.1:9", "hi\n").status == 1);
}

TEST_CASE("serve and chat") {
  const int port = free_port();
  json script = scenario_json("configure-band3")["provider"]["script"];
  const json cfg = {{"listen", {{"host", "127.0.0.1"}, {"port", port}}},
                    {"knowledge_dir", repo("data/kb")},
                    {"system_prompt", repo("prompts/system_prompt.v1.txt")},
                    {"audit_log", (temp_dir() / "audit.jsonl").string()},
                    {"tick_interval_s", 0},
                    {"provider", {{"kind", "scripted"}, {"script", script}}}};
  const auto cfg_path = write_temp("service.json", cfg.dump());

  pid_t pid = 0;
  std::string bin = CELLOPS_CLI;
  std::vector<std::string> argv_s{bin, "serve", "--config", cfg_path};
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);
  REQUIRE(::posix_spawn(&pid, bin.c_str(), nullptr, nullptr, argv.data(), environ) == 0);

  httplib::Client probe("127.0.0.1", port);
  probe.set_connection_timeout(1, 0);
  probe.set_read_timeout(5, 0);
  bool up = false;
  for (int i = 0; i < 200 && !up; ++i) {
    up = static_cast<bool>(probe.Get("/station"));
    if (!up) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  REQUIRE(up);

  const auto r = run("chat --endpoint http://127.0.0.1:" + std::to_string(port), "bring up band 3\ny\n");
  INFO(r.out);
  CHECK(r.status == 0);
  CHECK(r.out.find("-> config.validate") != std::string::npos);
  CHECK(r.out.find("proposed change") != std::string::npos);
  CHECK(r.out.find("completed") != std::string::npos);
  CHECK(json::parse(probe.Get("/station")->body)["lifecycle"] == "RUNNING");

  ::kill(pid, SIGTERM);
  int st = 0;
  ::waitpid(pid, &st, 0);
  CHECK(WIFEXITED(st));
  CHECK(WEXITSTATUS(st) == 0);

  // the audit log survived as JSONL
  std::ifstream audit(temp_dir() / "audit.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(audit, line)) {
    CHECK(json::parse(line).contains("ts"));
    ++lines;
  }
  CHECK(lines > 4);
}
