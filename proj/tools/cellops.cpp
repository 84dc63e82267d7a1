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

// cellops: run the service, chat with it, ingest manuals, validate configs
// and replay scenarios.
//
// Exit status: 0 success, 1 the command ran and its check failed (invalid
// config, failed expect, unreachable service), 2 usage error (bad flags,
// unreadable or malformed input).

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>

#include "cellops/api_server.hpp"
#include "cellops/band_table.hpp"
#include "cellops/calculus.hpp"
#include "cellops/config_json.hpp"
#include "cellops/scenario.hpp"
#include "cellops/service.hpp"

using namespace cellops;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void warn_auto() {
  std::cerr << "warning: --auto disables the approval gate; configuration changes reach the station without review\n";
}

std::string compact(const json& j, std::size_t limit = 160) {
  std::string s = j.dump();
  if (s.size() > limit) s = s.substr(0, limit - 3) + "...";
  return s;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw UsageError(path + " is not valid JSON");
  return j;
}

int cmd_validate(const std::string& path, bool as_json) {
  const json doc = read_json_file(path);
  CellConfig cfg;
  try {
    cfg = parse_cell_config(doc);
  } catch (const Error& e) {
    if (as_json) {
      std::cout << json{{"valid", false}, {"error", {{"code", e.code()}, {"message", e.what()}}}}.dump(2) << "\n";
    } else {
      std::cout << "invalid: " << e.code() << ": " << e.what() << "\n";
    }
    return kFailed;
  }
  const auto report = validate_config(cfg, BandTable::load_default());
  if (as_json) {
    std::cout << json(report).dump(2) << "\n";
  } else {
    std::cout << (report.valid ? "valid" : "invalid") << "\n";
    for (const auto& i : report.issues) {
      std::cout << "  " << to_string(i.severity) << "  " << i.field << ": " << i.message;
      if (i.suggested_fix) std::cout << " (suggested: " << *i.suggested_fix << ")";
      std::cout << "\n";
    }
  }
  return report.valid ? kOk : kFailed;
}

int cmd_ingest(const std::string& dir, const std::string& out, bool as_json) {
  if (!std::filesystem::is_directory(dir)) throw UsageError(dir + " is not a directory");
  const auto report = rag::ingest_directory(dir);
  const auto index = rag::Index::build(report.chunks);
  rag::save_index(index, out);
  if (as_json) {
    json docs = json::array();
    for (const auto& d : report.docs) docs.push_back({{"doc_id", d.doc_id}, {"chunks", d.chunks}});
    std::cout << json{{"docs", docs}, {"skipped", report.skipped}, {"chunks", report.chunks.size()}, {"index", out}}.dump(2)
              << "\n";
  } else {
    for (const auto& d : report.docs) std::cout << d.chunks << "\t" << d.doc_id << "\n";
    for (const auto& s : report.skipped) std::cout << "skipped\t" << s << "\n";
    std::cout << report.chunks.size() << " chunks from " << report.docs.size() << " documents written to " << out
              << "\n";
  }
  return report.docs.empty() ? kFailed : kOk;
}

ServiceConfig service_config_from(const std::string& path) {
  if (path.empty()) return default_service_config();
  try {
    return load_service_config(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

int cmd_serve(const std::string& config_path, std::optional<std::uint64_t> seed, bool auto_approve) {
  ServiceConfig cfg = service_config_from(config_path);
  if (seed) cfg.station_seed = *seed;
  if (auto_approve) {
    warn_auto();
    cfg.policy.require_approval = false;
  }
  Service service(cfg);
  httplib::Server server;
  mount_routes(server, service);
  if (!server.bind_to_port(cfg.listen_host, cfg.listen_port)) {
    std::cerr << "error: cannot listen on " << cfg.listen_host << ":" << cfg.listen_port << "\n";
    return kFailed;
  }
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    auto next_tick = std::chrono::steady_clock::now();
    while (!g_stop) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      if (cfg.tick_interval_s > 0 && std::chrono::steady_clock::now() >= next_tick) {
        service.tick(1, cfg.tick_interval_s);
        next_tick += std::chrono::milliseconds(static_cast<std::int64_t>(cfg.tick_interval_s * 1000));
      }
    }
    service.shutdown();
    server.stop();
  });
  std::cerr << "cellops listening on http://" << cfg.listen_host << ":" << cfg.listen_port << "\n";
  server.listen_after_bind();
  g_stop = true;
  watcher.join();
  return kOk;
}

void print_event(const SseFrame& f, httplib::Client& approvals, const std::string& sid) {
  const json data = json::parse(f.data, nullptr, false);
  if (data.is_discarded()) return;
  if (f.event == "tool_call") {
    const json& c = data["call"];
    std::cout << "  -> " << c["name"].get<std::string>() << " " << compact(c["args"]);
    if (c["ok"].get<bool>()) {
      std::cout << "  ok\n";
    } else {
      std::cout << "  error " << c["result"]["error"].value("code", "?") << "\n";
    }
  } else if (f.event == "approval_required") {
    std::cout << "  proposed change:\n";
    for (const auto& e : data["proposed_diff"]["entries"]) {
      std::cout << "    " << e["field"].get<std::string>() << ": " << e["old_value"].dump() << " -> "
                << e["new_value"].dump() << "\n";
    }
    std::cout << "  approve? [y/N] " << std::flush;
    std::string answer;
    std::getline(std::cin, answer);
    const bool yes = !answer.empty() && (answer[0] == 'y' || answer[0] == 'Y');
    approvals.Post("/sessions/" + sid + "/turns/" + data["turn_id"].get<std::string>() + "/approval",
                json{{"decision", yes ? "approved" : "rejected"}}.dump(), "application/json");
  } else if (f.event == "turn_finished") {
    const json& t = data["turn"];
    std::cout << "\n" << t["final_answer"].get<std::string>() << "\n";
    std::cout << "  [" << t["outcome"].get<std::string>() << "; citations: ";
    for (const auto& c : t["retrieved_citations"]) std::cout << c.get<std::string>() << " ";
    std::cout << "]\n";
  }
}

int cmd_chat(const std::string& endpoint, bool auto_approve) {
  httplib::Client client(endpoint);
  client.set_read_timeout(600, 0);
  httplib::Client approvals(endpoint);
  json policy = json::object();
  if (auto_approve) {
    warn_auto();
    policy["require_approval"] = false;
  }
  auto created = client.Post("/sessions", json{{"policy", policy}}.dump(), "application/json");
  if (!created) {
    std::cerr << "error: cannot reach " << endpoint << ": " << httplib::to_string(created.error()) << "\n";
    return kFailed;
  }
  if (created->status != 201) {
    std::cerr << "error: " << created->body << "\n";
    return kFailed;
  }
  const std::string sid = json::parse(created->body)["session_id"];
  std::cout << "session " << sid << " (empty line or /quit to leave)\n";
  std::string line;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    if (line.empty() || line == "/quit") break;
    SseParser parser;
    httplib::Request req;
    req.method = "POST";
    req.path = "/sessions/" + sid + "/message";
    req.body = json{{"text", line}}.dump();
    req.set_header("Content-Type", "application/json");
    std::string error_body;
    int status = 0;
    req.response_handler = [&](const httplib::Response& r) {
      status = r.status;
      return true;
    };
    req.content_receiver = [&](const char* data, std::size_t len, std::uint64_t, std::uint64_t) {
      if (status != 200) {
        error_body.append(data, len);
        return true;
      }
      for (const auto& f : parser.feed(std::string_view(data, len))) print_event(f, approvals, sid);
      return true;
    };
    auto res = client.send(req);
    if (!res) {
      std::cerr << "error: stream failed: " << httplib::to_string(res.error()) << "\n";
      return kFailed;
    }
    if (status != 200) std::cerr << "error: " << error_body << "\n";
  }
  return kOk;
}

int cmd_scenario(const std::string& path, const std::string& config_path, const std::string& endpoint,
                 std::optional<std::uint64_t> seed, bool auto_approve, bool as_json) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  ScenarioOptions opt;
  opt.seed = seed;
  opt.auto_approve = auto_approve;
  if (auto_approve) warn_auto();
  if (sc.provider_kind == "live") {
    opt.live = service_config_from(config_path).provider;
    if (!endpoint.empty()) opt.live.endpoint = endpoint;
  }
  const auto result = run_scenario(sc, opt);
  if (as_json) {
    std::cout << summary_json(result).dump(2) << "\n";
  } else {
    std::cout << format_table(result);
  }
  return result.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellops: LLM-assisted base station operations"};
  app.require_subcommand(1);

  std::string config_path, endpoint = "http://127.0.0.1:8080", target, out = "cellops-index.json";
  std::optional<std::uint64_t> seed;
  bool auto_approve = false, as_json = false;

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "Service config (JSON)");
  serve->add_option("--seed", seed, "Station seed, overrides the config");
  serve->add_flag("--auto", auto_approve, "Disable the approval gate");

  auto* chat = app.add_subcommand("chat", "Interactive session against a running service");
  chat->add_option("--endpoint", endpoint, "Service base URL")->capture_default_str();
  chat->add_flag("--auto", auto_approve, "Disable the approval gate for this session");

  auto* ingest = app.add_subcommand("ingest", "Chunk and index a directory of manuals");
  ingest->add_option("dir", target, "Directory of .md/.txt files")->required();
  ingest->add_option("--out", out, "Index file to write")->capture_default_str();
  ingest->add_flag("--json", as_json, "Machine-readable output");

  auto* validate = app.add_subcommand("validate", "Check a cell configuration file");
  validate->add_option("config", target, "Cell config (JSON)")->required();
  validate->add_flag("--json", as_json, "Machine-readable output");

  auto* scenario = app.add_subcommand("scenario", "Replay a scenario file and check its expectations");
  scenario->add_option("path", target, "Scenario file (JSON)")->required();
  scenario->add_option("--seed", seed, "Station seed, overrides the scenario");
  scenario->add_flag("--auto", auto_approve, "Disable the approval gate");
  scenario->add_flag("--json", as_json, "Machine-readable results");
  scenario->add_option("--config", config_path, "Service config supplying the live provider");
  scenario->add_option("--endpoint", endpoint, "Model endpoint for a live provider");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*serve) return cmd_serve(config_path, seed, auto_approve);
    if (*chat) return cmd_chat(endpoint, auto_approve);
    if (*ingest) return cmd_ingest(target, out, as_json);
    if (*validate) return cmd_validate(target, as_json);
    if (*scenario) {
      const bool endpoint_given = scenario->count("--endpoint") > 0;
      return cmd_scenario(target, config_path, endpoint_given ? endpoint : "", seed, auto_approve, as_json);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
