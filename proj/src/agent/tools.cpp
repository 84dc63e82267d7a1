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

#include "cellops/tools.hpp"

#include <algorithm>

#include "cellops/calculus.hpp"
#include "cellops/config_json.hpp"
#include "cellops/error.hpp"
#include "cellops/kpi.hpp"
#include "cellops/sim_json.hpp"

namespace cellops {
namespace {

using nlohmann::json;

json empty_object_schema() {
  return {{"type", "object"}, {"properties", json::object()}, {"additionalProperties", false}};
}

// Types only: range rules belong to config.validate, which must be able to
// report on out-of-range values.
json config_schema() {
  return {{"type", "object"},
          {"properties",
           {{"band", {{"type", "integer"}, {"description", "LTE band number"}}},
            {"earfcn_dl", {{"type", "integer"}, {"description", "downlink EARFCN"}}},
            {"bandwidth_mhz", {{"type", "number"}, {"description", "1.4, 3, 5, 10, 15 or 20"}}},
            {"pci", {{"type", "integer"}, {"description", "physical cell id 0..503"}}},
            {"tx_power_dbm", {{"type", "number"}, {"description", "0..46 dBm"}}},
            {"plmn", {{"type", "string"}, {"description", "MCC+MNC, 5-6 digits"}}},
            {"tac", {{"type", "integer"}, {"description", "tracking area code 0..65535"}}},
            {"cell_identity", {{"type", "integer"}, {"description", "28-bit cell identity"}}},
            {"neighbor_pcis", {{"type", "array"}, {"items", {{"type", "integer"}}}}}}},
          {"required",
           {"band", "earfcn_dl", "bandwidth_mhz", "pci", "tx_power_dbm", "plmn", "tac", "cell_identity",
            "neighbor_pcis"}},
          {"additionalProperties", false}};
}

json config_arg_schema() {
  return {{"type", "object"},
          {"properties", {{"config", config_schema()}}},
          {"required", {"config"}},
          {"additionalProperties", false}};
}

std::vector<ToolSpec> build_registry() {
  return {
      {"kb.search", "Search the operations manuals. Returns ranked chunks with their chunk ids.",
       {{"type", "object"},
        {"properties",
         {{"query", {{"type", "string"}}}, {"k", {{"type", "integer"}, {"minimum", 1}, {"maximum", 10}}}}},
        {"required", {"query"}},
        {"additionalProperties", false}},
       false},
      {"station.get_state", "Lifecycle, active config, active fault and simulated time of the base station.",
       empty_object_schema(), false},
      {"station.get_config", "The configuration currently applied to the cell, or null.", empty_object_schema(),
       false},
      {"config.validate", "Check a complete cell configuration against the planning rules.", config_arg_schema(),
       false},
      {"station.apply_config",
       "Apply a configuration while the cell is STOPPED or CONFIGURED. Requires a prior successful "
       "config.validate of the identical configuration.",
       config_arg_schema(), true},
      {"station.start", "Put the configured cell on air.", empty_object_schema(), true},
      {"station.stop", "Take the cell off air; clears any active fault and keeps the configuration.",
       empty_object_schema(), true},
      {"station.read_kpi", "Observe the cell for a number of telemetry ticks and return samples plus a summary.",
       {{"type", "object"},
        {"properties",
         {{"samples", {{"type", "integer"}, {"minimum", 1}, {"maximum", 60}}},
          {"dt_s", {{"type", "number"}, {"minimum", 0.001}, {"maximum", 60}}}}},
        {"additionalProperties", false}},
       true},
  };
}

bool type_matches(const std::string& type, const json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  return false;
}

json dispatch(const ToolCall& call, ToolContext& ctx) {
  const auto& a = call.args;
  if (call.name == "kb.search") {
    const auto index = ctx.kb.current();
    const auto k = static_cast<std::size_t>(a.value("k", 3));
    json results = json::array();
    for (const auto& hit : index->retrieve(a.at("query").get<std::string>(), k)) {
      const auto* chunk = index->find(hit.chunk_id);
      results.push_back({{"chunk_id", hit.chunk_id},
                         {"score", hit.score},
                         {"heading_path", chunk->heading_path},
                         {"text", chunk->text}});
    }
    return {{"results", results}};
  }
  if (call.name == "station.get_state") return ctx.station.snapshot();
  if (call.name == "station.get_config") {
    auto snap = ctx.station.snapshot();
    return {{"config", snap.active_config ? json(*snap.active_config) : json(nullptr)}};
  }
  if (call.name == "config.validate") {
    return validate_config(parse_cell_config(a.at("config")), ctx.station.bands());
  }
  if (call.name == "station.apply_config") {
    ctx.station.apply_config(parse_cell_config(a.at("config")));
    return {{"lifecycle", to_string(ctx.station.snapshot().lifecycle)}};
  }
  if (call.name == "station.start") {
    ctx.station.start();
    return {{"lifecycle", to_string(ctx.station.snapshot().lifecycle)}};
  }
  if (call.name == "station.stop") {
    ctx.station.stop();
    return {{"lifecycle", to_string(ctx.station.snapshot().lifecycle)}};
  }
  if (call.name == "station.read_kpi") {
    auto samples = ctx.station.tick(a.value("samples", 5), a.value("dt_s", 1.0));
    return {{"samples", samples}, {"summary", summarize(samples)}};
  }
  throw Error("unknown-tool", "no tool named '" + call.name + "'");
}

}  // namespace

const std::vector<ToolSpec>& tool_registry() {
  static const std::vector<ToolSpec> registry = build_registry();
  return registry;
}

const ToolSpec* find_tool(std::string_view name) {
  const auto& r = tool_registry();
  auto it = std::find_if(r.begin(), r.end(), [&](const ToolSpec& t) { return t.name == name; });
  return it == r.end() ? nullptr : &*it;
}

json tool_schemas() {
  json out = json::array();
  for (const auto& t : tool_registry()) {
    out.push_back({{"name", t.name}, {"description", t.description}, {"parameters", t.parameters}});
  }
  return out;
}

void validate_against_schema(const json& schema, const json& value, const std::string& path) {
  if (auto t = schema.find("type"); t != schema.end() && !type_matches(t->get<std::string>(), value)) {
    throw Error("schema-violation", path + " must be of type " + t->get<std::string>());
  }
  if (value.is_number()) {
    if (auto m = schema.find("minimum"); m != schema.end() && value.get<double>() < m->get<double>()) {
      throw Error("schema-violation", path + " is below the minimum " + m->dump());
    }
    if (auto m = schema.find("maximum"); m != schema.end() && value.get<double>() > m->get<double>()) {
      throw Error("schema-violation", path + " is above the maximum " + m->dump());
    }
  }
  if (value.is_object()) {
    const json props = schema.value("properties", json::object());
    for (const auto& req : schema.value("required", json::array())) {
      if (!value.contains(req.get<std::string>())) {
        throw Error("schema-violation", path + "." + req.get<std::string>() + " is required");
      }
    }
    for (const auto& [key, v] : value.items()) {
      if (auto p = props.find(key); p != props.end()) {
        validate_against_schema(*p, v, path + "." + key);
      } else if (!schema.value("additionalProperties", true)) {
        throw Error("schema-violation", path + "." + key + " is not a known argument");
      }
    }
  }
  if (value.is_array()) {
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        validate_against_schema(*items, value[i], path + "[" + std::to_string(i) + "]");
      }
    }
  }
}

void to_json(json& j, const ToolCall& c) {
  j = json{{"name", c.name},     {"args", c.args},       {"result", c.result},
           {"ok", c.ok},         {"latency_ms", c.latency_ms}, {"origin", c.origin}};
}

json tool_error(const std::string& tool, const std::string& code, const std::string& message, json detail) {
  json e{{"tool", tool}, {"code", code}, {"message", message}};
  if (!detail.is_null()) e["detail"] = std::move(detail);
  return {{"error", std::move(e)}};
}

void record_tool_call(ToolContext& ctx, const ToolCall& call) {
  ctx.audit.append(ctx.session_id, ctx.turn_id, "tool_call", call);
}

json execute_tool(ToolCall& call, ToolContext& ctx) {
  const std::int64_t started = ctx.audit.now();
  const ToolSpec* spec = find_tool(call.name);
  if (spec == nullptr) {
    call.ok = false;
    call.result = tool_error(call.name, "unknown-tool", "no tool named '" + call.name + "'");
  } else {
    try {
      validate_against_schema(spec->parameters, call.args);
      call.result = dispatch(call, ctx);
      call.ok = true;
    } catch (const InvalidConfigError& e) {
      call.ok = false;
      call.result = tool_error(call.name, e.code(), e.what(), json(e.report()));
    } catch (const Error& e) {
      call.ok = false;
      call.result = tool_error(call.name, e.code(), e.what());
    }
  }
  call.latency_ms = std::max<std::int64_t>(0, (ctx.audit.now() - started) / 1000);
  record_tool_call(ctx, call);
  return call.result;
}

}  // namespace cellops
