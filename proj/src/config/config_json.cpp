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

#include "cellops/config_json.hpp"

#include <limits>
#include <set>
#include <string>

#include "cellops/error.hpp"

namespace cellops {
namespace {

const std::set<std::string>& config_fields() {
  static const std::set<std::string> fields{"band", "earfcn_dl", "bandwidth_mhz", "pci", "tx_power_dbm",
                                            "plmn", "tac", "cell_identity", "neighbor_pcis"};
  return fields;
}

[[noreturn]] void violation(const std::string& what) { throw Error("schema-violation", "config: " + what); }

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) violation(std::string("missing field '") + name + "'");
  return *it;
}

template <typename Int>
Int integer(const nlohmann::json& v, const std::string& name) {
  if (!v.is_number_integer()) violation("'" + name + "' must be an integer");
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) violation("'" + name + "' overflows");
    return static_cast<Int>(u);
  }
  auto s = v.get<std::int64_t>();
  if (s < std::numeric_limits<Int>::min() || s > std::numeric_limits<Int>::max()) {
    violation("'" + name + "' overflows");
  }
  return static_cast<Int>(s);
}

double number(const nlohmann::json& v, const std::string& name) {
  if (!v.is_number()) violation("'" + name + "' must be a number");
  return v.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const CellConfig& c) {
  j = nlohmann::json{{"band", c.band},
                     {"earfcn_dl", c.earfcn_dl},
                     {"bandwidth_mhz", c.bandwidth_mhz},
                     {"pci", c.pci},
                     {"tx_power_dbm", c.tx_power_dbm},
                     {"plmn", c.plmn},
                     {"tac", c.tac},
                     {"cell_identity", c.cell_identity},
                     {"neighbor_pcis", c.neighbor_pcis}};
}

void from_json(const nlohmann::json& j, CellConfig& c) {
  if (!j.is_object()) violation("expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!config_fields().contains(key)) violation("unknown field '" + key + "'");
  }
  c.band = integer<int>(field(j, "band"), "band");
  c.earfcn_dl = integer<int>(field(j, "earfcn_dl"), "earfcn_dl");
  c.bandwidth_mhz = number(field(j, "bandwidth_mhz"), "bandwidth_mhz");
  c.pci = integer<int>(field(j, "pci"), "pci");
  c.tx_power_dbm = number(field(j, "tx_power_dbm"), "tx_power_dbm");
  const auto& plmn = field(j, "plmn");
  if (!plmn.is_string()) violation("'plmn' must be a string");
  c.plmn = plmn.get<std::string>();
  c.tac = integer<std::int64_t>(field(j, "tac"), "tac");
  c.cell_identity = integer<std::int64_t>(field(j, "cell_identity"), "cell_identity");
  const auto& neighbors = field(j, "neighbor_pcis");
  if (!neighbors.is_array()) violation("'neighbor_pcis' must be an array");
  c.neighbor_pcis.clear();
  for (const auto& n : neighbors) c.neighbor_pcis.push_back(integer<int>(n, "neighbor_pcis[]"));
}

void to_json(nlohmann::json& j, const ValidationIssue& issue) {
  j = nlohmann::json{{"severity", to_string(issue.severity)}, {"field", issue.field}, {"message", issue.message}};
  j["suggested_fix"] = issue.suggested_fix ? nlohmann::json(*issue.suggested_fix) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const ValidationReport& report) {
  j = nlohmann::json{{"valid", report.valid}, {"issues", report.issues}};
}

void to_json(nlohmann::json& j, const PciConflict& c) {
  j = nlohmann::json{{"neighbor", c.neighbor}, {"kind", to_string(c.kind)}};
}

CellConfig parse_cell_config(const nlohmann::json& j) { return j.get<CellConfig>(); }

std::string canonical_bytes(const CellConfig& c) { return nlohmann::json(c).dump(); }

}  // namespace cellops
