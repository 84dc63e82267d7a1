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

#include "cellops/config_diff.hpp"

#include <array>

#include "cellops/config_json.hpp"

namespace cellops {
namespace {

constexpr std::array<const char*, 9> kFieldOrder{"band", "earfcn_dl", "bandwidth_mhz", "pci", "tx_power_dbm",
                                                 "plmn", "tac", "cell_identity", "neighbor_pcis"};

}  // namespace

std::vector<ConfigDiffEntry> diff_configs(const CellConfig& old_config, const CellConfig& new_config) {
  return diff_configs(std::optional<CellConfig>(old_config), new_config);
}

std::vector<ConfigDiffEntry> diff_configs(const std::optional<CellConfig>& old_config, const CellConfig& new_config) {
  const nlohmann::json before = old_config ? nlohmann::json(*old_config) : nlohmann::json(nullptr);
  const nlohmann::json after = new_config;
  std::vector<ConfigDiffEntry> out;
  for (const char* field : kFieldOrder) {
    const nlohmann::json old_value = before.is_null() ? nlohmann::json(nullptr) : before.at(field);
    const nlohmann::json& new_value = after.at(field);
    if (old_value != new_value) out.push_back({field, old_value, new_value});
  }
  return out;
}

void to_json(nlohmann::json& j, const ConfigDiffEntry& e) {
  j = nlohmann::json{{"field", e.field}, {"old_value", e.old_value}, {"new_value", e.new_value}};
}

}  // namespace cellops
