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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellops/cell_config.hpp"

namespace cellops {

struct ConfigDiffEntry {
  std::string field;
  nlohmann::json old_value;
  nlohmann::json new_value;
  bool operator==(const ConfigDiffEntry&) const = default;
};

/// One entry per differing field in canonical field order (band, earfcn_dl,
/// bandwidth_mhz, pci, tx_power_dbm, plmn, tac, cell_identity,
/// neighbor_pcis). Empty iff the configs are equal.
std::vector<ConfigDiffEntry> diff_configs(const CellConfig& old_config, const CellConfig& new_config);
/// A missing old config diffs every field against null.
std::vector<ConfigDiffEntry> diff_configs(const std::optional<CellConfig>& old_config, const CellConfig& new_config);

void to_json(nlohmann::json& j, const ConfigDiffEntry& e);

}  // namespace cellops
