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

#include <json.hpp>

#include "cellops/calculus.hpp"
#include "cellops/cell_config.hpp"

namespace cellops {

// Wire encoding of the configuration types. Field names match the struct
// members. Decoding is strict: every field is required, no unknown keys, and
// integers must be JSON integers. Failures throw Error("schema-violation").
void to_json(nlohmann::json& j, const CellConfig& c);
void from_json(const nlohmann::json& j, CellConfig& c);

void to_json(nlohmann::json& j, const ValidationIssue& issue);
void to_json(nlohmann::json& j, const ValidationReport& report);

void to_json(nlohmann::json& j, const PciConflict& c);

CellConfig parse_cell_config(const nlohmann::json& j);

/// Canonical byte form used for "same config" comparisons.
std::string canonical_bytes(const CellConfig& c);

}  // namespace cellops
