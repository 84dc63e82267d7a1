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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cellops {

inline constexpr int kMaxPci = 503;
inline constexpr double kMaxTxPowerDbm = 46.0;
inline constexpr double kHighPowerDbm = 40.0;
inline constexpr int kMaxTac = 65535;
inline constexpr std::int64_t kMaxCellIdentity = (std::int64_t{1} << 28) - 1;

/// Declarative configuration of one LTE cell. Fields are kept loosely typed
/// (any int/double) because validation must report on arbitrary input.
struct CellConfig {
  int band = 0;
  int earfcn_dl = 0;
  double bandwidth_mhz = 0.0;
  int pci = 0;
  double tx_power_dbm = 0.0;
  std::string plmn;
  std::int64_t tac = 0;
  std::int64_t cell_identity = 0;
  std::vector<int> neighbor_pcis;

  bool operator==(const CellConfig&) const = default;
};

enum class Severity { kError, kWarning };

struct ValidationIssue {
  Severity severity = Severity::kError;
  std::string field;
  std::string message;
  std::optional<std::string> suggested_fix;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  bool valid = true;
  std::vector<ValidationIssue> issues;

  bool operator==(const ValidationReport&) const = default;
};

}  // namespace cellops
