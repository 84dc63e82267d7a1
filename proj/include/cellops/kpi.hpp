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
#include <span>

#include "cellops/station.hpp"

namespace cellops {

struct KpiSummary {
  int samples = 0;
  int attach_attempts = 0;
  int attach_successes = 0;
  double attach_success_rate = 0.0;  // successes / attempts, 0 when nothing was attempted
  double mean_throughput_mbps = 0.0;
  double mean_connected_ues = 0.0;
  std::optional<double> mean_rsrp_dbm;  // over samples with at least one connected UE

  bool operator==(const KpiSummary&) const = default;
};

KpiSummary summarize(std::span<const KpiSample> samples);

struct RegressionCheck {
  bool regressed = false;
  double attach_rate_drop = 0.0;   // relative, 0 when the baseline rate is 0
  double throughput_drop = 0.0;    // relative, 0 when the baseline throughput is 0
};

/// A metric regresses when it falls by more than `threshold` relative to a
/// non-zero baseline.
RegressionCheck compare_to_baseline(const KpiSummary& baseline, const KpiSummary& observed, double threshold);

/// Threshold classifier over post-fault samples. Uses the three signature
/// KPIs: throughput with UEs connected (backhaul), attach successes (sync) and
/// mean RSRP relative to the configured power (PA). Returns nullopt for a
/// healthy-looking window.
std::optional<FaultKind> classify_fault(std::span<const KpiSample> samples, double configured_tx_power_dbm);

}  // namespace cellops
