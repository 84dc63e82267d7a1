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

#include "cellops/kpi.hpp"

#include <algorithm>

namespace cellops {
namespace {

// Healthy mean RSRP sits near tx - 100 dBm (mean pathloss); a 20 dB PA loss
// pulls it to about tx - 120 dBm. Split the difference.
constexpr double kPaOverheatRsrpMarginDb = 110.0;

double relative_drop(double baseline, double observed) {
  if (baseline <= 0.0) return 0.0;
  return std::max(0.0, (baseline - observed) / baseline);
}

}  // namespace

KpiSummary summarize(std::span<const KpiSample> samples) {
  KpiSummary out;
  out.samples = static_cast<int>(samples.size());
  if (samples.empty()) return out;
  double throughput = 0.0;
  double connected = 0.0;
  double rsrp = 0.0;
  int rsrp_samples = 0;
  for (const auto& s : samples) {
    out.attach_attempts += s.attach_attempts;
    out.attach_successes += s.attach_successes;
    throughput += s.dl_throughput_mbps;
    connected += s.connected_ues;
    if (s.connected_ues > 0) {
      rsrp += s.avg_rsrp_dbm;
      ++rsrp_samples;
    }
  }
  if (out.attach_attempts > 0) {
    out.attach_success_rate = static_cast<double>(out.attach_successes) / out.attach_attempts;
  }
  out.mean_throughput_mbps = throughput / static_cast<double>(samples.size());
  out.mean_connected_ues = connected / static_cast<double>(samples.size());
  if (rsrp_samples > 0) out.mean_rsrp_dbm = rsrp / rsrp_samples;
  return out;
}

RegressionCheck compare_to_baseline(const KpiSummary& baseline, const KpiSummary& observed, double threshold) {
  RegressionCheck r;
  r.attach_rate_drop = relative_drop(baseline.attach_success_rate, observed.attach_success_rate);
  r.throughput_drop = relative_drop(baseline.mean_throughput_mbps, observed.mean_throughput_mbps);
  r.regressed = r.attach_rate_drop > threshold || r.throughput_drop > threshold;
  return r;
}

std::optional<FaultKind> classify_fault(std::span<const KpiSample> samples, double configured_tx_power_dbm) {
  if (samples.empty()) return std::nullopt;
  const bool backhaul = std::any_of(samples.begin(), samples.end(), [](const KpiSample& s) { return s.connected_ues > 0; }) &&
                        std::all_of(samples.begin(), samples.end(), [](const KpiSample& s) {
                          return s.connected_ues == 0 || s.dl_throughput_mbps == 0.0;
                        });
  if (backhaul) return FaultKind::kBackhaulDown;

  const auto summary = summarize(samples);
  if (summary.attach_attempts > 0 && summary.attach_successes == 0) return FaultKind::kSyncLoss;

  if (summary.mean_rsrp_dbm && *summary.mean_rsrp_dbm < configured_tx_power_dbm - kPaOverheatRsrpMarginDb) {
    return FaultKind::kPaOverheat;
  }
  return std::nullopt;
}

}  // namespace cellops
