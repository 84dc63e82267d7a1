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

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string_view>

#include "cellops/band_table.hpp"
#include "cellops/cell_config.hpp"
#include "cellops/error.hpp"

namespace cellops {

enum class Lifecycle { kStopped, kConfigured, kRunning, kFault };
enum class FaultKind { kPaOverheat, kSyncLoss, kBackhaulDown };

const char* to_string(Lifecycle lifecycle);
const char* to_string(FaultKind kind);
std::optional<Lifecycle> parse_lifecycle(std::string_view text);
std::optional<FaultKind> parse_fault_kind(std::string_view text);

/// The radio is on air (UEs can attach) in RUNNING and in FAULT; a fault
/// degrades service according to its signature instead of silencing it.
inline bool on_air(Lifecycle l) { return l == Lifecycle::kRunning || l == Lifecycle::kFault; }

struct KpiSample {
  double sim_time_s = 0.0;
  Lifecycle lifecycle = Lifecycle::kStopped;
  int connected_ues = 0;
  int attach_attempts = 0;
  int attach_successes = 0;
  double avg_rsrp_dbm = 0.0;
  double dl_throughput_mbps = 0.0;

  bool operator==(const KpiSample&) const = default;
};

struct StationSnapshot {
  Lifecycle lifecycle = Lifecycle::kStopped;
  std::optional<CellConfig> active_config;
  std::optional<FaultKind> active_fault;
  double sim_time_s = 0.0;

  bool operator==(const StationSnapshot&) const = default;
};

/// Raised by apply_config; carries the full report so callers can show it.
class InvalidConfigError : public Error {
 public:
  explicit InvalidConfigError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

namespace sim {
inline constexpr int kUePopulation = 20;
inline constexpr double kMinPathlossDb = 80.0;
inline constexpr double kMaxPathlossDb = 120.0;
inline constexpr double kAttachThresholdDbm = -110.0;
inline constexpr double kNoUeRsrpDbm = -140.0;
inline constexpr double kEfficiencyFloorDbm = -120.0;   // 0 bit/s/Hz
inline constexpr double kEfficiencyPerDb = 0.1;          // ramps to 5 bit/s/Hz at -70 dBm
inline constexpr double kMaxEfficiency = 5.0;
inline constexpr double kPrbBandwidthMhz = 0.18;
inline constexpr double kPaOverheatLossDb = 20.0;
inline constexpr double kReleaseProbability = 0.1;
inline constexpr int kSyncLossDecayTicks = 3;

double spectral_efficiency(double rsrp_dbm);
}  // namespace sim

/// Deterministic twin of a single-cell base station. A regular value type:
/// copying a Station forks its full state, RNG included.
///
/// Lifecycle edges:
///   STOPPED/CONFIGURED --apply_config--> CONFIGURED
///   CONFIGURED, or STOPPED with a retained config --start--> RUNNING
///   RUNNING --inject_fault--> FAULT
///   RUNNING/FAULT --stop--> STOPPED (config retained, fault cleared)
///   any --reset--> STOPPED (config and fault cleared)
/// Illegal edges throw Error("wrong-state").
class Station {
 public:
  Station(std::uint64_t seed, std::shared_ptr<const BandTable> bands);

  void apply_config(const CellConfig& config);
  void start();
  void stop();
  void reset();
  void inject_fault(FaultKind kind);
  /// Advances simulated time; throws Error("non-positive-dt") unless dt_s > 0.
  KpiSample tick(double dt_s);

  StationSnapshot snapshot() const;
  Lifecycle lifecycle() const { return lifecycle_; }
  std::uint64_t seed() const { return seed_; }
  const BandTable& bands() const { return *bands_; }

 private:
  double unit_draw();
  [[noreturn]] void wrong_state(const char* op) const;

  std::uint64_t seed_;
  std::shared_ptr<const BandTable> bands_;
  std::mt19937_64 rng_;
  Lifecycle lifecycle_ = Lifecycle::kStopped;
  std::optional<CellConfig> config_;
  std::optional<FaultKind> fault_;
  double sim_time_s_ = 0.0;
  std::array<double, sim::kUePopulation> pathloss_db_{};
  std::array<bool, sim::kUePopulation> connected_{};
  int sync_loss_drop_per_tick_ = 0;
};

}  // namespace cellops
