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

#include "cellops/station.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cellops/calculus.hpp"

namespace cellops {

const char* to_string(Lifecycle lifecycle) {
  switch (lifecycle) {
    case Lifecycle::kStopped: return "STOPPED";
    case Lifecycle::kConfigured: return "CONFIGURED";
    case Lifecycle::kRunning: return "RUNNING";
    case Lifecycle::kFault: return "FAULT";
  }
  return "?";
}

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::kPaOverheat: return "PA_OVERHEAT";
    case FaultKind::kSyncLoss: return "SYNC_LOSS";
    case FaultKind::kBackhaulDown: return "BACKHAUL_DOWN";
  }
  return "?";
}

std::optional<Lifecycle> parse_lifecycle(std::string_view text) {
  for (auto l : {Lifecycle::kStopped, Lifecycle::kConfigured, Lifecycle::kRunning, Lifecycle::kFault}) {
    if (text == to_string(l)) return l;
  }
  return std::nullopt;
}

std::optional<FaultKind> parse_fault_kind(std::string_view text) {
  for (auto k : {FaultKind::kPaOverheat, FaultKind::kSyncLoss, FaultKind::kBackhaulDown}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

InvalidConfigError::InvalidConfigError(ValidationReport report)
    : Error("invalid-config", "configuration failed validation"), report_(std::move(report)) {}

double sim::spectral_efficiency(double rsrp_dbm) {
  return std::clamp((rsrp_dbm - kEfficiencyFloorDbm) * kEfficiencyPerDb, 0.0, kMaxEfficiency);
}

Station::Station(std::uint64_t seed, std::shared_ptr<const BandTable> bands)
    : seed_(seed), bands_(std::move(bands)), rng_(seed) {
  for (auto& pl : pathloss_db_) {
    pl = sim::kMinPathlossDb + (sim::kMaxPathlossDb - sim::kMinPathlossDb) * unit_draw();
  }
}

// Uniform in [0, 1) from the top 53 bits; std::uniform_real_distribution is
// implementation-defined and would break cross-platform replay.
double Station::unit_draw() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

void Station::wrong_state(const char* op) const {
  throw Error("wrong-state", std::string(op) + " is not allowed in state " + to_string(lifecycle_));
}

void Station::apply_config(const CellConfig& config) {
  if (lifecycle_ != Lifecycle::kStopped && lifecycle_ != Lifecycle::kConfigured) wrong_state("apply_config");
  auto report = validate_config(config, *bands_);
  if (!report.valid) throw InvalidConfigError(std::move(report));
  config_ = config;
  lifecycle_ = Lifecycle::kConfigured;
}

void Station::start() {
  const bool startable = lifecycle_ == Lifecycle::kConfigured || (lifecycle_ == Lifecycle::kStopped && config_);
  if (!startable) wrong_state("start");
  lifecycle_ = Lifecycle::kRunning;
}

void Station::stop() {
  if (!on_air(lifecycle_)) wrong_state("stop");
  lifecycle_ = Lifecycle::kStopped;
  fault_.reset();
  connected_.fill(false);
}

void Station::reset() {
  lifecycle_ = Lifecycle::kStopped;
  config_.reset();
  fault_.reset();
  connected_.fill(false);
}

void Station::inject_fault(FaultKind kind) {
  if (lifecycle_ != Lifecycle::kRunning) wrong_state("inject_fault");
  lifecycle_ = Lifecycle::kFault;
  fault_ = kind;
  if (kind == FaultKind::kSyncLoss) {
    const auto n = std::count(connected_.begin(), connected_.end(), true);
    sync_loss_drop_per_tick_ =
        std::max<int>(1, static_cast<int>((n + sim::kSyncLossDecayTicks - 1) / sim::kSyncLossDecayTicks));
  }
}

KpiSample Station::tick(double dt_s) {
  if (!(dt_s > 0.0) || !std::isfinite(dt_s)) {
    throw Error("non-positive-dt", "tick needs dt_s > 0, got " + std::to_string(dt_s));
  }
  sim_time_s_ += dt_s;

  KpiSample s;
  s.sim_time_s = sim_time_s_;
  s.lifecycle = lifecycle_;
  s.avg_rsrp_dbm = sim::kNoUeRsrpDbm;
  if (!on_air(lifecycle_)) {
    connected_.fill(false);
    return s;
  }

  double tx_dbm = config_->tx_power_dbm;
  if (fault_ == FaultKind::kPaOverheat) tx_dbm -= sim::kPaOverheatLossDb;
  std::array<double, sim::kUePopulation> rsrp{};
  for (int i = 0; i < sim::kUePopulation; ++i) rsrp[i] = tx_dbm - pathloss_db_[i];

  // Releases: session churn, coverage loss, then the sync-loss decay.
  for (int i = 0; i < sim::kUePopulation; ++i) {
    if (!connected_[i]) continue;
    const bool churn = unit_draw() < sim::kReleaseProbability;
    if (churn || rsrp[i] < sim::kAttachThresholdDbm) connected_[i] = false;
  }
  if (fault_ == FaultKind::kSyncLoss) {
    int to_drop = sync_loss_drop_per_tick_;
    for (int i = 0; i < sim::kUePopulation && to_drop > 0; ++i) {
      if (connected_[i]) {
        connected_[i] = false;
        --to_drop;
      }
    }
  }

  // Every idle UE makes one attach attempt per tick.
  for (int i = 0; i < sim::kUePopulation; ++i) {
    if (connected_[i]) continue;
    ++s.attach_attempts;
    if (rsrp[i] >= sim::kAttachThresholdDbm && fault_ != FaultKind::kSyncLoss) {
      connected_[i] = true;
      ++s.attach_successes;
    }
  }

  double rsrp_sum = 0.0;
  double efficiency_sum = 0.0;
  for (int i = 0; i < sim::kUePopulation; ++i) {
    if (!connected_[i]) continue;
    ++s.connected_ues;
    rsrp_sum += rsrp[i];
    efficiency_sum += sim::spectral_efficiency(rsrp[i]);
  }
  if (s.connected_ues > 0) {
    s.avg_rsrp_dbm = rsrp_sum / s.connected_ues;
    if (fault_ != FaultKind::kBackhaulDown) {
      const double prbs = prb_for_bandwidth(config_->bandwidth_mhz);
      s.dl_throughput_mbps = sim::kPrbBandwidthMhz * prbs / s.connected_ues * efficiency_sum;
    }
  }
  return s;
}

StationSnapshot Station::snapshot() const { return StationSnapshot{lifecycle_, config_, fault_, sim_time_s_}; }

}  // namespace cellops
