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
#include <memory>
#include <mutex>
#include <vector>

#include "cellops/ring_buffer.hpp"
#include "cellops/station.hpp"

namespace cellops {

/// Single owner of the shared station. Every mutation is serialized through
/// one mutex; reads return copies. Each tick's sample lands in a bounded,
/// time-ordered KPI history.
class StationHost {
 public:
  static constexpr std::size_t kHistoryCapacity = 3600;
  static constexpr double kMaxWindowS = 86400.0;

  StationHost(std::uint64_t seed, std::shared_ptr<const BandTable> bands);

  void apply_config(const CellConfig& config);
  void start();
  void stop();
  void reset();
  void inject_fault(FaultKind kind);
  std::vector<KpiSample> tick(int count, double dt_s);

  StationSnapshot snapshot() const;
  const BandTable& bands() const { return *bands_; }

  /// Samples with sim_time in (latest - window_s, latest]. Throws
  /// Error("window-out-of-range") unless 0 < window_s <= kMaxWindowS.
  std::vector<KpiSample> kpis_in_window(double window_s) const;
  /// Up to `n` most recent samples taken while RUNNING, oldest first.
  std::vector<KpiSample> recent_running_samples(std::size_t n) const;
  /// Up to `n` most recent samples in any state, oldest first.
  std::vector<KpiSample> recent_samples(std::size_t n) const;
  std::size_t history_size() const;

 private:
  std::shared_ptr<const BandTable> bands_;
  mutable std::mutex mu_;
  Station station_;
  RingBuffer<KpiSample> history_{kHistoryCapacity};
};

}  // namespace cellops
