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

#include "cellops/station_host.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cellops {

StationHost::StationHost(std::uint64_t seed, std::shared_ptr<const BandTable> bands)
    : bands_(bands), station_(seed, std::move(bands)) {}

void StationHost::apply_config(const CellConfig& config) {
  std::lock_guard lock(mu_);
  station_.apply_config(config);
}

void StationHost::start() {
  std::lock_guard lock(mu_);
  station_.start();
}

void StationHost::stop() {
  std::lock_guard lock(mu_);
  station_.stop();
}

void StationHost::reset() {
  std::lock_guard lock(mu_);
  station_.reset();
}

void StationHost::inject_fault(FaultKind kind) {
  std::lock_guard lock(mu_);
  station_.inject_fault(kind);
}

std::vector<KpiSample> StationHost::tick(int count, double dt_s) {
  std::lock_guard lock(mu_);
  std::vector<KpiSample> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    out.push_back(station_.tick(dt_s));
    history_.push(out.back());
  }
  return out;
}

StationSnapshot StationHost::snapshot() const {
  std::lock_guard lock(mu_);
  return station_.snapshot();
}

std::vector<KpiSample> StationHost::kpis_in_window(double window_s) const {
  if (!(window_s > 0.0 && window_s <= kMaxWindowS)) {
    throw Error("window-out-of-range", "window_s must be in (0, 86400], got " + std::to_string(window_s));
  }
  std::lock_guard lock(mu_);
  std::vector<KpiSample> out;
  if (history_.empty()) return out;
  const double cutoff = history_.back().sim_time_s - window_s + 1e-9;
  std::size_t first = history_.size();
  while (first > 0 && history_[first - 1].sim_time_s > cutoff) --first;
  for (std::size_t i = first; i < history_.size(); ++i) out.push_back(history_[i]);
  return out;
}

std::vector<KpiSample> StationHost::recent_running_samples(std::size_t n) const {
  std::lock_guard lock(mu_);
  std::vector<KpiSample> out;
  for (std::size_t i = history_.size(); i > 0 && out.size() < n; --i) {
    if (history_[i - 1].lifecycle == Lifecycle::kRunning) out.push_back(history_[i - 1]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<KpiSample> StationHost::recent_samples(std::size_t n) const {
  std::lock_guard lock(mu_);
  std::vector<KpiSample> out;
  for (std::size_t i = n < history_.size() ? history_.size() - n : 0; i < history_.size(); ++i) {
    out.push_back(history_[i]);
  }
  return out;
}

std::size_t StationHost::history_size() const {
  std::lock_guard lock(mu_);
  return history_.size();
}

}  // namespace cellops
