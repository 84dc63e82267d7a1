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
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace cellops {

/// One downlink row of the LTE band table. Frequencies are stored in integer
/// tenths of MHz so the 100 kHz channel raster stays exact.
struct BandEntry {
  int band = 0;
  std::int64_t f_dl_low_tenths = 0;
  int n_offs_dl = 0;
  int n_dl_min = 0;
  int n_dl_max = 0;

  double f_dl_low_mhz() const { return static_cast<double>(f_dl_low_tenths) / 10.0; }
  bool contains(int earfcn) const { return earfcn >= n_dl_min && earfcn <= n_dl_max; }
};

class BandTable {
 public:
  BandTable() = default;
  explicit BandTable(std::vector<BandEntry> entries);

  /// Parses `{"bands": [{band, f_dl_low_tenths_mhz, n_offs_dl, n_dl_min, n_dl_max}, ...]}`.
  /// Rows violating the table invariants are rejected with "bad-band-table".
  static BandTable from_json(const nlohmann::json& doc);
  static BandTable load(const std::filesystem::path& path);
  /// The fixture shipped under data/bands.json.
  static BandTable load_default();

  const BandEntry* find(int band) const;
  std::span<const BandEntry> entries() const { return entries_; }

 private:
  std::vector<BandEntry> entries_;
};

std::filesystem::path default_data_dir();

}  // namespace cellops
