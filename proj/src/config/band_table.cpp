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

#include "cellops/band_table.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <string>

#include "cellops/error.hpp"

#ifndef CELLOPS_DATA_DIR
#define CELLOPS_DATA_DIR "."
#endif

namespace cellops {

BandTable::BandTable(std::vector<BandEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.f_dl_low_tenths <= 0 || e.n_dl_max <= e.n_dl_min || e.n_dl_min != e.n_offs_dl) {
      throw Error("bad-band-table", "band " + std::to_string(e.band) + " violates table invariants");
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const BandEntry& a, const BandEntry& b) { return a.band < b.band; });
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const BandEntry& a, const BandEntry& b) { return a.band == b.band; });
  if (dup != entries_.end()) {
    throw Error("bad-band-table", "duplicate band " + std::to_string(dup->band));
  }
}

BandTable BandTable::from_json(const nlohmann::json& doc) {
  std::vector<BandEntry> rows;
  try {
    for (const auto& r : doc.at("bands")) {
      BandEntry e;
      e.band = r.at("band").get<int>();
      e.f_dl_low_tenths = r.at("f_dl_low_tenths_mhz").get<std::int64_t>();
      e.n_offs_dl = r.at("n_offs_dl").get<int>();
      e.n_dl_min = r.at("n_dl_min").get<int>();
      e.n_dl_max = r.at("n_dl_max").get<int>();
      rows.push_back(e);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error("bad-band-table", std::string("malformed band table: ") + ex.what());
  }
  return BandTable(std::move(rows));
}

BandTable BandTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read band table " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw Error("bad-band-table", path.string() + ": " + ex.what());
  }
  return from_json(doc);
}

BandTable BandTable::load_default() { return load(default_data_dir() / "data" / "bands.json"); }

const BandEntry* BandTable::find(int band) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), band,
                             [](const BandEntry& e, int b) { return e.band < b; });
  if (it == entries_.end() || it->band != band) return nullptr;
  return &*it;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("CELLOPS_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return CELLOPS_DATA_DIR;
}

}  // namespace cellops
