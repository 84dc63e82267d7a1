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
#include <span>
#include <vector>

#include "cellops/band_table.hpp"
#include "cellops/cell_config.hpp"

namespace cellops {

/// Downlink carrier frequency, exact on the 100 kHz raster.
struct Frequency {
  std::int64_t tenths_mhz = 0;

  double mhz() const { return static_cast<double>(tenths_mhz) / 10.0; }
  bool operator==(const Frequency&) const = default;
};

// F = f_dl_low + 0.1 * (earfcn - n_offs_dl). Throws "unknown-band" or
// "earfcn-out-of-range".
Frequency earfcn_to_freq(const BandTable& bands, int band, int earfcn);

// Throws "unknown-band", "off-raster" (more than 1e-6 MHz off the raster) or
// "earfcn-out-of-range".
int freq_to_earfcn(const BandTable& bands, int band, double freq_mhz);

struct PciParts {
  int group_id = 0;
  int sector_id = 0;
  bool operator==(const PciParts&) const = default;
};

PciParts pci_decompose(int pci);

enum class PciConflictKind { kCollision, kMod3 };

struct PciConflict {
  int neighbor = 0;
  PciConflictKind kind = PciConflictKind::kCollision;
  bool operator==(const PciConflict&) const = default;
};

/// One entry per conflicting neighbor, input order preserved. Throws
/// "pci-out-of-range" when any value falls outside 0..503.
std::vector<PciConflict> pci_conflicts(int pci, std::span<const int> neighbors);

/// Smallest PCI that neither collides with nor is mod-3 confusable with any
/// neighbor; falls back to the smallest non-colliding PCI when all three
/// sectors are taken.
std::optional<int> suggest_pci(std::span<const int> neighbors);

/// Legal bandwidths are 1.4, 3, 5, 10, 15 and 20 MHz. Throws "illegal-bandwidth".
int prb_for_bandwidth(double bandwidth_mhz);
bool is_legal_bandwidth(double bandwidth_mhz);

/// Never throws; every problem becomes an issue in the report.
ValidationReport validate_config(const CellConfig& config, const BandTable& bands);

const char* to_string(PciConflictKind kind);
const char* to_string(Severity severity);

}  // namespace cellops
