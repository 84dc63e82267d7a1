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

#include "cellops/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cellops/error.hpp"

namespace cellops {
namespace {

constexpr double kRasterToleranceMhz = 1e-6;

struct BandwidthRow {
  double mhz;
  int prbs;
};

constexpr std::array<BandwidthRow, 6> kBandwidths{{
    {1.4, 6}, {3.0, 15}, {5.0, 25}, {10.0, 50}, {15.0, 75}, {20.0, 100}}};

const BandEntry& require_band(const BandTable& bands, int band) {
  const BandEntry* entry = bands.find(band);
  if (entry == nullptr) throw Error("unknown-band", "unknown band " + std::to_string(band));
  return *entry;
}

bool pci_in_range(int pci) { return pci >= 0 && pci <= kMaxPci; }

void require_pci(int pci) {
  if (!pci_in_range(pci)) throw Error("pci-out-of-range", "pci " + std::to_string(pci) + " outside 0..503");
}

bool plmn_well_formed(const std::string& plmn) {
  if (plmn.size() < 5 || plmn.size() > 6) return false;
  return std::all_of(plmn.begin(), plmn.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string format_number(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

Frequency earfcn_to_freq(const BandTable& bands, int band, int earfcn) {
  const BandEntry& e = require_band(bands, band);
  if (!e.contains(earfcn)) {
    throw Error("earfcn-out-of-range", "earfcn " + std::to_string(earfcn) + " outside band " +
                                           std::to_string(band) + " range " + std::to_string(e.n_dl_min) +
                                           ".." + std::to_string(e.n_dl_max));
  }
  return Frequency{e.f_dl_low_tenths + (earfcn - e.n_offs_dl)};
}

int freq_to_earfcn(const BandTable& bands, int band, double freq_mhz) {
  const BandEntry& e = require_band(bands, band);
  const double offset_mhz = freq_mhz - e.f_dl_low_mhz();
  const double steps = std::round(offset_mhz * 10.0);
  if (!std::isfinite(offset_mhz) || std::abs(offset_mhz - steps / 10.0) > kRasterToleranceMhz) {
    throw Error("off-raster", format_number(freq_mhz) + " MHz is not on the 100 kHz raster of band " +
                                  std::to_string(band));
  }
  const double earfcn = e.n_offs_dl + steps;
  if (earfcn < e.n_dl_min || earfcn > e.n_dl_max) {
    throw Error("earfcn-out-of-range",
                format_number(freq_mhz) + " MHz falls outside band " + std::to_string(band));
  }
  return static_cast<int>(earfcn);
}

PciParts pci_decompose(int pci) {
  require_pci(pci);
  return PciParts{pci / 3, pci % 3};
}

std::vector<PciConflict> pci_conflicts(int pci, std::span<const int> neighbors) {
  require_pci(pci);
  for (int n : neighbors) require_pci(n);
  std::vector<PciConflict> out;
  for (int n : neighbors) {
    if (n == pci) {
      out.push_back({n, PciConflictKind::kCollision});
    } else if (n % 3 == pci % 3) {
      out.push_back({n, PciConflictKind::kMod3});
    }
  }
  return out;
}

std::optional<int> suggest_pci(std::span<const int> neighbors) {
  std::array<bool, kMaxPci + 1> taken{};
  std::array<bool, 3> sector_taken{};
  for (int n : neighbors) {
    if (!pci_in_range(n)) continue;
    taken[n] = true;
    sector_taken[n % 3] = true;
  }
  std::optional<int> fallback;
  for (int p = 0; p <= kMaxPci; ++p) {
    if (taken[p]) continue;
    if (!sector_taken[p % 3]) return p;
    if (!fallback) fallback = p;
  }
  return fallback;
}

bool is_legal_bandwidth(double bandwidth_mhz) {
  return std::any_of(kBandwidths.begin(), kBandwidths.end(),
                     [&](const BandwidthRow& r) { return std::abs(r.mhz - bandwidth_mhz) < 1e-9; });
}

int prb_for_bandwidth(double bandwidth_mhz) {
  for (const auto& r : kBandwidths) {
    if (std::abs(r.mhz - bandwidth_mhz) < 1e-9) return r.prbs;
  }
  throw Error("illegal-bandwidth", format_number(bandwidth_mhz) + " MHz is not an LTE channel bandwidth");
}

ValidationReport validate_config(const CellConfig& config, const BandTable& bands) {
  ValidationReport report;
  auto error = [&](std::string field, std::string message, std::optional<std::string> fix = std::nullopt) {
    report.issues.push_back({Severity::kError, std::move(field), std::move(message), std::move(fix)});
  };
  auto warning = [&](std::string field, std::string message) {
    report.issues.push_back({Severity::kWarning, std::move(field), std::move(message), std::nullopt});
  };

  if (const BandEntry* band = bands.find(config.band); band == nullptr) {
    error("band", "unknown band " + std::to_string(config.band));
  } else if (!band->contains(config.earfcn_dl)) {
    const int clamped = std::clamp(config.earfcn_dl, band->n_dl_min, band->n_dl_max);
    error("earfcn_dl",
          "earfcn " + std::to_string(config.earfcn_dl) + " outside band " + std::to_string(config.band) +
              " range " + std::to_string(band->n_dl_min) + ".." + std::to_string(band->n_dl_max),
          "earfcn_dl=" + std::to_string(clamped));
  }

  if (!is_legal_bandwidth(config.bandwidth_mhz)) {
    error("bandwidth_mhz", format_number(config.bandwidth_mhz) + " MHz is not one of 1.4, 3, 5, 10, 15, 20");
  }

  if (!pci_in_range(config.pci)) {
    error("pci", "pci " + std::to_string(config.pci) + " outside 0..503");
  }

  if (!(config.tx_power_dbm >= 0.0 && config.tx_power_dbm <= kMaxTxPowerDbm)) {
    error("tx_power_dbm", "tx power " + format_number(config.tx_power_dbm) + " dBm outside 0..46");
  } else if (config.tx_power_dbm > kHighPowerDbm) {
    warning("tx_power_dbm", "high power: " + format_number(config.tx_power_dbm) + " dBm exceeds 40 dBm");
  }

  if (!plmn_well_formed(config.plmn)) {
    error("plmn", "plmn '" + config.plmn + "' must be 5 or 6 decimal digits (MCC then MNC)");
  }
  if (config.tac < 0 || config.tac > kMaxTac) {
    error("tac", "tac " + std::to_string(config.tac) + " outside 0..65535");
  }
  if (config.cell_identity < 0 || config.cell_identity > kMaxCellIdentity) {
    error("cell_identity", "cell identity " + std::to_string(config.cell_identity) + " outside 0..2^28-1");
  }

  bool neighbors_ok = true;
  for (std::size_t i = 0; i < config.neighbor_pcis.size(); ++i) {
    if (!pci_in_range(config.neighbor_pcis[i])) {
      neighbors_ok = false;
      error("neighbor_pcis[" + std::to_string(i) + "]",
            "neighbor pci " + std::to_string(config.neighbor_pcis[i]) + " outside 0..503");
    }
  }

  if (pci_in_range(config.pci) && neighbors_ok) {
    for (const auto& c : pci_conflicts(config.pci, config.neighbor_pcis)) {
      if (c.kind == PciConflictKind::kCollision) {
        auto fix = suggest_pci(config.neighbor_pcis);
        error("pci", "pci " + std::to_string(config.pci) + " collides with neighbor " + std::to_string(c.neighbor),
              fix ? std::optional<std::string>("pci=" + std::to_string(*fix)) : std::nullopt);
      } else {
        warning("pci", "pci " + std::to_string(config.pci) + " is mod-3 confusable with neighbor " +
                           std::to_string(c.neighbor));
      }
    }
  }

  report.valid = std::none_of(report.issues.begin(), report.issues.end(),
                              [](const ValidationIssue& i) { return i.severity == Severity::kError; });
  return report;
}

const char* to_string(PciConflictKind kind) {
  return kind == PciConflictKind::kCollision ? "collision" : "mod3";
}

const char* to_string(Severity severity) { return severity == Severity::kError ? "error" : "warning"; }

}  // namespace cellops
