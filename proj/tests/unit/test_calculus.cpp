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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cellops/calculus.hpp"
#include "cellops/config_json.hpp"
#include "cellops/error.hpp"
#include "fixtures.hpp"

using namespace cellops;

namespace {

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

// Brute-force conflict oracle: tests equality and congruence directly.
std::vector<PciConflict> conflicts_oracle(int pci, const std::vector<int>& neighbors) {
  std::vector<PciConflict> out;
  for (int n : neighbors) {
    if (n == pci) {
      out.push_back({n, PciConflictKind::kCollision});
    } else if ((n - pci) % 3 == 0) {
      out.push_back({n, PciConflictKind::kMod3});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("earfcn_to_freq on the shipped band table") {
  const auto bands = BandTable::load_default();
  CHECK(earfcn_to_freq(bands, 3, 1200).tenths_mhz == 18050);
  // 1805.0 + 0.1 * (1575 - 1200) = 1842.5
  CHECK(earfcn_to_freq(bands, 3, 1575).tenths_mhz == 18425);
  CHECK(earfcn_to_freq(bands, 3, 1575).mhz() == doctest::Approx(1842.5));
  // 2620.0 + 0.1 * (3100 - 2750) = 2655.0
  CHECK(earfcn_to_freq(bands, 7, 3100).tenths_mhz == 26550);
  CHECK(error_code([&] { earfcn_to_freq(bands, 3, 99); }) == "earfcn-out-of-range");
  CHECK(error_code([&] { earfcn_to_freq(bands, 3, 1950); }) == "earfcn-out-of-range");
  CHECK(error_code([&] { earfcn_to_freq(bands, 2, 700); }) == "unknown-band");
}

TEST_CASE("freq_to_earfcn inverts the raster") {
  const auto bands = BandTable::load_default();
  CHECK(freq_to_earfcn(bands, 3, 1805.0) == 1200);
  CHECK(freq_to_earfcn(bands, 3, 1842.5) == 1575);
  CHECK(freq_to_earfcn(bands, 3, 1842.5000004) == 1575);
  CHECK(error_code([&] { freq_to_earfcn(bands, 3, 1842.53); }) == "off-raster");
  CHECK(error_code([&] { freq_to_earfcn(bands, 3, 1700.0); }) == "earfcn-out-of-range");
  CHECK(error_code([&] { freq_to_earfcn(bands, 99, 1805.0); }) == "unknown-band");
}

TEST_CASE("earfcn round trip is exact over every fixture band") {
  const auto bands = BandTable::load_default();
  int checked = 0;
  for (const auto& band : bands.entries()) {
    for (int n = band.n_dl_min; n <= band.n_dl_max; ++n) {
      const double mhz = earfcn_to_freq(bands, band.band, n).mhz();
      REQUIRE(freq_to_earfcn(bands, band.band, mhz) == n);
      ++checked;
    }
  }
  CHECK(checked == 600 + 750 + 700 + 300);
}

TEST_CASE("band table rejects rows that break its invariants") {
  nlohmann::json bad = {{"bands", {{{"band", 9}, {"f_dl_low_tenths_mhz", 100}, {"n_offs_dl", 5}, {"n_dl_min", 4}, {"n_dl_max", 10}}}}};
  CHECK(error_code([&] { BandTable::from_json(bad); }) == "bad-band-table");
  bad["bands"][0]["n_dl_min"] = 5;
  bad["bands"][0]["n_dl_max"] = 5;
  CHECK(error_code([&] { BandTable::from_json(bad); }) == "bad-band-table");
  CHECK(error_code([&] { BandTable::from_json(nlohmann::json::object()); }) == "bad-band-table");
}

TEST_CASE("pci_decompose") {
  CHECK(pci_decompose(0) == PciParts{0, 0});
  CHECK(pci_decompose(503) == PciParts{167, 2});
  CHECK(pci_decompose(301) == PciParts{100, 1});
  CHECK(error_code([] { pci_decompose(504); }) == "pci-out-of-range");
  CHECK(error_code([] { pci_decompose(-1); }) == "pci-out-of-range");
  for (int pci = 0; pci <= kMaxPci; ++pci) {
    auto p = pci_decompose(pci);
    REQUIRE(3 * p.group_id + p.sector_id == pci);
    REQUIRE(p.sector_id >= 0);
    REQUIRE(p.sector_id <= 2);
  }
}

TEST_CASE("pci_conflicts") {
  using K = PciConflictKind;
  std::vector<int> one{100};
  CHECK(pci_conflicts(100, one) == std::vector<PciConflict>{{100, K::kCollision}});
  std::vector<int> two{103, 205};
  // 100, 103 and 205 are all congruent to 1 mod 3.
  CHECK(conflicts_oracle(100, two) == std::vector<PciConflict>{{103, K::kMod3}, {205, K::kMod3}});
  CHECK(pci_conflicts(100, two) == conflicts_oracle(100, two));
  CHECK(pci_conflicts(100, {}).empty());
  std::vector<int> bad{504};
  CHECK(error_code([&] { pci_conflicts(100, bad); }) == "pci-out-of-range");
}

TEST_CASE("pci_conflicts matches the brute-force oracle on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pci_dist(0, kMaxPci);
  std::uniform_int_distribution<int> len_dist(0, 12);
  for (int i = 0; i < 2000; ++i) {
    const int pci = pci_dist(rng);
    std::vector<int> neighbors(len_dist(rng));
    for (auto& n : neighbors) n = (rng() % 4 == 0) ? pci : pci_dist(rng);
    REQUIRE(pci_conflicts(pci, neighbors) == conflicts_oracle(pci, neighbors));
  }
}

TEST_CASE("suggest_pci") {
  std::vector<int> n{301};
  CHECK(suggest_pci(n) == 0);
  std::vector<int> all_sectors{0, 1, 2};
  CHECK(suggest_pci(all_sectors) == 3);
  CHECK(suggest_pci({}) == 0);
}

TEST_CASE("prb_for_bandwidth") {
  CHECK(prb_for_bandwidth(10) == 50);
  CHECK(prb_for_bandwidth(1.4) == 6);
  CHECK(prb_for_bandwidth(20) == 100);
  CHECK(prb_for_bandwidth(3) == 15);
  CHECK(prb_for_bandwidth(5) == 25);
  CHECK(prb_for_bandwidth(15) == 75);
  CHECK(error_code([] { prb_for_bandwidth(7); }) == "illegal-bandwidth");
  for (double bw : {3.0, 5.0, 10.0, 15.0, 20.0}) {
    CHECK(prb_for_bandwidth(bw) == static_cast<int>(std::floor(bw / 0.2 + 1e-9)));
  }
}

TEST_CASE("validate_config on the band-3 fixture") {
  const auto bands = BandTable::load_default();
  const CellConfig good = fixtures::band3_config();

  SUBCASE("well-formed config is clean") {
    auto r = validate_config(good, bands);
    CHECK(r.valid);
    CHECK(r.issues.empty());
  }
  SUBCASE("pci 504 is a range error") {
    auto cfg = good;
    cfg.pci = 504;
    auto r = validate_config(cfg, bands);
    CHECK_FALSE(r.valid);
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].field == "pci");
    CHECK(r.issues[0].severity == Severity::kError);
  }
  SUBCASE("neighbor collision suggests the smallest clean pci") {
    auto cfg = good;
    cfg.neighbor_pcis = {301};
    auto r = validate_config(cfg, bands);
    CHECK_FALSE(r.valid);
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].field == "pci");
    // brute force: smallest p with p != 301 and p % 3 != 301 % 3
    int expected = -1;
    for (int p = 0; p <= kMaxPci && expected < 0; ++p) {
      if (p != 301 && p % 3 != 301 % 3) expected = p;
    }
    CHECK(r.issues[0].suggested_fix == "pci=" + std::to_string(expected));
  }
  SUBCASE("mod3 neighbor is only a warning") {
    auto cfg = good;
    cfg.neighbor_pcis = {304};
    auto r = validate_config(cfg, bands);
    CHECK(r.valid);
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].severity == Severity::kWarning);
  }
  SUBCASE("out-of-band earfcn is clamped in the fix") {
    auto cfg = good;
    cfg.earfcn_dl = 2100;
    auto r = validate_config(cfg, bands);
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].field == "earfcn_dl");
    CHECK(r.issues[0].suggested_fix == "earfcn_dl=1949");
  }
  SUBCASE("high power warns, overpower errors") {
    auto cfg = good;
    cfg.tx_power_dbm = 43;
    auto r = validate_config(cfg, bands);
    CHECK(r.valid);
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].message.find("high power") != std::string::npos);
    cfg.tx_power_dbm = 47;
    CHECK_FALSE(validate_config(cfg, bands).valid);
    cfg.tx_power_dbm = std::nan("");
    CHECK_FALSE(validate_config(cfg, bands).valid);
  }
  SUBCASE("garbage in every field is reported, never thrown") {
    CellConfig cfg;
    cfg.band = 42;
    cfg.bandwidth_mhz = 7;
    cfg.pci = -5;
    cfg.tx_power_dbm = -1;
    cfg.plmn = "12a45";
    cfg.tac = 70000;
    cfg.cell_identity = -1;
    cfg.neighbor_pcis = {999};
    auto r = validate_config(cfg, bands);
    CHECK_FALSE(r.valid);
    std::vector<std::string> fields;
    for (const auto& i : r.issues) fields.push_back(i.field);
    CHECK(fields == std::vector<std::string>{"band", "bandwidth_mhz", "pci", "tx_power_dbm", "plmn", "tac",
                                             "cell_identity", "neighbor_pcis[0]"});
    CHECK(validate_config(cfg, bands) == r);
  }
}

TEST_CASE("config wire decoding is strict") {
  auto j = nlohmann::json(fixtures::band3_config());
  CHECK(parse_cell_config(j) == fixtures::band3_config());
  auto missing = j;
  missing.erase("pci");
  CHECK(error_code([&] { parse_cell_config(missing); }) == "schema-violation");
  auto extra = j;
  extra["mode"] = "tdd";
  CHECK(error_code([&] { parse_cell_config(extra); }) == "schema-violation");
  auto wrong = j;
  wrong["pci"] = 3.5;
  CHECK(error_code([&] { parse_cell_config(wrong); }) == "schema-violation");
  wrong["pci"] = "301";
  CHECK(error_code([&] { parse_cell_config(wrong); }) == "schema-violation");
}
