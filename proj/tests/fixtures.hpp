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

#include "cellops/cell_config.hpp"

namespace fixtures {

// Mirrors configs/band3_10mhz.json.
inline cellops::CellConfig band3_config() {
  cellops::CellConfig c;
  c.band = 3;
  c.earfcn_dl = 1575;
  c.bandwidth_mhz = 10.0;
  c.pci = 301;
  c.tx_power_dbm = 30.0;
  c.plmn = "00101";
  c.tac = 7;
  c.cell_identity = 105217;
  c.neighbor_pcis = {12, 152};
  return c;
}

}  // namespace fixtures
