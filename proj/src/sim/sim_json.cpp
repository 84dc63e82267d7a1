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

#include "cellops/sim_json.hpp"

#include "cellops/config_json.hpp"

namespace cellops {

void to_json(nlohmann::json& j, const KpiSample& s) {
  j = nlohmann::json{{"sim_time_s", s.sim_time_s},
                     {"lifecycle", to_string(s.lifecycle)},
                     {"connected_ues", s.connected_ues},
                     {"attach_attempts", s.attach_attempts},
                     {"attach_successes", s.attach_successes},
                     {"avg_rsrp_dbm", s.avg_rsrp_dbm},
                     {"dl_throughput_mbps", s.dl_throughput_mbps}};
}

void from_json(const nlohmann::json& j, KpiSample& s) {
  const auto lc = parse_lifecycle(j.at("lifecycle").get<std::string>());
  if (!lc) throw Error("schema-violation", "unknown lifecycle in KPI sample");
  s.sim_time_s = j.at("sim_time_s").get<double>();
  s.lifecycle = *lc;
  s.connected_ues = j.at("connected_ues").get<int>();
  s.attach_attempts = j.at("attach_attempts").get<int>();
  s.attach_successes = j.at("attach_successes").get<int>();
  s.avg_rsrp_dbm = j.at("avg_rsrp_dbm").get<double>();
  s.dl_throughput_mbps = j.at("dl_throughput_mbps").get<double>();
}

void to_json(nlohmann::json& j, const StationSnapshot& s) {
  j = nlohmann::json{{"lifecycle", to_string(s.lifecycle)}, {"sim_time_s", s.sim_time_s}};
  j["active_config"] = s.active_config ? nlohmann::json(*s.active_config) : nlohmann::json(nullptr);
  j["active_fault"] = s.active_fault ? nlohmann::json(to_string(*s.active_fault)) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const KpiSummary& s) {
  j = nlohmann::json{{"samples", s.samples},
                     {"attach_attempts", s.attach_attempts},
                     {"attach_successes", s.attach_successes},
                     {"attach_success_rate", s.attach_success_rate},
                     {"mean_throughput_mbps", s.mean_throughput_mbps},
                     {"mean_connected_ues", s.mean_connected_ues}};
  j["mean_rsrp_dbm"] = s.mean_rsrp_dbm ? nlohmann::json(*s.mean_rsrp_dbm) : nlohmann::json(nullptr);
}

}  // namespace cellops
