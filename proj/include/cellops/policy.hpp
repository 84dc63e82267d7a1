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

#include <json.hpp>

namespace cellops {

/// Knobs of the agent loop. Defaults are the service defaults; sessions may
/// override any subset.
struct Policy {
  bool require_approval = true;
  int max_iterations = 8;
  double regression_threshold = 0.5;  // relative drop that counts as a regression
  int max_retries = 2;
  int retry_backoff_ms = 200;         // doubled on each retry
  int kb_top_k = 3;
  int verify_settle_ticks = 1;
  int verify_samples = 5;
  double verify_dt_s = 1.0;

  bool operator==(const Policy&) const = default;
};

/// Merges `overrides` (a JSON object with a subset of the fields above) into
/// `base`. Unknown keys, wrong types and out-of-range values throw
/// Error("invalid-policy-override").
Policy apply_overrides(const Policy& base, const nlohmann::json& overrides);

void to_json(nlohmann::json& j, const Policy& p);

}  // namespace cellops
