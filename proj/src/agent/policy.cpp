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

#include "cellops/policy.hpp"

#include <string>

#include "cellops/error.hpp"

namespace cellops {
namespace {

[[noreturn]] void reject(const std::string& key, const std::string& why) {
  throw Error("invalid-policy-override", "policy." + key + ": " + why);
}

int int_in(const nlohmann::json& v, const std::string& key, int lo, int hi) {
  if (!v.is_number_integer()) reject(key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) reject(key, "must be in " + std::to_string(lo) + ".." + std::to_string(hi));
  return static_cast<int>(x);
}

double number_in(const nlohmann::json& v, const std::string& key, double lo, double hi, bool open_low) {
  if (!v.is_number()) reject(key, "expected a number");
  const double x = v.get<double>();
  if ((open_low ? !(x > lo) : !(x >= lo)) || !(x <= hi)) {
    reject(key, "out of range");
  }
  return x;
}

}  // namespace

Policy apply_overrides(const Policy& base, const nlohmann::json& overrides) {
  Policy p = base;
  if (overrides.is_null()) return p;
  if (!overrides.is_object()) throw Error("invalid-policy-override", "policy overrides must be an object");
  for (const auto& [key, v] : overrides.items()) {
    if (key == "require_approval") {
      if (!v.is_boolean()) reject(key, "expected a boolean");
      p.require_approval = v.get<bool>();
    } else if (key == "max_iterations") {
      p.max_iterations = int_in(v, key, 1, 64);
    } else if (key == "regression_threshold") {
      p.regression_threshold = number_in(v, key, 0.0, 1.0, true);
    } else if (key == "max_retries") {
      p.max_retries = int_in(v, key, 0, 10);
    } else if (key == "retry_backoff_ms") {
      p.retry_backoff_ms = int_in(v, key, 0, 60000);
    } else if (key == "kb_top_k") {
      p.kb_top_k = int_in(v, key, 0, 20);
    } else if (key == "verify_settle_ticks") {
      p.verify_settle_ticks = int_in(v, key, 0, 60);
    } else if (key == "verify_samples") {
      p.verify_samples = int_in(v, key, 1, 60);
    } else if (key == "verify_dt_s") {
      p.verify_dt_s = number_in(v, key, 0.0, 3600.0, true);
    } else {
      reject(key, "unknown policy field");
    }
  }
  return p;
}

void to_json(nlohmann::json& j, const Policy& p) {
  j = nlohmann::json{{"require_approval", p.require_approval},
                     {"max_iterations", p.max_iterations},
                     {"regression_threshold", p.regression_threshold},
                     {"max_retries", p.max_retries},
                     {"retry_backoff_ms", p.retry_backoff_ms},
                     {"kb_top_k", p.kb_top_k},
                     {"verify_settle_ticks", p.verify_settle_ticks},
                     {"verify_samples", p.verify_samples},
                     {"verify_dt_s", p.verify_dt_s}};
}

}  // namespace cellops
