//
// Copyright 2026 The dpcgans Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPCGANS_JSON_UTIL_H_
#define DPCGANS_JSON_UTIL_H_

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "nlohmann/json.hpp"

namespace dpcgans {

inline constexpr char kNotApplicable[] = "not-applicable";

// A score, or the string "not-applicable" when the metric does not apply.
inline nlohmann::json OptionalScore(const std::optional<double>& v) {
  if (v.has_value()) return *v;
  return kNotApplicable;
}

// JSON has no infinities; they travel as the strings "inf" and "-inf".
inline nlohmann::json RealToJson(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

// Inverse of RealToJson. Throws nlohmann::json::type_error on other strings.
inline double RealFromJson(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw nlohmann::json::type_error::create(302, "expected number or inf",
                                             &j);
  }
  return j.get<double>();
}

}  // namespace dpcgans

#endif  // DPCGANS_JSON_UTIL_H_
