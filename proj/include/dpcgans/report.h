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


#ifndef DPCGANS_REPORT_H_
#define DPCGANS_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "dpcgans/data_table.h"
#include "dpcgans/privacy_metrics.h"
#include "dpcgans/utility_metrics.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

inline constexpr char kToolName[] = "dpcgans";
inline constexpr char kToolVersion[] = "0.1.0";

struct EvaluationOptions {
  double identity_threshold = 0.1;
  // Efficacy target; falls back to the schema's target column.
  std::optional<std::string> target;
  uint64_t seed = 0;
};

// Everything `evaluate` computes for one (real, synthetic) pair. The
// attribute baseline releases the real training split in place of the
// synthetic table, so the two attribute reports are directly comparable.
struct EvaluationReport {
  EvaluationOptions options;
  UtilityReport utility;
  IdentityReport identity;
  std::optional<AttributeReport> attribute;           // needs >= 4 columns
  std::optional<AttributeReport> attribute_baseline;
  AttributeOptions attribute_options;

  // Deterministic body; `timestamp` lands only under "metadata" and is
  // omitted when empty.
  nlohmann::json ToJson(const std::string& timestamp = "") const;
};

absl::StatusOr<EvaluationReport> Evaluate(const DataTable& real_train,
                                          const DataTable& real_test,
                                          const DataTable& synth,
                                          const EvaluationOptions& options);

}  // namespace dpcgans

#endif  // DPCGANS_REPORT_H_
