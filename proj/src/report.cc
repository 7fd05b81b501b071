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


#include "dpcgans/report.h"

#include "dpcgans/classifiers.h"
#include "dpcgans/json_util.h"

namespace dpcgans {

nlohmann::json EvaluationReport::ToJson(const std::string& timestamp) const {
  const std::optional<std::string>& target = options.target;
  nlohmann::json config = {
      {"identity_threshold", options.identity_threshold},
      {"target", target.has_value() ? nlohmann::json(*target)
                                    : nlohmann::json(kNotApplicable)},
      {"record_distance",
       "(hamming over categoricals + euclidean over min-max scaled "
       "continuous) / column count"},
      {"kl_bins", kKlBins},
      {"kl_smoothing", kKlSmoothing},
      {"chi_square_expected_floor", kChiSquareFloor},
      {"attribute", attribute_options.ToJson()},
      {"logistic_regression", LogisticRegressionOptions(options.seed).ToJson()},
      {"mlp", MlpOptions(options.seed).ToJson()}};
  nlohmann::json out = {
      {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
      {"config", std::move(config)},
      {"seeds", {{"seed", options.seed}, {"attribute", attribute_options.seed}}},
      {"utility", utility.ToJson()},
      {"identity_disclosure", identity.ToJson()},
  };
  if (attribute.has_value()) {
    out["attribute_disclosure"] = {
        {"synthetic", attribute->ToJson()},
        {"real_baseline", attribute_baseline->ToJson()}};
  } else {
    out["attribute_disclosure"] = {
        {"status", kNotApplicable},
        {"reason", "needs at least 4 columns"}};
  }
  if (!timestamp.empty()) out["metadata"] = {{"generated_at", timestamp}};
  return out;
}

absl::StatusOr<EvaluationReport> Evaluate(const DataTable& real_train,
                                          const DataTable& real_test,
                                          const DataTable& synth,
                                          const EvaluationOptions& options) {
  EvaluationReport report;
  report.options = options;
  if (!report.options.target.has_value()) {
    report.options.target = real_train.schema().target_column();
  }
  absl::StatusOr<UtilityReport> utility = EvaluateUtility(
      real_train, real_test, synth, report.options.target, options.seed);
  if (!utility.ok()) return utility.status();
  report.utility = *std::move(utility);

  absl::StatusOr<IdentityReport> identity = IdentityDisclosure(
      real_train, real_test, synth, options.identity_threshold);
  if (!identity.ok()) return identity.status();
  report.identity = *identity;

  report.attribute_options.seed = options.seed;
  if (real_train.num_columns() >= 4) {
    absl::StatusOr<AttributeReport> attr =
        AttributeDisclosure(real_test, synth, report.attribute_options);
    if (!attr.ok()) return attr.status();
    absl::StatusOr<AttributeReport> base =
        AttributeDisclosure(real_test, real_train, report.attribute_options);
    if (!base.ok()) return base.status();
    report.attribute = *std::move(attr);
    report.attribute_baseline = *std::move(base);
  }
  return report;
}

}  // namespace dpcgans
