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

// Statistical similarity between a real and a synthetic table.

#ifndef DPCGANS_UTILITY_METRICS_H_
#define DPCGANS_UTILITY_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/classifiers.h"
#include "dpcgans/data_table.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

inline constexpr int kKlBins = 20;
inline constexpr double kKlSmoothing = 1e-8;
inline constexpr double kChiSquareFloor = 1e-8;

// 1 / (1 + KL(P_real || P_synth)) with 1e-8 added to every cell before
// normalization.
double KlScoreFromCounts(std::span<const double> real,
                         std::span<const double> synth);
double KlScoreCategorical(std::span<const int> real, std::span<const int> synth,
                          int num_categories);
// 20 equal-width bins over the combined range; a single shared value gives 1.
double KlScoreContinuous(std::span<const double> real,
                         std::span<const double> synth, int bins = kKlBins);

// Chi-square goodness of fit of the synthetic counts against the real
// proportions (floored at 1e-8), over categories seen in either column.
double ChiSquareStatistic(std::span<const int> real, std::span<const int> synth,
                          int num_categories, int* degrees_of_freedom);
double ChiSquarePValue(std::span<const int> real, std::span<const int> synth,
                       int num_categories);

// Two-sample Kolmogorov-Smirnov statistic.
double KsStatistic(std::span<const double> a, std::span<const double> b);

// sqrt(chi2 / (n * min(r - 1, c - 1))) over the observed categories; 0 when
// either column has a single observed category.
double CramersV(std::span<const int> a, std::span<const int> b, int ra, int rb);

// Pearson correlation; 0 when either column has zero variance.
double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y);

struct ColumnScore {
  std::string column;
  double score = 0.0;
};

struct UtilityReport {
  std::vector<ColumnScore> kl_categorical;
  std::vector<ColumnScore> kl_continuous;
  std::vector<ColumnScore> cs;
  std::vector<ColumnScore> ks;
  std::optional<double> kl_categorical_score;  // mean over columns
  std::optional<double> kl_continuous_score;
  std::optional<double> cs_score;
  std::optional<double> ks_score;
  std::optional<double> cramers_v_diff;
  std::optional<double> pearson_diff;
  std::vector<EfficacyEntry> efficacy;
  std::string efficacy_note;  // why efficacy was skipped, if it was

  nlohmann::json ToJson() const;
};

// Dataset-level metrics; std::nullopt when the metric does not apply.
std::optional<double> MeanKlScore(const DataTable& real, const DataTable& synth,
                                  ColumnKind kind);
std::optional<double> CsScore(const DataTable& real, const DataTable& synth);
std::optional<double> KsScore(const DataTable& real, const DataTable& synth);
std::optional<double> CramersVDiff(const DataTable& real,
                                   const DataTable& synth);
std::optional<double> PearsonDiff(const DataTable& real,
                                  const DataTable& synth);

// All similarity metrics plus, when `target` names a categorical column,
// ML efficacy trained on `real_train` and `synth` and scored on `real_test`.
absl::StatusOr<UtilityReport> EvaluateUtility(
    const DataTable& real_train, const DataTable& real_test,
    const DataTable& synth, const std::optional<std::string>& target,
    uint64_t seed);

}  // namespace dpcgans

#endif  // DPCGANS_UTILITY_METRICS_H_
