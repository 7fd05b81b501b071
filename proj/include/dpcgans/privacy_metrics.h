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

// Disclosure-risk audits of a synthetic table against the real one.
//
// Identity disclosure flags a real record as a training member when some
// synthetic record lies within distance D of it. Attribute disclosure measures
// how well an attacker holding the synthetic table and a few known columns of
// a real record can infer its remaining columns.

#ifndef DPCGANS_PRIVACY_METRICS_H_
#define DPCGANS_PRIVACY_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/data_table.h"
#include "dpcgans/kernels.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

// Min-max scaling of continuous columns, fitted on real data. Scaled values
// are clamped to [0, 1] so that record distances stay in [0, 1].
class DistanceSpace {
 public:
  static DistanceSpace Fit(const std::vector<const DataTable*>& real);

  double Scale(size_t column, double value) const;
  double range(size_t column) const { return range_[column]; }

  // Restricts the distance to `columns` (all columns when empty).
  RecordBlock Encode(const DataTable& data,
                     const std::vector<size_t>& columns = {}) const;

 private:
  TableSchema schema_;
  std::vector<double> min_;
  std::vector<double> range_;
};

// Hamming count over categorical columns plus the Euclidean norm of the
// scaled continuous difference, divided by the column count.
double RecordDistance(const DataTable& a, size_t i, const DataTable& b,
                      size_t j, const DistanceSpace& space);

struct IdentityReport {
  double threshold = 0.0;
  int64_t true_positives = 0;
  int64_t false_positives = 0;
  int64_t true_negatives = 0;
  int64_t false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;

  nlohmann::json ToJson() const;
};

// Train rows are members, holdout rows are not. Continuous columns are scaled
// with the ranges of train and holdout together.
absl::StatusOr<IdentityReport> IdentityDisclosure(const DataTable& train,
                                                  const DataTable& holdout,
                                                  const DataTable& synth,
                                                  double threshold,
                                                  bool parallel = true);

struct AttributeOptions {
  // Known-set sizes; a size >= columns - 1 means "all remaining columns".
  std::vector<int> known_set_sizes = {3, 6, -1};
  int repetitions = 3;
  int neighbors = 5;
  // A continuous prediction counts as correct within this fraction of the
  // real column range.
  double continuous_tolerance = 0.1;
  uint64_t seed = 0;

  nlohmann::json ToJson() const;
};

struct AttributeEntry {
  std::string label;  // "3", "6" or "rest"
  int known_size = 0;
  std::optional<double> categorical_score;
  std::optional<double> continuous_score;
};

struct AttributeReport {
  AttributeOptions options;
  std::vector<AttributeEntry> entries;
  std::optional<double> categorical_score;  // mean over entries
  std::optional<double> continuous_score;

  nlohmann::json ToJson() const;
};

// Scores are 1 - P_attr. Categorical targets use a k-NN vote over the
// synthetic rows; continuous targets use least squares fitted on them.
absl::StatusOr<AttributeReport> AttributeDisclosure(
    const DataTable& real, const DataTable& synth,
    const AttributeOptions& options = {}, bool parallel = true);

}  // namespace dpcgans

#endif  // DPCGANS_PRIVACY_METRICS_H_
