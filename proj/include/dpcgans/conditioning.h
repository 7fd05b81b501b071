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

#ifndef DPCGANS_CONDITIONING_H_
#define DPCGANS_CONDITIONING_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/data_table.h"
#include "dpcgans/matrix.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

// Concatenation of the one-hot blocks of every categorical column.
struct ConditionLayout {
  std::vector<size_t> columns;  // schema indices of categorical columns
  std::vector<size_t> offsets;
  std::vector<size_t> widths;
  size_t width = 0;
};

// Two active categories, one per selected categorical column.
struct ConditionVector {
  size_t pair = 0;      // index into PairFrequencyTable::pairs()
  size_t combo = 0;     // index into that pair's observed combinations
  size_t column_a = 0;  // schema column index
  size_t column_b = 0;
  int category_a = 0;
  int category_b = 0;

  // Writes the one-hot mask into `out` (length layout.width), zeroing it.
  void Fill(const ConditionLayout& layout, std::span<double> out) const;
  std::vector<double> Bits(const ConditionLayout& layout) const;
};

struct ComboCount {
  int category_a = 0;
  int category_b = 0;
  int64_t count = 0;
};

struct ColumnPair {
  size_t column_a = 0;  // schema indices, column_a < column_b
  size_t column_b = 0;
  std::vector<ComboCount> combos;  // observed combinations only
};

// Joint counts for every unordered pair of categorical columns. Tables built
// from fewer than two categorical columns are disabled: they have no pairs
// and training falls back to an unconditional model.
class PairFrequencyTable {
 public:
  PairFrequencyTable() = default;

  static PairFrequencyTable Build(const DataTable& data);

  bool enabled() const { return !pairs_.empty(); }
  const ConditionLayout& layout() const { return layout_; }
  const std::vector<ColumnPair>& pairs() const { return pairs_; }
  int64_t num_rows() const { return num_rows_; }

  // Training-time sampling: pair uniform, combination with probability
  // proportional to log(1 + count).
  ConditionVector SampleTraining(std::mt19937_64& rng) const;
  // Generation-time sampling: pair uniform, combination proportional to its
  // raw count.
  ConditionVector SampleGeneration(std::mt19937_64& rng) const;

  // Normalized combination probabilities of pair `p` under each scheme.
  std::vector<double> TrainingProbabilities(size_t p) const;
  std::vector<double> GenerationProbabilities(size_t p) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<PairFrequencyTable> FromJson(
      const nlohmann::json& json, const TableSchema& schema);

 private:
  void BuildSamplers();
  ConditionVector Sample(const std::vector<std::vector<double>>& cdfs,
                         std::mt19937_64& rng) const;

  ConditionLayout layout_;
  std::vector<ColumnPair> pairs_;
  int64_t num_rows_ = 0;
  std::vector<std::vector<double>> log_cdf_;
  std::vector<std::vector<double>> raw_cdf_;
};

ConditionLayout MakeConditionLayout(const TableSchema& schema);

// Free-function forms of the table operations.
PairFrequencyTable BuildFrequencyTable(const DataTable& data);
ConditionVector SampleConditionPair(const PairFrequencyTable& table,
                                    std::mt19937_64& rng);
ConditionVector SampleGenerationCondition(const PairFrequencyTable& table,
                                          std::mt19937_64& rng);

// Draws `batch` row indices uniformly, with replacement, among the rows of
// `data` matching both active categories of `cond`. Linear scan.
std::vector<size_t> SampleMatchingRows(const DataTable& data,
                                       const ConditionVector& cond,
                                       size_t batch, std::mt19937_64& rng);

// Precomputed row lists per (pair, combination) for training-by-sampling.
class MatchingRowIndex {
 public:
  MatchingRowIndex(const DataTable& data, const PairFrequencyTable& table);

  const std::vector<size_t>& Rows(const ConditionVector& cond) const;
  size_t Sample(const ConditionVector& cond, std::mt19937_64& rng) const;

 private:
  // rows_[pair][combo]
  std::vector<std::vector<std::vector<size_t>>> rows_;
};

}  // namespace dpcgans

#endif  // DPCGANS_CONDITIONING_H_
