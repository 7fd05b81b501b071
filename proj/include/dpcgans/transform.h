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

#ifndef DPCGANS_TRANSFORM_H_
#define DPCGANS_TRANSFORM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/data_table.h"
#include "dpcgans/gaussian_mixture.h"
#include "dpcgans/matrix.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

// Continuous values are standardized within their mode by this many
// component standard deviations and clamped to [-1, 1].
inline constexpr double kModeScale = 4.0;

enum class SpanActivation { kTanh, kSoftmax };

// A contiguous block of the encoded row that shares one output activation.
struct OutputSpan {
  size_t offset = 0;
  size_t width = 0;
  SpanActivation activation = SpanActivation::kSoftmax;
};

// Placement of one source column in the encoded row.
struct ColumnLayout {
  size_t offset = 0;
  size_t width = 0;
  bool categorical = false;
};

struct ContinuousCode {
  double scalar = 0.0;  // in [-1, 1]
  int mode = 0;         // index among the kept components
};

// One-hot encoding of `label` over the column's categories.
absl::StatusOr<std::vector<double>> EncodeCategorical(std::string_view label,
                                                      const ColumnSpec& spec);

// Samples a mode with probability proportional to pi_k N(x; mu_k, sigma_k)
// and standardizes `x` within it.
ContinuousCode EncodeContinuous(double x, const GaussianMixtureFit& fit,
                                std::mt19937_64& rng);

// Mode responsibilities pi_k N(x; mu_k, sigma_k), normalized.
std::vector<double> ModeResponsibilities(double x,
                                         const GaussianMixtureFit& fit);

double DecodeContinuous(double scalar, int mode, const GaussianMixtureFit& fit);

struct EncodedMatrix {
  Matrix values;
  std::vector<ColumnLayout> layout;
};

class TransformModel {
 public:
  TransformModel() = default;

  // Fits one mixture per continuous column. Column c uses seed `seed + c`,
  // so fits are independent of evaluation order and run in parallel.
  static TransformModel Fit(const DataTable& data,
                            const VgmOptions& options = {},
                            uint64_t seed = 0);

  const TableSchema& schema() const { return schema_; }
  const std::vector<ColumnLayout>& layout() const { return layout_; }
  const std::vector<OutputSpan>& output_spans() const { return spans_; }
  // Mixture fit for column `col`; only meaningful for continuous columns.
  const GaussianMixtureFit& mixture(size_t col) const { return mixtures_[col]; }
  size_t encoded_width() const { return width_; }

  nlohmann::json ToJson() const;
  static absl::StatusOr<TransformModel> FromJson(const nlohmann::json& json);

 private:
  void BuildLayout();

  TableSchema schema_;
  std::vector<GaussianMixtureFit> mixtures_;  // indexed by column
  std::vector<ColumnLayout> layout_;
  std::vector<OutputSpan> spans_;
  size_t width_ = 0;
};

// Encodes every row of `data`; row i of the result encodes data row i.
absl::StatusOr<EncodedMatrix> TransformTable(const DataTable& data,
                                             const TransformModel& model,
                                             uint64_t seed);

// Decodes (possibly soft) encoded rows. Categorical and mode segments are
// resolved by argmax; scalars are clamped to [-1, 1].
absl::StatusOr<DataTable> InverseTransform(const Matrix& values,
                                           const TransformModel& model);

}  // namespace dpcgans

#endif  // DPCGANS_TRANSFORM_H_
