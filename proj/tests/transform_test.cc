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


#include "dpcgans/transform.h"

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace dpcgans {
namespace {

using ::testing::HasSubstr;
using testing::Categorical;
using testing::MakeMixedTable;
using testing::MixedSchema;

GaussianMixtureFit Mixture(std::vector<double> means, std::vector<double> stds,
                           std::vector<double> weights) {
  GaussianMixtureFit fit;
  fit.means = std::move(means);
  fit.stds = std::move(stds);
  fit.weights = std::move(weights);
  for (size_t k = 0; k < fit.means.size(); ++k) fit.kept_components.push_back(k);
  return fit;
}

TEST(EncodeCategoricalTest, OneHotInSchemaOrder) {
  ColumnSpec sex = Categorical("Sex", 2);
  sex.categories = {"Male", "Female"};
  absl::StatusOr<std::vector<double>> code = EncodeCategorical("Female", sex);
  ASSERT_TRUE(code.ok());
  EXPECT_EQ(*code, (std::vector<double>{0.0, 1.0}));
  absl::StatusOr<std::vector<double>> bad = EncodeCategorical("Femal", sex);
  EXPECT_EQ(bad.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(bad.status().message(), HasSubstr("Femal"));
}

TEST(EncodeContinuousTest, ScalarIsStandardizedWithinMode) {
  const GaussianMixtureFit fit = Mixture({2.0}, {0.5}, {1.0});
  std::mt19937_64 rng(1);
  EXPECT_EQ(EncodeContinuous(2.0, fit, rng).scalar, 0.0);
  EXPECT_DOUBLE_EQ(EncodeContinuous(4.0, fit, rng).scalar, 1.0);
  EXPECT_DOUBLE_EQ(EncodeContinuous(1.0, fit, rng).scalar, -0.5);
  // Beyond four standard deviations the scalar saturates.
  EXPECT_EQ(EncodeContinuous(100.0, fit, rng).scalar, 1.0);
  EXPECT_EQ(EncodeContinuous(-100.0, fit, rng).scalar, -1.0);
  EXPECT_DOUBLE_EQ(DecodeContinuous(0.25, 0, fit), 2.5);
}

TEST(EncodeContinuousTest, ModeFollowsResponsibilities) {
  const GaussianMixtureFit fit = Mixture({0.0, 10.0}, {1.0, 1.0}, {0.5, 0.5});
  const std::vector<double> r = ModeResponsibilities(10.0, fit);
  EXPECT_GT(r[1], 0.99);
  EXPECT_NEAR(r[0] + r[1], 1.0, 1e-12);
  const std::vector<double> mid = ModeResponsibilities(5.0, fit);
  EXPECT_NEAR(mid[0], 0.5, 1e-12);

  // At the midpoint the mode is a fair coin.
  std::mt19937_64 rng(3);
  int ones = 0;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) ones += EncodeContinuous(5.0, fit, rng).mode;
  EXPECT_NEAR(ones / static_cast<double>(trials), 0.5, 0.04);
}

TEST(TransformModelTest, LayoutWidthsAndSpans) {
  const DataTable data = MakeMixedTable(800, 11);
  const TransformModel model = TransformModel::Fit(data);
  const auto& layout = model.layout();
  ASSERT_EQ(layout.size(), 5u);
  size_t expected = 0;
  for (size_t c = 0; c < 5; ++c) {
    EXPECT_EQ(layout[c].offset, expected);
    const ColumnSpec& spec = data.schema().column(c);
    if (spec.is_categorical()) {
      EXPECT_EQ(layout[c].width, spec.categories.size());
    } else {
      EXPECT_EQ(layout[c].width, 1 + model.mixture(c).size());
    }
    expected += layout[c].width;
  }
  EXPECT_EQ(model.encoded_width(), expected);

  // Spans tile the row: softmax for categoricals and modes, tanh for scalars.
  size_t covered = 0;
  int tanh_spans = 0;
  for (const OutputSpan& span : model.output_spans()) {
    EXPECT_EQ(span.offset, covered);
    covered += span.width;
    if (span.activation == SpanActivation::kTanh) {
      EXPECT_EQ(span.width, 1u);
      ++tanh_spans;
    }
  }
  EXPECT_EQ(covered, expected);
  EXPECT_EQ(tanh_spans, 2);
}

TEST(TransformModelTest, EncodedRowsAreWellFormed) {
  const DataTable data = MakeMixedTable(500, 12);
  const TransformModel model = TransformModel::Fit(data, {}, 4);
  absl::StatusOr<EncodedMatrix> encoded = TransformTable(data, model, 5);
  ASSERT_TRUE(encoded.ok()) << encoded.status();
  const Matrix& m = encoded->values;
  ASSERT_EQ(m.rows(), 500);
  ASSERT_EQ(static_cast<size_t>(m.cols()), model.encoded_width());
  for (const OutputSpan& span : model.output_spans()) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto block = m.row(i).segment(span.offset, span.width);
      if (span.activation == SpanActivation::kTanh) {
        EXPECT_LE(std::abs(block(0)), 1.0);
      } else {
        EXPECT_EQ(block.sum(), 1.0);
        EXPECT_EQ(block.maxCoeff(), 1.0);
      }
    }
  }
}

TEST(TransformModelTest, RoundTripRecoversTable) {
  const DataTable data = MakeMixedTable(1000, 13);
  const TransformModel model = TransformModel::Fit(data, {}, 1);
  absl::StatusOr<EncodedMatrix> encoded = TransformTable(data, model, 2);
  ASSERT_TRUE(encoded.ok());
  absl::StatusOr<DataTable> back = InverseTransform(encoded->values, model);
  ASSERT_TRUE(back.ok()) << back.status();
  ASSERT_EQ(back->num_rows(), data.num_rows());
  for (size_t i = 0; i < data.num_rows(); ++i) {
    for (size_t c = 0; c < data.num_columns(); ++c) {
      if (data.schema().column(c).is_categorical()) {
        EXPECT_EQ(back->category(i, c), data.category(i, c));
      } else {
        const ColumnLayout& l = model.layout()[c];
        const double scalar = encoded->values(i, l.offset);
        if (std::abs(scalar) < 1.0) {
          EXPECT_NEAR(back->value(i, c), data.value(i, c),
                      1e-9 * (1.0 + std::abs(data.value(i, c))));
        }
      }
    }
  }
}

TEST(TransformModelTest, SoftRowsDecodeByArgmax) {
  const DataTable data = MakeMixedTable(300, 14);
  const TransformModel model = TransformModel::Fit(data);
  Matrix soft = Matrix::Zero(1, model.encoded_width());
  const ColumnLayout& c2 = model.layout()[4];
  soft(0, c2.offset + 0) = 0.1;
  soft(0, c2.offset + 3) = 0.6;
  soft(0, c2.offset + 4) = 0.3;
  const ColumnLayout& x0 = model.layout()[1];
  soft(0, x0.offset) = 3.0;  // clamped to 1
  soft(0, x0.offset + 1) = 0.9;
  absl::StatusOr<DataTable> out = InverseTransform(soft, model);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->category(0, 4), 3);
  EXPECT_EQ(out->category(0, 0), 0);  // ties resolve to the first maximum
  const GaussianMixtureFit& fit = model.mixture(1);
  EXPECT_DOUBLE_EQ(out->value(0, 1), fit.means[0] + kModeScale * fit.stds[0]);
}

TEST(TransformModelTest, RejectsMismatchedInputs) {
  const DataTable data = MakeMixedTable(200, 15);
  const TransformModel model = TransformModel::Fit(data);
  EXPECT_FALSE(
      InverseTransform(Matrix::Zero(2, model.encoded_width() + 1), model).ok());
  DataTable other = testing::MakeDependencyTable(50, 1);
  EXPECT_EQ(TransformTable(other, model, 0).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(TransformModelTest, JsonRoundTripPreservesLayout) {
  const DataTable data = MakeMixedTable(400, 16);
  const TransformModel model = TransformModel::Fit(data, {}, 9);
  absl::StatusOr<TransformModel> back =
      TransformModel::FromJson(nlohmann::json::parse(model.ToJson().dump()));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->encoded_width(), model.encoded_width());
  EXPECT_EQ(back->schema(), model.schema());
  for (size_t c : data.schema().ContinuousIndices()) {
    EXPECT_EQ(back->mixture(c).means, model.mixture(c).means);
    EXPECT_EQ(back->mixture(c).stds, model.mixture(c).stds);
  }
  nlohmann::json broken = model.ToJson();
  broken["columns"].erase(0);
  EXPECT_FALSE(TransformModel::FromJson(broken).ok());
}

TEST(TransformModelTest, FitIsDeterministicPerSeed) {
  const DataTable data = MakeMixedTable(400, 17);
  const TransformModel a = TransformModel::Fit(data, {}, 21);
  const TransformModel b = TransformModel::Fit(data, {}, 21);
  EXPECT_EQ(a.ToJson(), b.ToJson());
  absl::StatusOr<EncodedMatrix> ea = TransformTable(data, a, 3);
  absl::StatusOr<EncodedMatrix> eb = TransformTable(data, b, 3);
  EXPECT_EQ(ea->values, eb->values);
}

}  // namespace
}  // namespace dpcgans
