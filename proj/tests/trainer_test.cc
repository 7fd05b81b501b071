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


#include "dpcgans/trainer.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_support.h"

namespace dpcgans {
namespace {

using testing::MakeMixedTable;

TrainingConfig Tiny(uint64_t seed) {
  TrainingConfig c;
  c.epochs = 2;
  c.batch_size = 20;
  c.pac = 2;
  c.discriminator_steps = 2;
  c.noise_dim = 4;
  c.generator_hidden = 8;
  c.discriminator_hidden = 8;
  c.seed = seed;
  return c;
}

TEST(TrainingConfigTest, ValidationAndJson) {
  TrainingConfig c = Tiny(1);
  ASSERT_TRUE(c.Validate().ok());
  c.batch_size = 21;
  EXPECT_FALSE(c.Validate().ok());  // not a multiple of pac
  c = Tiny(1);
  c.dropout = 1.0;
  EXPECT_FALSE(c.Validate().ok());
  c = Tiny(1);
  c.target_epsilon = 0.0;
  EXPECT_FALSE(c.Validate().ok());

  c = Tiny(7);
  c.noise_multiplier = 1.25;
  c.target_epsilon = 3.0;
  absl::StatusOr<TrainingConfig> back =
      TrainingConfig::FromJson(nlohmann::json::parse(c.ToJson().dump()));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->ToJson(), c.ToJson());
  EXPECT_EQ(*back->noise_multiplier, 1.25);
  EXPECT_EQ(TrainingConfig::FromJson(Tiny(1).ToJson())->target_epsilon,
            kInfinity);
}

TEST(PackTest, ConsecutiveRowsShareAPack) {
  Matrix rows(4, 2);
  rows << 1, 2, 3, 4, 5, 6, 7, 8;
  const Matrix packed = Pack(rows, 2);
  ASSERT_EQ(packed.rows(), 2);
  ASSERT_EQ(packed.cols(), 4);
  EXPECT_EQ(packed.row(0), (Eigen::RowVector4d(1, 2, 3, 4)));
  EXPECT_EQ(packed.row(1), (Eigen::RowVector4d(5, 6, 7, 8)));
}

TEST(MaskedBceTest, ValueAndGradient) {
  Matrix logits(2, 3), target(2, 3), mask(2, 3);
  logits << 0.5, -1.0, 30.0, 2.0, -40.0, 0.0;
  target << 1, 0, 1, 0, 1, 1;
  mask << 1, 1, 0, 1, 1, 0;
  auto bce = [](double x, double y) {
    return std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
  };
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (mask(i, j) > 0) expected += bce(logits(i, j), target(i, j));
    }
  }
  expected /= 4;
  Matrix grad;
  EXPECT_NEAR(MaskedBceWithLogits(logits, target, mask, &grad), expected,
              1e-14);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double sig = 1.0 / (1.0 + std::exp(-logits(i, j)));
      EXPECT_NEAR(grad(i, j), mask(i, j) * (sig - target(i, j)) / 4, 1e-14);
    }
  }
}

TEST(TrainerTest, ClippingBoundsEveryCoordinate) {
  TrainingConfig c = Tiny(2);
  c.noise_multiplier = 1e-12;  // noised, but the noise is negligible
  absl::StatusOr<Trainer> trainer = Trainer::Create(MakeMixedTable(100, 1), c);
  ASSERT_TRUE(trainer.ok()) << trainer.status();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Gradients g = {Matrix(5, 7), Matrix(1, 9)};
  for (Matrix& m : g) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng) * 0.02;
  }
  const Gradients before = g;
  trainer->Privatize(g);
  for (size_t t = 0; t < g.size(); ++t) {
    for (Eigen::Index i = 0; i < g[t].size(); ++i) {
      const double clamped =
          std::clamp(before[t].data()[i], -c.clip, c.clip);
      EXPECT_NEAR(g[t].data()[i], clamped, 1e-9);
      EXPECT_LE(std::abs(g[t].data()[i]), c.clip + 1e-9);
    }
  }
}

TEST(TrainerTest, NoiseHasTheCalibratedScale) {
  TrainingConfig c = Tiny(4);
  c.noise_multiplier = 3.0;
  absl::StatusOr<Trainer> trainer = Trainer::Create(MakeMixedTable(100, 2), c);
  ASSERT_TRUE(trainer.ok());
  Gradients g = {Matrix::Constant(200, 200, 5.0)};  // clamps to +C_p
  trainer->Privatize(g);
  const double mean = g[0].mean();
  const double sd = std::sqrt((g[0].array() - mean).square().mean());
  EXPECT_NEAR(mean, c.clip, 5 * 3.0 * 2 * c.clip / 200);
  EXPECT_NEAR(sd, 3.0 * 2 * c.clip, 0.02 * 3.0 * 2 * c.clip);
}

TEST(TrainerTest, FitAndGenerateAreReproducible) {
  const DataTable data = MakeMixedTable(120, 3);
  TrainingConfig c = Tiny(5);
  c.target_epsilon = 5.0;
  absl::StatusOr<GanModel> a = Fit(data, c);
  absl::StatusOr<GanModel> b = Fit(data, c);
  ASSERT_TRUE(a.ok() && b.ok()) << a.status();
  const auto pa = std::as_const(a->generator).Parameters();
  const auto pb = std::as_const(b->generator).Parameters();
  for (size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(*pa[i], *pb[i]);
  EXPECT_EQ(a->Epsilon(), b->Epsilon());

  absl::StatusOr<DataTable> s1 = Generate(*a, 50, 9);
  absl::StatusOr<DataTable> s2 = Generate(*b, 50, 9);
  absl::StatusOr<DataTable> s3 = Generate(*a, 50, 10);
  ASSERT_TRUE(s1.ok() && s2.ok() && s3.ok());
  EXPECT_EQ(*s1, *s2);
  EXPECT_NE(*s1, *s3);
  EXPECT_EQ(s1->schema(), data.schema());
  EXPECT_FALSE(Generate(*a, 0, 1).ok());
}

TEST(TrainerTest, HistoryAndAccounting) {
  const DataTable data = MakeMixedTable(100, 4);
  TrainingConfig c = Tiny(6);
  c.epochs = 3;
  c.target_epsilon = 2.0;
  absl::StatusOr<Trainer> trainer = Trainer::Create(data, c);
  ASSERT_TRUE(trainer.ok());
  // 100 rows at batch 20: 5 steps per epoch, 2 critic updates each.
  EXPECT_EQ(trainer->steps_per_epoch(), 5u);
  EXPECT_EQ(trainer->planned_discriminator_updates(), 30);
  ASSERT_TRUE(trainer->Run().ok());
  const GanModel& m = trainer->model();
  EXPECT_NEAR(m.privacy.sampling_rate, 0.2, 1e-15);
  EXPECT_EQ(m.history.epochs_completed, 3);
  EXPECT_FALSE(m.history.halted_by_budget);
  EXPECT_EQ(m.history.discriminator_updates, 30);
  EXPECT_EQ(m.history.generator_updates, 15);
  EXPECT_EQ(m.accountant.steps(), 30);
  ASSERT_EQ(m.history.records.size(), 3u);
  for (size_t i = 1; i < 3; ++i) {
    EXPECT_GT(m.history.records[i].epsilon, m.history.records[i - 1].epsilon);
  }
  EXPECT_LE(m.Epsilon(), 2.0);
  EXPECT_NEAR(m.Epsilon(), 2.0, 1e-6);  // calibrated to the planned horizon

  absl::StatusOr<TrainingHistory> h =
      TrainingHistory::FromJson(nlohmann::json::parse(m.history.ToJson().dump()));
  ASSERT_TRUE(h.ok());
  EXPECT_EQ(h->ToJson(), m.history.ToJson());
}

TEST(TrainerTest, GateStopsBeforeTheBudgetIsExceeded) {
  const DataTable data = MakeMixedTable(100, 5);
  TrainingConfig c = Tiny(7);
  c.epochs = 50;
  c.target_epsilon = 1.0;
  c.noise_multiplier = 0.8;  // far too little noise for 50 epochs
  absl::StatusOr<Trainer> trainer = Trainer::Create(data, c);
  ASSERT_TRUE(trainer.ok()) << trainer.status();
  ASSERT_TRUE(trainer->Run().ok());
  const GanModel& m = trainer->model();
  EXPECT_TRUE(m.history.halted_by_budget);
  EXPECT_LT(m.history.epochs_completed, 50);
  EXPECT_LE(m.Epsilon(), 1.0);
  EXPECT_TRUE(trainer->BudgetWouldBeExceeded());
  EXPECT_EQ(trainer->DiscriminatorStep().status().code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(TrainerTest, RejectsInfeasibleBudgetsAndEmptyData) {
  TrainingConfig c = Tiny(8);
  c.target_epsilon = 1e-3;
  EXPECT_EQ(Trainer::Create(MakeMixedTable(100, 6), c).status().code(),
            absl::StatusCode::kOutOfRange);
  c = Tiny(8);
  c.target_epsilon = 1.0;
  c.noise_multiplier = 0.0;
  EXPECT_EQ(Trainer::Create(MakeMixedTable(100, 6), c).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_FALSE(
      Trainer::Create(DataTable(testing::MixedSchema()), Tiny(8)).ok());
}

TEST(TrainerTest, BatchShrinksToTheData) {
  TrainingConfig c = Tiny(9);
  c.batch_size = 500;
  absl::StatusOr<Trainer> trainer = Trainer::Create(MakeMixedTable(31, 7), c);
  ASSERT_TRUE(trainer.ok()) << trainer.status();
  EXPECT_EQ(trainer->model().batch_size, 30u);  // largest pac multiple <= 31
}

TEST(TrainerTest, UnconditionalWithOneCategoricalColumn) {
  DataTable data(testing::MakeSchema(
      {testing::Categorical("a", 2), testing::Continuous("x")}));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 60; ++i) data.AppendUnchecked({i % 2, n(rng)});
  absl::StatusOr<GanModel> m = Fit(data, Tiny(10));
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_FALSE(m->conditions.enabled());
  absl::StatusOr<DataTable> s = Generate(*m, 20, 1);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->num_rows(), 20u);
}

}  // namespace
}  // namespace dpcgans
