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


#include "dpcgans/conditioning.h"

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "boost/math/distributions/chi_squared.hpp"
#include "gtest/gtest.h"
#include "test_support.h"

namespace dpcgans {
namespace {

using testing::Categorical;
using testing::Continuous;
using testing::MakeSchema;

// A(3) x B(2) with observed combinations (0,0) x 100, (1,1) x 10, (2,0) x 1,
// plus a continuous column holding the row number.
DataTable SkewedPairTable() {
  DataTable data(
      MakeSchema({Categorical("A", 3), Continuous("id"), Categorical("B", 2)}));
  auto add = [&](int a, int b, int n) {
    for (int i = 0; i < n; ++i) {
      data.AppendUnchecked(
          {a, static_cast<double>(data.num_rows()), b});
    }
  };
  add(0, 0, 100);
  add(1, 1, 10);
  add(2, 0, 1);
  return data;
}

// Probability of combination (a, b) in pair 0 under `probs`.
double ProbOf(const PairFrequencyTable& table, const std::vector<double>& probs,
              int a, int b) {
  const auto& combos = table.pairs()[0].combos;
  for (size_t i = 0; i < combos.size(); ++i) {
    if (combos[i].category_a == a && combos[i].category_b == b) return probs[i];
  }
  return -1.0;
}

TEST(ConditionLayoutTest, ConcatenatesCategoricalBlocks) {
  const ConditionLayout layout = MakeConditionLayout(testing::MixedSchema());
  EXPECT_EQ(layout.columns, (std::vector<size_t>{0, 2, 4}));
  EXPECT_EQ(layout.offsets, (std::vector<size_t>{0, 2, 5}));
  EXPECT_EQ(layout.widths, (std::vector<size_t>{2, 3, 5}));
  EXPECT_EQ(layout.width, 10u);
}

TEST(PairFrequencyTableTest, CountsObservedCombinations) {
  const PairFrequencyTable table = PairFrequencyTable::Build(SkewedPairTable());
  ASSERT_TRUE(table.enabled());
  ASSERT_EQ(table.pairs().size(), 1u);
  EXPECT_EQ(table.pairs()[0].column_a, 0u);
  EXPECT_EQ(table.pairs()[0].column_b, 2u);
  EXPECT_EQ(table.pairs()[0].combos.size(), 3u);
  EXPECT_EQ(table.num_rows(), 111);
  int64_t total = 0;
  for (const ComboCount& c : table.pairs()[0].combos) total += c.count;
  EXPECT_EQ(total, 111);
}

TEST(PairFrequencyTableTest, AllPairsOfMixedTable) {
  const PairFrequencyTable table =
      PairFrequencyTable::Build(testing::MakeMixedTable(500, 3));
  EXPECT_EQ(table.pairs().size(), 3u);  // 3 categorical columns
}

TEST(PairFrequencyTableTest, TrainingWeightsAreLogCounts) {
  const PairFrequencyTable table = PairFrequencyTable::Build(SkewedPairTable());
  const std::vector<double> p = table.TrainingProbabilities(0);
  const double z = std::log(101.0) + std::log(11.0) + std::log(2.0);
  EXPECT_NEAR(ProbOf(table, p, 0, 0), std::log(101.0) / z, 1e-12);
  EXPECT_NEAR(ProbOf(table, p, 1, 1), std::log(11.0) / z, 1e-12);
  EXPECT_NEAR(ProbOf(table, p, 2, 0), std::log(2.0) / z, 1e-12);
  EXPECT_NEAR(ProbOf(table, p, 0, 0), 0.599, 5e-4);
  EXPECT_NEAR(ProbOf(table, p, 1, 1), 0.311, 5e-4);
  EXPECT_NEAR(ProbOf(table, p, 2, 0), 0.090, 5e-4);
}

TEST(PairFrequencyTableTest, GenerationWeightsAreRawCounts) {
  const PairFrequencyTable table = PairFrequencyTable::Build(SkewedPairTable());
  const std::vector<double> p = table.GenerationProbabilities(0);
  EXPECT_NEAR(ProbOf(table, p, 0, 0), 100.0 / 111.0, 1e-12);
  EXPECT_NEAR(ProbOf(table, p, 1, 1), 10.0 / 111.0, 1e-12);
  EXPECT_NEAR(ProbOf(table, p, 2, 0), 1.0 / 111.0, 1e-12);
}

TEST(PairFrequencyTableTest, SamplersMatchTheirProbabilities) {
  const PairFrequencyTable table = PairFrequencyTable::Build(SkewedPairTable());
  std::mt19937_64 rng(17);
  const int n = 40000;
  for (bool training : {true, false}) {
    std::map<std::pair<int, int>, int> hits;
    for (int i = 0; i < n; ++i) {
      const ConditionVector c = training ? table.SampleTraining(rng)
                                         : table.SampleGeneration(rng);
      ASSERT_EQ(c.pair, 0u);
      const ComboCount& combo = table.pairs()[0].combos[c.combo];
      EXPECT_EQ(combo.category_a, c.category_a);
      EXPECT_EQ(combo.category_b, c.category_b);
      ++hits[{c.category_a, c.category_b}];
    }
    const std::vector<double> p = training ? table.TrainingProbabilities(0)
                                           : table.GenerationProbabilities(0);
    for (auto [key, count] : hits) {
      const double expected = ProbOf(table, p, key.first, key.second);
      const double se = std::sqrt(expected * (1 - expected) / n);
      EXPECT_NEAR(count / static_cast<double>(n), expected, 5 * se);
    }
  }
}

TEST(PairFrequencyTableTest, PairsAreDrawnUniformly) {
  const PairFrequencyTable table =
      PairFrequencyTable::Build(testing::MakeMixedTable(500, 4));
  std::mt19937_64 rng(5);
  std::vector<int> hits(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++hits[table.SampleTraining(rng).pair];
  for (int h : hits) EXPECT_NEAR(h / static_cast<double>(n), 1.0 / 3, 0.015);
}

TEST(PairFrequencyTableTest, FillSetsExactlyTwoBits) {
  const PairFrequencyTable table =
      PairFrequencyTable::Build(testing::MakeMixedTable(500, 6));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const ConditionVector c = table.SampleTraining(rng);
    const std::vector<double> bits = c.Bits(table.layout());
    ASSERT_EQ(bits.size(), table.layout().width);
    EXPECT_EQ(std::accumulate(bits.begin(), bits.end(), 0.0), 2.0);
    auto offset_of = [&](size_t column) {
      for (size_t j = 0; j < table.layout().columns.size(); ++j) {
        if (table.layout().columns[j] == column) return table.layout().offsets[j];
      }
      return size_t{0};
    };
    EXPECT_EQ(bits[offset_of(c.column_a) + c.category_a], 1.0);
    EXPECT_EQ(bits[offset_of(c.column_b) + c.category_b], 1.0);
  }
}

TEST(PairFrequencyTableTest, DisabledBelowTwoCategoricalColumns) {
  DataTable data(MakeSchema({Categorical("A", 2), Continuous("x")}));
  data.AppendUnchecked({0, 1.0});
  data.AppendUnchecked({1, 2.0});
  EXPECT_FALSE(PairFrequencyTable::Build(data).enabled());
}

TEST(PairFrequencyTableTest, JsonRoundTrip) {
  const DataTable data = testing::MakeMixedTable(300, 8);
  const PairFrequencyTable table = PairFrequencyTable::Build(data);
  absl::StatusOr<PairFrequencyTable> back = PairFrequencyTable::FromJson(
      nlohmann::json::parse(table.ToJson().dump()), data.schema());
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->ToJson(), table.ToJson());
  std::mt19937_64 r1(9), r2(9);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(table.SampleTraining(r1).combo, back->SampleTraining(r2).combo);
  }
}

TEST(MatchingRowsTest, OnlyMatchingRowsAreDrawnAndUniformly) {
  const DataTable data = SkewedPairTable();
  const PairFrequencyTable table = PairFrequencyTable::Build(data);
  ConditionVector cond;
  cond.pair = 0;
  cond.column_a = 0;
  cond.column_b = 2;
  cond.category_a = 1;
  cond.category_b = 1;
  for (size_t i = 0; i < table.pairs()[0].combos.size(); ++i) {
    if (table.pairs()[0].combos[i].category_a == 1) cond.combo = i;
  }
  std::mt19937_64 rng(10);
  const size_t n = 20000;
  const std::vector<size_t> rows = SampleMatchingRows(data, cond, n, rng);
  ASSERT_EQ(rows.size(), n);
  std::vector<double> hits(10, 0.0);
  for (size_t r : rows) {
    ASSERT_EQ(data.category(r, 0), 1);
    ASSERT_EQ(data.category(r, 2), 1);
    ++hits[r - 100];  // matching rows are 100..109
  }
  double chi2 = 0.0;
  for (double h : hits) chi2 += (h - n / 10.0) * (h - n / 10.0) / (n / 10.0);
  const double p =
      boost::math::cdf(boost::math::complement(
          boost::math::chi_squared_distribution<double>(9), chi2));
  EXPECT_GT(p, 1e-3) << "chi2 " << chi2;

  const MatchingRowIndex index(data, table);
  const std::vector<size_t>& listed = index.Rows(cond);
  EXPECT_EQ(listed.size(), 10u);
  for (int i = 0; i < 200; ++i) {
    const size_t r = index.Sample(cond, rng);
    EXPECT_GE(r, 100u);
    EXPECT_LT(r, 110u);
  }
}

TEST(MatchingRowsTest, IndexAgreesWithLinearScan) {
  const DataTable data = testing::MakeMixedTable(400, 11);
  const PairFrequencyTable table = PairFrequencyTable::Build(data);
  const MatchingRowIndex index(data, table);
  for (size_t p = 0; p < table.pairs().size(); ++p) {
    const ColumnPair& pair = table.pairs()[p];
    for (size_t k = 0; k < pair.combos.size(); ++k) {
      ConditionVector c{p, k, pair.column_a, pair.column_b,
                        pair.combos[k].category_a, pair.combos[k].category_b};
      std::vector<size_t> scan;
      for (size_t r = 0; r < data.num_rows(); ++r) {
        if (data.category(r, c.column_a) == c.category_a &&
            data.category(r, c.column_b) == c.category_b) {
          scan.push_back(r);
        }
      }
      EXPECT_EQ(index.Rows(c), scan);
      EXPECT_EQ(static_cast<int64_t>(scan.size()), pair.combos[k].count);
    }
  }
}

}  // namespace
}  // namespace dpcgans
