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


#include "dpcgans/kernels.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"

namespace dpcgans {
namespace {

// Small categorical alphabets and a coarse continuous grid make exact
// distance ties common, which is what the tie handling must survive.
RecordBlock RandomBlock(Eigen::Index rows, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cat(0, 2);
  std::uniform_int_distribution<int> grid(0, 4);
  RecordBlock block;
  block.categorical.resize(rows, 2);
  block.continuous.resize(rows, 2);
  for (Eigen::Index i = 0; i < rows; ++i) {
    block.categorical(i, 0) = cat(rng);
    block.categorical(i, 1) = cat(rng);
    block.continuous(i, 0) = grid(rng) / 4.0;
    block.continuous(i, 1) = grid(rng) / 4.0;
  }
  block.num_columns = 4;
  return block;
}

RecordBlock Permuted(const RecordBlock& b, const std::vector<Eigen::Index>& p) {
  RecordBlock out = b;
  for (size_t i = 0; i < p.size(); ++i) {
    out.categorical.row(i) = b.categorical.row(p[i]);
    out.continuous.row(i) = b.continuous.row(p[i]);
  }
  return out;
}

TEST(RecordDistanceTest, WorkedExample) {
  RecordBlock a, b;
  a.categorical.resize(1, 2);
  b.categorical.resize(1, 2);
  a.categorical << 1, 0;
  b.categorical << 1, 2;
  a.continuous.resize(1, 2);
  b.continuous.resize(1, 2);
  a.continuous << 0.1, 0.9;
  b.continuous << 0.4, 0.5;
  a.num_columns = b.num_columns = 4;
  // (1 mismatch + ||(0.3, 0.4)||) / 4
  EXPECT_NEAR(RecordDistance(a, 0, b, 0), (1.0 + 0.5) / 4.0, 1e-15);
  EXPECT_EQ(RecordDistance(a, 0, a, 0), 0.0);
}

TEST(MinDistancesTest, MatchesBruteForceAndParallelAgrees) {
  std::mt19937_64 rng(1);
  const RecordBlock q = RandomBlock(300, rng);
  const RecordBlock r = RandomBlock(200, rng);
  const std::vector<double> serial = MinDistancesSerial(q, r);
  const std::vector<double> parallel = MinDistancesParallel(q, r);
  ASSERT_EQ(serial.size(), 300u);
  EXPECT_EQ(serial, parallel);
  for (Eigen::Index i = 0; i < 300; ++i) {
    double best = INFINITY;
    for (Eigen::Index j = 0; j < 200; ++j) {
      best = std::min(best, RecordDistance(q, i, r, j));
    }
    EXPECT_EQ(serial[i], best);
  }
  RecordBlock empty = r;
  empty.categorical.resize(0, 2);
  empty.continuous.resize(0, 2);
  EXPECT_EQ(MinDistancesSerial(q, empty)[0], INFINITY);
}

TEST(KnnVotesTest, VotesMatchBruteForceWithTieSharing) {
  std::mt19937_64 rng(2);
  const RecordBlock q = RandomBlock(50, rng);
  const RecordBlock r = RandomBlock(120, rng);
  std::vector<int> labels(120);
  std::uniform_int_distribution<int> cls(0, 2);
  for (int& l : labels) l = cls(rng);
  const int k = 5;
  const Matrix votes = KnnVotesSerial(q, r, labels, 3, k);
  for (Eigen::Index i = 0; i < 50; ++i) {
    std::vector<double> d(120);
    for (Eigen::Index j = 0; j < 120; ++j) d[j] = RecordDistance(q, i, r, j);
    std::vector<double> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    const double kth = sorted[k - 1];
    const int closer = std::count_if(d.begin(), d.end(),
                                     [&](double v) { return v < kth; });
    const int tied = std::count(d.begin(), d.end(), kth);
    Eigen::RowVector3d expected = Eigen::RowVector3d::Zero();
    for (Eigen::Index j = 0; j < 120; ++j) {
      if (d[j] < kth) expected(labels[j]) += 1.0 / k;
      if (d[j] == kth) expected(labels[j]) += double(k - closer) / tied / k;
    }
    EXPECT_LT((votes.row(i) - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(votes.row(i).sum(), 1.0, 1e-12);
  }
}

TEST(KnnVotesTest, ParallelAgreesAndReferenceOrderDoesNotMatter) {
  std::mt19937_64 rng(3);
  const RecordBlock q = RandomBlock(80, rng);
  const RecordBlock r = RandomBlock(150, rng);
  std::vector<int> labels(150);
  for (size_t j = 0; j < labels.size(); ++j) labels[j] = j % 4;
  const Matrix serial = KnnVotesSerial(q, r, labels, 4, 7);
  EXPECT_EQ(serial, KnnVotesParallel(q, r, labels, 4, 7));

  std::vector<Eigen::Index> perm(150);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> plabels(150);
  for (size_t j = 0; j < 150; ++j) plabels[j] = labels[perm[j]];
  const Matrix shuffled = KnnVotesSerial(q, Permuted(r, perm), plabels, 4, 7);
  EXPECT_LT((serial - shuffled).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KnnVotesTest, KLargerThanReferenceUsesAllRows) {
  std::mt19937_64 rng(4);
  const RecordBlock q = RandomBlock(3, rng);
  const RecordBlock r = RandomBlock(4, rng);
  const Matrix votes = KnnVotesSerial(q, r, {0, 0, 1, 1}, 2, 10);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(votes(i, 0), 0.5, 1e-12);
    EXPECT_NEAR(votes(i, 1), 0.5, 1e-12);
  }
}

}  // namespace
}  // namespace dpcgans
