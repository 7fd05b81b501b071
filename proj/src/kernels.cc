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
#include <limits>

namespace dpcgans {
namespace {

double MinDistanceFor(const RecordBlock& queries, Eigen::Index i,
                      const RecordBlock& refs) {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Index n = refs.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    best = std::min(best, RecordDistance(queries, i, refs, j));
  }
  return best;
}

void KnnVoteFor(const RecordBlock& queries, Eigen::Index i,
                const RecordBlock& refs, const std::vector<int>& labels,
                int k, std::vector<double>& scratch, double* votes) {
  const Eigen::Index n = refs.rows();
  scratch.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    scratch[j] = RecordDistance(queries, i, refs, j);
  }
  const int kk = static_cast<int>(std::min<Eigen::Index>(k, n));
  if (kk == 0) return;
  std::vector<double> sorted = scratch;
  std::nth_element(sorted.begin(), sorted.begin() + (kk - 1), sorted.end());
  const double kth = sorted[kk - 1];
  int closer = 0;
  int tied = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (scratch[j] < kth) ++closer;
    else if (scratch[j] == kth) ++tied;
  }
  const double share = static_cast<double>(kk - closer) / tied;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (scratch[j] < kth) {
      votes[labels[j]] += 1.0 / kk;
    } else if (scratch[j] == kth) {
      votes[labels[j]] += share / kk;
    }
  }
}

}  // namespace

double RecordDistance(const RecordBlock& a, Eigen::Index i, const RecordBlock& b,
                      Eigen::Index j) {
  int hamming = 0;
  const Eigen::Index nc = a.categorical.cols();
  for (Eigen::Index c = 0; c < nc; ++c) {
    hamming += a.categorical(i, c) != b.categorical(j, c);
  }
  double sq = 0.0;
  const Eigen::Index nd = a.continuous.cols();
  for (Eigen::Index c = 0; c < nd; ++c) {
    const double d = a.continuous(i, c) - b.continuous(j, c);
    sq += d * d;
  }
  return (hamming + std::sqrt(sq)) / static_cast<double>(a.num_columns);
}

std::vector<double> MinDistancesSerial(const RecordBlock& queries,
                                       const RecordBlock& refs) {
  std::vector<double> out(queries.rows());
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out[i] = MinDistanceFor(queries, i, refs);
  }
  return out;
}

std::vector<double> MinDistancesParallel(const RecordBlock& queries,
                                         const RecordBlock& refs) {
  const Eigen::Index n = queries.rows();
  std::vector<double> out(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = MinDistanceFor(queries, i, refs);
  }
  return out;
}

Matrix KnnVotesSerial(const RecordBlock& queries, const RecordBlock& refs,
                      const std::vector<int>& ref_labels, int num_classes,
                      int k) {
  Matrix votes = Matrix::Zero(queries.rows(), num_classes);
  std::vector<double> scratch;
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    KnnVoteFor(queries, i, refs, ref_labels, k, scratch, &votes(i, 0));
  }
  return votes;
}

Matrix KnnVotesParallel(const RecordBlock& queries, const RecordBlock& refs,
                        const std::vector<int>& ref_labels, int num_classes,
                        int k) {
  const Eigen::Index n = queries.rows();
  Matrix votes = Matrix::Zero(n, num_classes);
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      KnnVoteFor(queries, i, refs, ref_labels, k, scratch, &votes(i, 0));
    }
  }
  return votes;
}

}  // namespace dpcgans
