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

// Record-distance scans used by the disclosure audits. Each scan has a plain
// serial reference and an OpenMP version that must agree with it exactly:
// every query is handled independently and the per-query reduction order is
// the same in both.

#ifndef DPCGANS_KERNELS_H_
#define DPCGANS_KERNELS_H_

#include <cstdint>
#include <vector>

#include "dpcgans/matrix.h"

namespace dpcgans {

using IntMatrix =
    Eigen::Matrix<int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows prepared for distance computation: categorical codes and continuous
// values already scaled to [0, 1]. `num_columns` is the divisor of the
// combined distance (the number of columns taking part).
struct RecordBlock {
  IntMatrix categorical;
  Matrix continuous;
  size_t num_columns = 0;

  Eigen::Index rows() const {
    return categorical.cols() > 0 ? categorical.rows() : continuous.rows();
  }
};

// (Hamming count + Euclidean norm of the continuous difference) / columns.
double RecordDistance(const RecordBlock& a, Eigen::Index i, const RecordBlock& b,
                      Eigen::Index j);

// Distance from every query row to its nearest reference row (+inf when the
// reference block is empty).
std::vector<double> MinDistancesSerial(const RecordBlock& queries,
                                       const RecordBlock& refs);
std::vector<double> MinDistancesParallel(const RecordBlock& queries,
                                         const RecordBlock& refs);

// k-nearest-neighbour class votes. Row i of the result holds, per class, the
// fraction of the k nearest reference rows carrying that label. Neighbours
// tied at the k-th distance share the remaining slots equally, so the votes
// do not depend on reference row order.
Matrix KnnVotesSerial(const RecordBlock& queries, const RecordBlock& refs,
                      const std::vector<int>& ref_labels, int num_classes,
                      int k);
Matrix KnnVotesParallel(const RecordBlock& queries, const RecordBlock& refs,
                        const std::vector<int>& ref_labels, int num_classes,
                        int k);

}  // namespace dpcgans

#endif  // DPCGANS_KERNELS_H_
