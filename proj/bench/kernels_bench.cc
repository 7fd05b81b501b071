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


// Serial versus OpenMP record-distance scans at audit-like sizes.

#include <random>

#include "benchmark/benchmark.h"
#include "dpcgans/kernels.h"

namespace dpcgans {
namespace {

RecordBlock MakeBlock(Eigen::Index rows, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cat(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RecordBlock block;
  block.categorical.resize(rows, 6);
  block.continuous.resize(rows, 6);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int c = 0; c < 6; ++c) {
      block.categorical(i, c) = cat(rng);
      block.continuous(i, c) = unit(rng);
    }
  }
  block.num_columns = 12;
  return block;
}

template <bool kParallel>
void BM_MinDistances(benchmark::State& state) {
  const RecordBlock q = MakeBlock(state.range(0), 1);
  const RecordBlock r = MakeBlock(state.range(0), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel ? MinDistancesParallel(q, r)
                                       : MinDistancesSerial(q, r));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool kParallel>
void BM_KnnVotes(benchmark::State& state) {
  const RecordBlock q = MakeBlock(state.range(0), 3);
  const RecordBlock r = MakeBlock(state.range(0), 4);
  std::vector<int> labels(state.range(0));
  for (size_t i = 0; i < labels.size(); ++i) labels[i] = i % 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel ? KnnVotesParallel(q, r, labels, 3, 5)
                                       : KnnVotesSerial(q, r, labels, 3, 5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

BENCHMARK(BM_MinDistances<false>)->Arg(500)->Arg(2000);
BENCHMARK(BM_MinDistances<true>)->Arg(500)->Arg(2000);
BENCHMARK(BM_KnnVotes<false>)->Arg(500)->Arg(2000);
BENCHMARK(BM_KnnVotes<true>)->Arg(500)->Arg(2000);

}  // namespace
}  // namespace dpcgans

BENCHMARK_MAIN();
