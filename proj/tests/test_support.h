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


// Synthetic fixtures shared by the unit and acceptance tests.

#ifndef DPCGANS_TESTS_TEST_SUPPORT_H_
#define DPCGANS_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dpcgans/data_table.h"

namespace dpcgans::testing {

inline ColumnSpec Categorical(std::string name, int k) {
  ColumnSpec spec;
  spec.name = std::move(name);
  spec.kind = ColumnKind::kCategorical;
  for (int i = 0; i < k; ++i) {
    spec.categories.push_back(spec.name + "_" + std::to_string(i));
  }
  return spec;
}

inline ColumnSpec Continuous(std::string name) {
  ColumnSpec spec;
  spec.name = std::move(name);
  spec.kind = ColumnKind::kContinuous;
  return spec;
}

inline TableSchema MakeSchema(std::vector<ColumnSpec> columns,
                              std::optional<std::string> target = {}) {
  return *TableSchema::Create(std::move(columns), std::move(target));
}

// Two categoricals with a strong dependency, P(B = 0 | A = 0) = 0.9 and
// P(B = 0 | A = 1) = 0.1, P(A = 0) = 0.6, plus a bimodal continuous column
// 0.5 N(-4, 1) + 0.5 N(6, 1.5^2).
inline TableSchema DependencySchema() {
  return MakeSchema({Categorical("A", 2), Categorical("B", 2), Continuous("V")},
                    "B");
}

inline DataTable MakeDependencyTable(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution a_is_0(0.6), b_given_a0(0.9), b_given_a1(0.1),
      left(0.5);
  std::normal_distribution<double> low(-4.0, 1.0), high(6.0, 1.5);
  DataTable data(DependencySchema());
  for (size_t i = 0; i < n; ++i) {
    const int a = a_is_0(rng) ? 0 : 1;
    const bool b0 = a == 0 ? b_given_a0(rng) : b_given_a1(rng);
    const double v = left(rng) ? low(rng) : high(rng);
    data.AppendUnchecked({a, b0 ? 0 : 1, v});
  }
  return data;
}

// Random mixed-type rows: categoricals of widths 2, 3, 5 (skewed
// frequencies) and two continuous columns, one bimodal and one skewed.
inline TableSchema MixedSchema() {
  return MakeSchema({Categorical("c0", 2), Continuous("x0"),
                     Categorical("c1", 3), Continuous("x1"),
                     Categorical("c2", 5)},
                    "c0");
}

inline DataTable MakeMixedTable(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> c0({3, 1}), c1({5, 3, 2}), c2({1, 2, 3, 4, 5});
  std::bernoulli_distribution pick(0.3);
  std::normal_distribution<double> a(-2.0, 0.5), b(3.0, 1.0);
  std::exponential_distribution<double> e(0.5);
  DataTable data(MixedSchema());
  for (size_t i = 0; i < n; ++i) {
    const int k0 = c0(rng);
    const double x0 = pick(rng) ? a(rng) : b(rng);
    const int k1 = c1(rng);
    const double x1 = e(rng) + k0;
    data.AppendUnchecked({k0, x0, k1, x1, c2(rng)});
  }
  return data;
}

// A fresh directory under the system temp dir, unique per name.
inline std::filesystem::path TempDir(const std::string& name) {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("dpcgans_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace dpcgans::testing

#endif  // DPCGANS_TESTS_TEST_SUPPORT_H_
