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

#ifndef DPCGANS_DATA_TABLE_H_
#define DPCGANS_DATA_TABLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

enum class ColumnKind { kCategorical, kContinuous };

// One column of a mixed-type table. Binary columns are categorical columns
// with exactly two labels.
struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  std::vector<std::string> categories;

  bool is_categorical() const { return kind == ColumnKind::kCategorical; }
  // Index of `label` in `categories`, or -1.
  int CategoryIndex(std::string_view label) const;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

class TableSchema {
 public:
  TableSchema() = default;

  // Validates column invariants: unique names, categorical columns have at
  // least two unique labels, continuous columns have none, and the target
  // (if any) names a categorical column.
  static absl::StatusOr<TableSchema> Create(
      std::vector<ColumnSpec> columns,
      std::optional<std::string> target_column = std::nullopt);

  // Parses the sidecar format
  // {"columns":[{"name":..,"kind":"categorical"|"continuous",
  //              "categories":[..]}],"target":"name"}.
  static absl::StatusOr<TableSchema> FromJson(const nlohmann::json& json);
  static absl::StatusOr<TableSchema> LoadJson(const std::string& path);
  nlohmann::json ToJson() const;

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const ColumnSpec& column(size_t i) const { return columns_[i]; }
  size_t num_columns() const { return columns_.size(); }
  const std::optional<std::string>& target_column() const { return target_; }

  // Index of the named column, or -1.
  int ColumnIndex(std::string_view name) const;
  std::vector<size_t> CategoricalIndices() const;
  std::vector<size_t> ContinuousIndices() const;

  friend bool operator==(const TableSchema&, const TableSchema&) = default;

 private:
  std::vector<ColumnSpec> columns_;
  std::optional<std::string> target_;
};

// A cell stores either a category index (categorical columns) or a finite
// real value (continuous columns). Labels are recovered through the schema.
using Cell = std::variant<int, double>;
using Row = std::vector<Cell>;

class DataTable {
 public:
  DataTable() = default;
  explicit DataTable(TableSchema schema) : schema_(std::move(schema)) {}

  // Validates every row against the schema.
  static absl::StatusOr<DataTable> Create(TableSchema schema,
                                          std::vector<Row> rows);

  const TableSchema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(size_t i) const { return rows_[i]; }
  size_t num_rows() const { return rows_.size(); }
  size_t num_columns() const { return schema_.num_columns(); }

  int category(size_t row, size_t col) const {
    return std::get<int>(rows_[row][col]);
  }
  double value(size_t row, size_t col) const {
    return std::get<double>(rows_[row][col]);
  }
  const std::string& label(size_t row, size_t col) const {
    return schema_.column(col).categories[category(row, col)];
  }

  // Column views.
  std::vector<int> CategoricalColumn(size_t col) const;
  std::vector<double> ContinuousColumn(size_t col) const;

  // Returns the rows at `indices` (in that order) under the same schema.
  DataTable Select(const std::vector<size_t>& indices) const;

  // Appends a row without validation; callers that build rows from encoded
  // data guarantee the invariants.
  void AppendUnchecked(Row row) { rows_.push_back(std::move(row)); }

  friend bool operator==(const DataTable&, const DataTable&) = default;

 private:
  TableSchema schema_;
  std::vector<Row> rows_;
};

// Reads an RFC-4180 CSV with a mandatory header. Header columns may appear in
// any order; cells are reordered to schema order. Errors carry row (1-based,
// data rows) and column locations.
absl::StatusOr<DataTable> LoadCsv(const std::string& path,
                                  const TableSchema& schema);
absl::StatusOr<DataTable> ParseCsv(std::string_view text,
                                   const TableSchema& schema);

// Writes `data` as CSV; continuous cells use 17 significant digits.
absl::Status SaveCsv(const DataTable& data, const std::string& path);
std::string FormatCsv(const DataTable& data);

// Random disjoint split with round(n * (1 - test_fraction)) training rows.
absl::StatusOr<std::pair<DataTable, DataTable>> TrainTestSplit(
    const DataTable& data, double test_fraction, uint64_t seed);

// Draws `n` rows so that every class of `strat_column` keeps its source
// proportion within one row (largest-remainder allocation).
absl::StatusOr<DataTable> StratifiedSubsample(const DataTable& data, size_t n,
                                              std::string_view strat_column,
                                              uint64_t seed);

}  // namespace dpcgans

#endif  // DPCGANS_DATA_TABLE_H_
