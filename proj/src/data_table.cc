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

#include "dpcgans/data_table.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace dpcgans {
namespace {

std::string KindName(ColumnKind kind) {
  return kind == ColumnKind::kCategorical ? "categorical" : "continuous";
}

// Splits CSV text into records of fields. Handles quoted fields with embedded
// separators, doubled quotes and line breaks; accepts LF and CRLF.
absl::StatusOr<std::vector<std::vector<std::string>>> SplitCsv(
    std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          return absl::InvalidArgumentError(
              absl::StrCat("line ", line, ": stray quote inside field"));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_started || !field.empty() || !record.empty()) {
          record.push_back(std::move(field));
          records.push_back(std::move(record));
        }
        field.clear();
        record.clear();
        field_started = false;
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError("unterminated quoted field");
  }
  if (field_started || !field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::string QuoteField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

absl::StatusOr<double> ParseDouble(const std::string& s) {
  // Trim surrounding blanks only.
  size_t b = s.find_first_not_of(' ');
  size_t e = s.find_last_not_of(' ');
  if (b == std::string::npos) return absl::InvalidArgumentError("empty cell");
  double v = 0.0;
  const char* first = s.data() + b;
  const char* last = s.data() + e + 1;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    return absl::InvalidArgumentError(absl::StrCat("unparseable number '", s,
                                                   "'"));
  }
  if (!std::isfinite(v)) {
    return absl::InvalidArgumentError(absl::StrCat("non-finite number '", s,
                                                   "'"));
  }
  return v;
}

}  // namespace

int ColumnSpec::CategoryIndex(std::string_view label) const {
  for (size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == label) return static_cast<int>(i);
  }
  return -1;
}

absl::StatusOr<TableSchema> TableSchema::Create(
    std::vector<ColumnSpec> columns, std::optional<std::string> target_column) {
  if (columns.empty()) {
    return absl::InvalidArgumentError("schema has no columns");
  }
  std::set<std::string> names;
  for (const ColumnSpec& col : columns) {
    if (col.name.empty()) {
      return absl::InvalidArgumentError("column with empty name");
    }
    if (!names.insert(col.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column name '", col.name, "'"));
    }
    if (col.is_categorical()) {
      if (col.categories.size() < 2) {
        return absl::InvalidArgumentError(absl::StrCat(
            "categorical column '", col.name, "' needs at least 2 labels"));
      }
      std::set<std::string> labels(col.categories.begin(),
                                   col.categories.end());
      if (labels.size() != col.categories.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "categorical column '", col.name, "' has duplicate labels"));
      }
    } else if (!col.categories.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "continuous column '", col.name, "' must not list categories"));
    }
  }
  TableSchema schema;
  schema.columns_ = std::move(columns);
  if (target_column.has_value()) {
    int idx = schema.ColumnIndex(*target_column);
    if (idx < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("target column '", *target_column, "' not in schema"));
    }
    if (!schema.columns_[idx].is_categorical()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "target column '", *target_column, "' must be categorical"));
    }
    schema.target_ = std::move(target_column);
  }
  return schema;
}

absl::StatusOr<TableSchema> TableSchema::FromJson(const nlohmann::json& json) {
  if (!json.is_object() || !json.contains("columns") ||
      !json["columns"].is_array()) {
    return absl::InvalidArgumentError("schema JSON needs a 'columns' array");
  }
  std::vector<ColumnSpec> columns;
  for (const auto& entry : json["columns"]) {
    if (!entry.is_object() || !entry.contains("name") ||
        !entry["name"].is_string() || !entry.contains("kind") ||
        !entry["kind"].is_string()) {
      return absl::InvalidArgumentError(
          "each schema column needs string 'name' and 'kind'");
    }
    ColumnSpec col;
    col.name = entry["name"].get<std::string>();
    const std::string kind = entry["kind"].get<std::string>();
    if (kind == "categorical") {
      col.kind = ColumnKind::kCategorical;
    } else if (kind == "continuous") {
      col.kind = ColumnKind::kContinuous;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("column '", col.name, "': unknown kind '", kind, "'"));
    }
    if (entry.contains("categories")) {
      if (!entry["categories"].is_array()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "column '", col.name, "': 'categories' must be an array"));
      }
      for (const auto& label : entry["categories"]) {
        if (!label.is_string()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "column '", col.name, "': category labels must be strings"));
        }
        col.categories.push_back(label.get<std::string>());
      }
    }
    columns.push_back(std::move(col));
  }
  std::optional<std::string> target;
  if (json.contains("target") && !json["target"].is_null()) {
    if (!json["target"].is_string()) {
      return absl::InvalidArgumentError("'target' must be a string");
    }
    target = json["target"].get<std::string>();
  }
  return Create(std::move(columns), std::move(target));
}

absl::StatusOr<TableSchema> TableSchema::LoadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open schema '", path, "'"));
  }
  nlohmann::json json = nlohmann::json::parse(in, nullptr, false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat("schema '", path, "' is not valid JSON"));
  }
  return FromJson(json);
}

nlohmann::json TableSchema::ToJson() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const ColumnSpec& c : columns_) {
    nlohmann::json entry = {{"name", c.name}, {"kind", KindName(c.kind)}};
    if (c.is_categorical()) entry["categories"] = c.categories;
    cols.push_back(std::move(entry));
  }
  nlohmann::json out = {{"columns", std::move(cols)}};
  if (target_.has_value()) out["target"] = *target_;
  return out;
}

int TableSchema::ColumnIndex(std::string_view name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<size_t> TableSchema::CategoricalIndices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].is_categorical()) out.push_back(i);
  }
  return out;
}

std::vector<size_t> TableSchema::ContinuousIndices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (!columns_[i].is_categorical()) out.push_back(i);
  }
  return out;
}

absl::StatusOr<DataTable> DataTable::Create(TableSchema schema,
                                            std::vector<Row> rows) {
  const size_t ncols = schema.num_columns();
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != ncols) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r + 1, ": expected ", ncols, " cells, got ",
                       rows[r].size()));
    }
    for (size_t c = 0; c < ncols; ++c) {
      const ColumnSpec& spec = schema.column(c);
      if (spec.is_categorical()) {
        const int* idx = std::get_if<int>(&rows[r][c]);
        if (idx == nullptr || *idx < 0 ||
            *idx >= static_cast<int>(spec.categories.size())) {
          return absl::InvalidArgumentError(
              absl::StrCat("row ", r + 1, ", column ", spec.name,
                           ": invalid category"));
        }
      } else {
        const double* v = std::get_if<double>(&rows[r][c]);
        if (v == nullptr || !std::isfinite(*v)) {
          return absl::InvalidArgumentError(
              absl::StrCat("row ", r + 1, ", column ", spec.name,
                           ": expected a finite number"));
        }
      }
    }
  }
  DataTable table(std::move(schema));
  table.rows_ = std::move(rows);
  return table;
}

std::vector<int> DataTable::CategoricalColumn(size_t col) const {
  std::vector<int> out(rows_.size());
  for (size_t r = 0; r < rows_.size(); ++r) out[r] = category(r, col);
  return out;
}

std::vector<double> DataTable::ContinuousColumn(size_t col) const {
  std::vector<double> out(rows_.size());
  for (size_t r = 0; r < rows_.size(); ++r) out[r] = value(r, col);
  return out;
}

DataTable DataTable::Select(const std::vector<size_t>& indices) const {
  DataTable out(schema_);
  out.rows_.reserve(indices.size());
  for (size_t i : indices) out.rows_.push_back(rows_[i]);
  return out;
}

absl::StatusOr<DataTable> ParseCsv(std::string_view text,
                                   const TableSchema& schema) {
  absl::StatusOr<std::vector<std::vector<std::string>>> records =
      SplitCsv(text);
  if (!records.ok()) return records.status();
  if (records->empty()) {
    return absl::InvalidArgumentError("empty CSV: header row is mandatory");
  }
  const std::vector<std::string>& header = records->front();
  const size_t ncols = schema.num_columns();
  // file position of each schema column
  std::vector<int> source(ncols, -1);
  for (size_t f = 0; f < header.size(); ++f) {
    int idx = schema.ColumnIndex(header[f]);
    if (idx < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("header column '", header[f], "' not in schema"));
    }
    if (source[idx] >= 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("header repeats column '", header[f], "'"));
    }
    source[idx] = static_cast<int>(f);
  }
  for (size_t c = 0; c < ncols; ++c) {
    if (source[c] < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "missing column '", schema.column(c).name, "' in CSV header"));
    }
  }
  std::vector<Row> rows;
  rows.reserve(records->size() - 1);
  for (size_t r = 1; r < records->size(); ++r) {
    const std::vector<std::string>& rec = (*records)[r];
    if (rec.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r, ": expected ", header.size(),
                       " fields, got ", rec.size()));
    }
    Row row(ncols);
    for (size_t c = 0; c < ncols; ++c) {
      const ColumnSpec& spec = schema.column(c);
      const std::string& cell = rec[source[c]];
      if (spec.is_categorical()) {
        int idx = spec.CategoryIndex(cell);
        if (idx < 0) {
          return absl::InvalidArgumentError(
              absl::StrCat("row ", r, ", column ", spec.name,
                           ": unknown category label '", cell, "'"));
        }
        row[c] = idx;
      } else {
        absl::StatusOr<double> v = ParseDouble(cell);
        if (!v.ok()) {
          return absl::InvalidArgumentError(
              absl::StrCat("row ", r, ", column ", spec.name, ": ",
                           v.status().message()));
        }
        row[c] = *v;
      }
    }
    rows.push_back(std::move(row));
  }
  return DataTable::Create(schema, std::move(rows));
}

absl::StatusOr<DataTable> LoadCsv(const std::string& path,
                                  const TableSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<DataTable> table = ParseCsv(buffer.str(), schema);
  if (!table.ok()) {
    return absl::Status(table.status().code(),
                        absl::StrCat(path, ": ", table.status().message()));
  }
  return table;
}

std::string FormatCsv(const DataTable& data) {
  std::string out;
  const TableSchema& schema = data.schema();
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    if (c > 0) out.push_back(',');
    out += QuoteField(schema.column(c).name);
  }
  out.push_back('\n');
  for (size_t r = 0; r < data.num_rows(); ++r) {
    for (size_t c = 0; c < schema.num_columns(); ++c) {
      if (c > 0) out.push_back(',');
      if (schema.column(c).is_categorical()) {
        out += QuoteField(data.label(r, c));
      } else {
        out += FormatDouble(data.value(r, c));
      }
    }
    out.push_back('\n');
  }
  return out;
}

absl::Status SaveCsv(const DataTable& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write '", path, "'"));
  }
  out << FormatCsv(data);
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("write to '", path,
                                               "' failed"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::pair<DataTable, DataTable>> TrainTestSplit(
    const DataTable& data, double test_fraction, uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("test fraction ", test_fraction, " outside (0, 1)"));
  }
  const size_t n = data.num_rows();
  if (n < 4) {
    return absl::InvalidArgumentError("split needs at least 4 rows");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  size_t n_train = static_cast<size_t>(
      std::llround(static_cast<double>(n) * (1.0 - test_fraction)));
  n_train = std::clamp<size_t>(n_train, 1, n - 1);
  std::vector<size_t> train(order.begin(), order.begin() + n_train);
  std::vector<size_t> test(order.begin() + n_train, order.end());
  return std::make_pair(data.Select(train), data.Select(test));
}

absl::StatusOr<DataTable> StratifiedSubsample(const DataTable& data, size_t n,
                                              std::string_view strat_column,
                                              uint64_t seed) {
  const int col = data.schema().ColumnIndex(strat_column);
  if (col < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown column '", std::string(strat_column), "'"));
  }
  if (!data.schema().column(col).is_categorical()) {
    return absl::InvalidArgumentError(
        absl::StrCat("column '", std::string(strat_column), "' is not categorical"));
  }
  const size_t total = data.num_rows();
  if (n > total) {
    return absl::InvalidArgumentError(
        absl::StrCat("requested ", n, " rows from a table of ", total));
  }
  const size_t k = data.schema().column(col).categories.size();
  std::vector<std::vector<size_t>> members(k);
  for (size_t r = 0; r < total; ++r) members[data.category(r, col)].push_back(r);

  // Largest-remainder allocation keeps each class within one row of its
  // exact proportional share.
  std::vector<size_t> take(k);
  std::vector<std::pair<double, size_t>> remainders;
  size_t allocated = 0;
  for (size_t c = 0; c < k; ++c) {
    const double exact = static_cast<double>(n) *
                         static_cast<double>(members[c].size()) /
                         static_cast<double>(total);
    take[c] = static_cast<size_t>(std::floor(exact));
    allocated += take[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t i = 0; allocated < n; ++i) {
    ++take[remainders[i].second];
    ++allocated;
  }

  std::mt19937_64 rng(seed);
  std::vector<size_t> chosen;
  chosen.reserve(n);
  for (size_t c = 0; c < k; ++c) {
    std::shuffle(members[c].begin(), members[c].end(), rng);
    chosen.insert(chosen.end(), members[c].begin(),
                  members[c].begin() + take[c]);
  }
  std::shuffle(chosen.begin(), chosen.end(), rng);
  return data.Select(chosen);
}

}  // namespace dpcgans
