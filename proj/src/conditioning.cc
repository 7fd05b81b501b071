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

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_cat.h"

namespace dpcgans {
namespace {

std::vector<double> Cumulative(const std::vector<double>& weights) {
  std::vector<double> cdf(weights.size());
  double total = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cdf[i] = total;
  }
  for (double& c : cdf) c /= total;
  cdf.back() = 1.0;
  return cdf;
}

size_t DrawFromCdf(const std::vector<double>& cdf, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng);
  auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
  return std::min<size_t>(it - cdf.begin(), cdf.size() - 1);
}

std::vector<double> Normalized(std::vector<double> w) {
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

void ConditionVector::Fill(const ConditionLayout& layout,
                           std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (size_t i = 0; i < layout.columns.size(); ++i) {
    if (layout.columns[i] == column_a) out[layout.offsets[i] + category_a] = 1.0;
    if (layout.columns[i] == column_b) out[layout.offsets[i] + category_b] = 1.0;
  }
}

std::vector<double> ConditionVector::Bits(const ConditionLayout& layout) const {
  std::vector<double> out(layout.width);
  Fill(layout, out);
  return out;
}

ConditionLayout MakeConditionLayout(const TableSchema& schema) {
  ConditionLayout layout;
  for (size_t c : schema.CategoricalIndices()) {
    layout.columns.push_back(c);
    layout.offsets.push_back(layout.width);
    layout.widths.push_back(schema.column(c).categories.size());
    layout.width += schema.column(c).categories.size();
  }
  return layout;
}

PairFrequencyTable PairFrequencyTable::Build(const DataTable& data) {
  PairFrequencyTable table;
  table.num_rows_ = static_cast<int64_t>(data.num_rows());
  const std::vector<size_t> cats = data.schema().CategoricalIndices();
  if (cats.size() < 2) return table;
  table.layout_ = MakeConditionLayout(data.schema());
  for (size_t i = 0; i < cats.size(); ++i) {
    for (size_t j = i + 1; j < cats.size(); ++j) {
      std::map<std::pair<int, int>, int64_t> counts;
      for (size_t r = 0; r < data.num_rows(); ++r) {
        ++counts[{data.category(r, cats[i]), data.category(r, cats[j])}];
      }
      ColumnPair pair{cats[i], cats[j], {}};
      for (const auto& [key, count] : counts) {
        pair.combos.push_back({key.first, key.second, count});
      }
      table.pairs_.push_back(std::move(pair));
    }
  }
  table.BuildSamplers();
  return table;
}

void PairFrequencyTable::BuildSamplers() {
  log_cdf_.clear();
  raw_cdf_.clear();
  for (size_t p = 0; p < pairs_.size(); ++p) {
    log_cdf_.push_back(Cumulative(TrainingProbabilities(p)));
    raw_cdf_.push_back(Cumulative(GenerationProbabilities(p)));
  }
}

std::vector<double> PairFrequencyTable::TrainingProbabilities(size_t p) const {
  std::vector<double> w;
  for (const ComboCount& c : pairs_[p].combos) {
    w.push_back(std::log1p(static_cast<double>(c.count)));
  }
  return Normalized(std::move(w));
}

std::vector<double> PairFrequencyTable::GenerationProbabilities(
    size_t p) const {
  std::vector<double> w;
  for (const ComboCount& c : pairs_[p].combos) {
    w.push_back(static_cast<double>(c.count));
  }
  return Normalized(std::move(w));
}

ConditionVector PairFrequencyTable::Sample(
    const std::vector<std::vector<double>>& cdfs, std::mt19937_64& rng) const {
  std::uniform_int_distribution<size_t> pick_pair(0, pairs_.size() - 1);
  const size_t p = pick_pair(rng);
  const size_t combo = DrawFromCdf(cdfs[p], rng);
  const ColumnPair& pair = pairs_[p];
  return {p,
          combo,
          pair.column_a,
          pair.column_b,
          pair.combos[combo].category_a,
          pair.combos[combo].category_b};
}

ConditionVector PairFrequencyTable::SampleTraining(std::mt19937_64& rng) const {
  return Sample(log_cdf_, rng);
}

ConditionVector PairFrequencyTable::SampleGeneration(
    std::mt19937_64& rng) const {
  return Sample(raw_cdf_, rng);
}

nlohmann::json PairFrequencyTable::ToJson() const {
  nlohmann::json pairs = nlohmann::json::array();
  for (const ColumnPair& p : pairs_) {
    nlohmann::json combos = nlohmann::json::array();
    for (const ComboCount& c : p.combos) {
      combos.push_back({c.category_a, c.category_b, c.count});
    }
    pairs.push_back({{"columns", {p.column_a, p.column_b}},
                     {"combos", std::move(combos)}});
  }
  return {{"num_rows", num_rows_}, {"pairs", std::move(pairs)}};
}

absl::StatusOr<PairFrequencyTable> PairFrequencyTable::FromJson(
    const nlohmann::json& json, const TableSchema& schema) {
  try {
    PairFrequencyTable table;
    table.num_rows_ = json.at("num_rows").get<int64_t>();
    const auto& pairs = json.at("pairs");
    if (!pairs.empty()) table.layout_ = MakeConditionLayout(schema);
    for (const auto& entry : pairs) {
      ColumnPair pair;
      pair.column_a = entry.at("columns").at(0).get<size_t>();
      pair.column_b = entry.at("columns").at(1).get<size_t>();
      if (pair.column_a >= schema.num_columns() ||
          pair.column_b >= schema.num_columns() ||
          !schema.column(pair.column_a).is_categorical() ||
          !schema.column(pair.column_b).is_categorical()) {
        return absl::InvalidArgumentError(
            "frequency table references a non-categorical column");
      }
      const int wa =
          static_cast<int>(schema.column(pair.column_a).categories.size());
      const int wb =
          static_cast<int>(schema.column(pair.column_b).categories.size());
      for (const auto& c : entry.at("combos")) {
        ComboCount combo{c.at(0).get<int>(), c.at(1).get<int>(),
                         c.at(2).get<int64_t>()};
        if (combo.category_a < 0 || combo.category_a >= wa ||
            combo.category_b < 0 || combo.category_b >= wb ||
            combo.count < 1) {
          return absl::InvalidArgumentError("malformed frequency entry");
        }
        pair.combos.push_back(combo);
      }
      if (pair.combos.empty()) {
        return absl::InvalidArgumentError("pair without observed combinations");
      }
      table.pairs_.push_back(std::move(pair));
    }
    table.BuildSamplers();
    return table;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed frequency table: ", e.what()));
  }
}

PairFrequencyTable BuildFrequencyTable(const DataTable& data) {
  return PairFrequencyTable::Build(data);
}

ConditionVector SampleConditionPair(const PairFrequencyTable& table,
                                    std::mt19937_64& rng) {
  return table.SampleTraining(rng);
}

ConditionVector SampleGenerationCondition(const PairFrequencyTable& table,
                                          std::mt19937_64& rng) {
  return table.SampleGeneration(rng);
}

std::vector<size_t> SampleMatchingRows(const DataTable& data,
                                       const ConditionVector& cond,
                                       size_t batch, std::mt19937_64& rng) {
  std::vector<size_t> matching;
  for (size_t r = 0; r < data.num_rows(); ++r) {
    if (data.category(r, cond.column_a) == cond.category_a &&
        data.category(r, cond.column_b) == cond.category_b) {
      matching.push_back(r);
    }
  }
  std::vector<size_t> out;
  if (matching.empty()) return out;
  out.reserve(batch);
  std::uniform_int_distribution<size_t> pick(0, matching.size() - 1);
  for (size_t i = 0; i < batch; ++i) out.push_back(matching[pick(rng)]);
  return out;
}

MatchingRowIndex::MatchingRowIndex(const DataTable& data,
                                   const PairFrequencyTable& table) {
  rows_.resize(table.pairs().size());
  for (size_t p = 0; p < table.pairs().size(); ++p) {
    const ColumnPair& pair = table.pairs()[p];
    std::map<std::pair<int, int>, size_t> lookup;
    for (size_t c = 0; c < pair.combos.size(); ++c) {
      lookup[{pair.combos[c].category_a, pair.combos[c].category_b}] = c;
    }
    rows_[p].resize(pair.combos.size());
    for (size_t r = 0; r < data.num_rows(); ++r) {
      auto it = lookup.find({data.category(r, pair.column_a),
                             data.category(r, pair.column_b)});
      if (it != lookup.end()) rows_[p][it->second].push_back(r);
    }
  }
}

const std::vector<size_t>& MatchingRowIndex::Rows(
    const ConditionVector& cond) const {
  return rows_[cond.pair][cond.combo];
}

size_t MatchingRowIndex::Sample(const ConditionVector& cond,
                                std::mt19937_64& rng) const {
  const std::vector<size_t>& rows = Rows(cond);
  std::uniform_int_distribution<size_t> pick(0, rows.size() - 1);
  return rows[pick(rng)];
}

}  // namespace dpcgans
