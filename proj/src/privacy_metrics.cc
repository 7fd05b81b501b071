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

#include "dpcgans/privacy_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "Eigen/QR"
#include "absl/strings/str_cat.h"
#include "dpcgans/json_util.h"

namespace dpcgans {
namespace {

absl::Status SameSchema(const DataTable& a, const DataTable& b,
                        const char* what) {
  if (!(a.schema() == b.schema())) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " does not share the real table's schema"));
  }
  return absl::OkStatus();
}

// Design matrix for least squares: intercept, drop-first one-hot for
// categorical columns, scaled continuous columns.
Matrix RegressionFeatures(const DataTable& data,
                          const std::vector<size_t>& columns,
                          const DistanceSpace& space) {
  const TableSchema& schema = data.schema();
  size_t width = 1;
  for (size_t c : columns) {
    width += schema.column(c).is_categorical()
                 ? schema.column(c).categories.size() - 1
                 : 1;
  }
  Matrix x = Matrix::Zero(data.num_rows(), width);
  for (size_t r = 0; r < data.num_rows(); ++r) {
    x(r, 0) = 1.0;
    size_t off = 1;
    for (size_t c : columns) {
      const ColumnSpec& spec = schema.column(c);
      if (spec.is_categorical()) {
        const int k = data.category(r, c);
        if (k > 0) x(r, off + k - 1) = 1.0;
        off += spec.categories.size() - 1;
      } else {
        x(r, off) = space.Scale(c, data.value(r, c));
        off += 1;
      }
    }
  }
  return x;
}

// Fraction of real rows whose `target` is predicted within tolerance.
double ContinuousHitRate(const DataTable& real, const DataTable& synth,
                         const std::vector<size_t>& known, size_t target,
                         const DistanceSpace& space, double tolerance) {
  const Matrix xs = RegressionFeatures(synth, known, space);
  Eigen::VectorXd ys(synth.num_rows());
  for (size_t r = 0; r < synth.num_rows(); ++r) ys(r) = synth.value(r, target);
  const Eigen::VectorXd beta = xs.completeOrthogonalDecomposition().solve(ys);
  const Matrix xr = RegressionFeatures(real, known, space);
  const Eigen::VectorXd pred = xr * beta;
  const double band = tolerance * space.range(target);
  int64_t hits = 0;
  for (size_t r = 0; r < real.num_rows(); ++r) {
    hits += std::abs(pred(r) - real.value(r, target)) <= band;
  }
  return static_cast<double>(hits) / real.num_rows();
}

// Mean k-NN posterior of the true class of `target`.
double CategoricalPosterior(const DataTable& real, const DataTable& synth,
                            const std::vector<size_t>& known, size_t target,
                            const DistanceSpace& space, int neighbors,
                            bool parallel) {
  const RecordBlock q = space.Encode(real, known);
  const RecordBlock r = space.Encode(synth, known);
  const std::vector<int> labels = synth.CategoricalColumn(target);
  const int classes =
      static_cast<int>(real.schema().column(target).categories.size());
  const Matrix votes =
      parallel ? KnnVotesParallel(q, r, labels, classes, neighbors)
               : KnnVotesSerial(q, r, labels, classes, neighbors);
  double total = 0.0;
  for (size_t i = 0; i < real.num_rows(); ++i) {
    total += votes(i, real.category(i, target));
  }
  return total / real.num_rows();
}

std::optional<double> Mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

DistanceSpace DistanceSpace::Fit(const std::vector<const DataTable*>& real) {
  DistanceSpace space;
  space.schema_ = real.front()->schema();
  const size_t n = space.schema_.num_columns();
  space.min_.assign(n, 0.0);
  space.range_.assign(n, 0.0);
  for (size_t c : space.schema_.ContinuousIndices()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const DataTable* t : real) {
      for (size_t r = 0; r < t->num_rows(); ++r) {
        lo = std::min(lo, t->value(r, c));
        hi = std::max(hi, t->value(r, c));
      }
    }
    if (lo > hi) lo = hi = 0.0;
    space.min_[c] = lo;
    space.range_[c] = hi - lo;
  }
  return space;
}

double DistanceSpace::Scale(size_t column, double value) const {
  if (range_[column] <= 0.0) return 0.0;
  return std::clamp((value - min_[column]) / range_[column], 0.0, 1.0);
}

RecordBlock DistanceSpace::Encode(const DataTable& data,
                                  const std::vector<size_t>& columns) const {
  std::vector<size_t> cols = columns;
  if (cols.empty()) {
    cols.resize(schema_.num_columns());
    std::iota(cols.begin(), cols.end(), size_t{0});
  }
  std::vector<size_t> cat, con;
  for (size_t c : cols) {
    (schema_.column(c).is_categorical() ? cat : con).push_back(c);
  }
  RecordBlock block;
  block.num_columns = cols.size();
  const Eigen::Index n = data.num_rows();
  block.categorical.resize(n, cat.size());
  block.continuous.resize(n, con.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (size_t k = 0; k < cat.size(); ++k) {
      block.categorical(r, k) = data.category(r, cat[k]);
    }
    for (size_t k = 0; k < con.size(); ++k) {
      block.continuous(r, k) = Scale(con[k], data.value(r, con[k]));
    }
  }
  return block;
}

double RecordDistance(const DataTable& a, size_t i, const DataTable& b,
                      size_t j, const DistanceSpace& space) {
  int hamming = 0;
  double sq = 0.0;
  const TableSchema& schema = a.schema();
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    if (schema.column(c).is_categorical()) {
      hamming += a.category(i, c) != b.category(j, c);
    } else {
      const double d = space.Scale(c, a.value(i, c)) - space.Scale(c, b.value(j, c));
      sq += d * d;
    }
  }
  return (hamming + std::sqrt(sq)) / schema.num_columns();
}

nlohmann::json IdentityReport::ToJson() const {
  return {{"threshold", threshold},
          {"true_positives", true_positives},
          {"false_positives", false_positives},
          {"true_negatives", true_negatives},
          {"false_negatives", false_negatives},
          {"precision", precision},
          {"recall", recall}};
}

absl::StatusOr<IdentityReport> IdentityDisclosure(const DataTable& train,
                                                  const DataTable& holdout,
                                                  const DataTable& synth,
                                                  double threshold,
                                                  bool parallel) {
  if (!(threshold > 0.0)) {
    return absl::InvalidArgumentError("identity threshold D must be positive");
  }
  if (absl::Status s = SameSchema(train, holdout, "holdout table"); !s.ok()) {
    return s;
  }
  if (absl::Status s = SameSchema(train, synth, "synthetic table"); !s.ok()) {
    return s;
  }
  const DistanceSpace space = DistanceSpace::Fit({&train, &holdout});
  const RecordBlock synth_block = space.Encode(synth);
  auto scan = [&](const DataTable& t) {
    const RecordBlock q = space.Encode(t);
    return parallel ? MinDistancesParallel(q, synth_block)
                    : MinDistancesSerial(q, synth_block);
  };
  IdentityReport report;
  report.threshold = threshold;
  for (double d : scan(train)) {
    (d <= threshold ? report.true_positives : report.false_negatives)++;
  }
  for (double d : scan(holdout)) {
    (d <= threshold ? report.false_positives : report.true_negatives)++;
  }
  const int64_t flagged = report.true_positives + report.false_positives;
  const int64_t members = report.true_positives + report.false_negatives;
  report.precision =
      flagged > 0 ? static_cast<double>(report.true_positives) / flagged : 0.0;
  report.recall =
      members > 0 ? static_cast<double>(report.true_positives) / members : 0.0;
  return report;
}

nlohmann::json AttributeOptions::ToJson() const {
  return {{"known_set_sizes", known_set_sizes},
          {"repetitions", repetitions},
          {"neighbors", neighbors},
          {"continuous_tolerance", continuous_tolerance},
          {"seed", seed}};
}

nlohmann::json AttributeReport::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const AttributeEntry& e : entries) {
    list.push_back({{"known_set", e.label},
                    {"known_size", e.known_size},
                    {"categorical_score", OptionalScore(e.categorical_score)},
                    {"continuous_score", OptionalScore(e.continuous_score)}});
  }
  return {{"options", options.ToJson()},
          {"entries", std::move(list)},
          {"categorical_score", OptionalScore(categorical_score)},
          {"continuous_score", OptionalScore(continuous_score)}};
}

absl::StatusOr<AttributeReport> AttributeDisclosure(
    const DataTable& real, const DataTable& synth,
    const AttributeOptions& options, bool parallel) {
  if (absl::Status s = SameSchema(real, synth, "synthetic table"); !s.ok()) {
    return s;
  }
  const size_t ncols = real.num_columns();
  if (ncols < 4) {
    return absl::InvalidArgumentError(
        "attribute disclosure needs at least 4 columns");
  }
  if (synth.num_rows() == 0 || real.num_rows() == 0) {
    return absl::InvalidArgumentError(
        "attribute disclosure needs non-empty real and synthetic tables");
  }
  if (options.repetitions < 1 || options.neighbors < 1) {
    return absl::InvalidArgumentError(
        "repetitions and neighbours must be positive");
  }
  const DistanceSpace space = DistanceSpace::Fit({&real});
  const TableSchema& schema = real.schema();
  std::mt19937_64 rng(options.seed);

  AttributeReport report;
  report.options = options;
  std::vector<double> cat_entries, con_entries;
  for (int requested : options.known_set_sizes) {
    const bool rest = requested < 0 || static_cast<size_t>(requested) >= ncols - 1;
    AttributeEntry entry;
    entry.label = requested < 0 ? "rest" : std::to_string(requested);
    entry.known_size = rest ? static_cast<int>(ncols - 1) : requested;

    // Each trial is a (known columns, target columns) split.
    std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> trials;
    if (rest) {
      for (size_t t = 0; t < ncols; ++t) {
        std::vector<size_t> known;
        for (size_t c = 0; c < ncols; ++c) {
          if (c != t) known.push_back(c);
        }
        trials.push_back({std::move(known), {t}});
      }
    } else {
      for (int rep = 0; rep < options.repetitions; ++rep) {
        std::vector<size_t> order(ncols);
        std::iota(order.begin(), order.end(), size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<size_t> known(order.begin(), order.begin() + requested);
        std::vector<size_t> targets(order.begin() + requested, order.end());
        std::sort(known.begin(), known.end());
        std::sort(targets.begin(), targets.end());
        trials.push_back({std::move(known), std::move(targets)});
      }
    }

    std::vector<double> cat_p, con_p;
    for (const auto& [known, targets] : trials) {
      for (size_t t : targets) {
        if (schema.column(t).is_categorical()) {
          cat_p.push_back(CategoricalPosterior(real, synth, known, t, space,
                                               options.neighbors, parallel));
        } else {
          con_p.push_back(ContinuousHitRate(real, synth, known, t, space,
                                            options.continuous_tolerance));
        }
      }
    }
    if (auto m = Mean(cat_p)) entry.categorical_score = 1.0 - *m;
    if (auto m = Mean(con_p)) entry.continuous_score = 1.0 - *m;
    if (entry.categorical_score) cat_entries.push_back(*entry.categorical_score);
    if (entry.continuous_score) con_entries.push_back(*entry.continuous_score);
    report.entries.push_back(std::move(entry));
  }
  report.categorical_score = Mean(cat_entries);
  report.continuous_score = Mean(con_entries);
  return report;
}

}  // namespace dpcgans
