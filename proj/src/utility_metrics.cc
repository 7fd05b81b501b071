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

#include "dpcgans/utility_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "boost/math/distributions/chi_squared.hpp"
#include "dpcgans/json_util.h"

namespace dpcgans {
namespace {

std::vector<double> Counts(std::span<const int> codes, int k) {
  std::vector<double> out(k, 0.0);
  for (int c : codes) out[c] += 1.0;
  return out;
}

std::optional<double> MeanScore(const std::vector<ColumnScore>& scores) {
  if (scores.empty()) return std::nullopt;
  double total = 0.0;
  for (const ColumnScore& s : scores) total += s.score;
  return total / scores.size();
}

nlohmann::json ScoresJson(const std::vector<ColumnScore>& scores) {
  nlohmann::json out = nlohmann::json::object();
  for (const ColumnScore& s : scores) out[s.column] = s.score;
  return out;
}

}  // namespace

double KlScoreFromCounts(std::span<const double> real,
                         std::span<const double> synth) {
  double sp = 0.0, sq = 0.0;
  for (size_t i = 0; i < real.size(); ++i) {
    sp += real[i] + kKlSmoothing;
    sq += synth[i] + kKlSmoothing;
  }
  double kl = 0.0;
  for (size_t i = 0; i < real.size(); ++i) {
    const double p = (real[i] + kKlSmoothing) / sp;
    const double q = (synth[i] + kKlSmoothing) / sq;
    kl += p * std::log(p / q);
  }
  return 1.0 / (1.0 + std::max(kl, 0.0));
}

double KlScoreCategorical(std::span<const int> real, std::span<const int> synth,
                          int num_categories) {
  const std::vector<double> p = Counts(real, num_categories);
  const std::vector<double> q = Counts(synth, num_categories);
  return KlScoreFromCounts(p, q);
}

double KlScoreContinuous(std::span<const double> real,
                         std::span<const double> synth, int bins) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : real) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : synth) lo = std::min(lo, v), hi = std::max(hi, v);
  if (!(hi > lo)) return 1.0;
  const double width = (hi - lo) / bins;
  auto histogram = [&](std::span<const double> values) {
    std::vector<double> h(bins, 0.0);
    for (double v : values) {
      const int b = std::min(bins - 1, static_cast<int>((v - lo) / width));
      h[std::max(b, 0)] += 1.0;
    }
    return h;
  };
  return KlScoreFromCounts(histogram(real), histogram(synth));
}

double ChiSquareStatistic(std::span<const int> real, std::span<const int> synth,
                          int num_categories, int* degrees_of_freedom) {
  const std::vector<double> r = Counts(real, num_categories);
  const std::vector<double> s = Counts(synth, num_categories);
  std::vector<int> used;
  for (int c = 0; c < num_categories; ++c) {
    if (r[c] > 0 || s[c] > 0) used.push_back(c);
  }
  std::vector<double> prop;
  double total = 0.0;
  for (int c : used) {
    prop.push_back(std::max(r[c] / std::max<double>(real.size(), 1.0),
                            kChiSquareFloor));
    total += prop.back();
  }
  const double n = static_cast<double>(synth.size());
  double chi2 = 0.0;
  for (size_t i = 0; i < used.size(); ++i) {
    const double expected = n * prop[i] / total;
    const double d = s[used[i]] - expected;
    if (expected > 0.0) chi2 += d * d / expected;
  }
  if (degrees_of_freedom != nullptr) {
    *degrees_of_freedom = static_cast<int>(used.size()) - 1;
  }
  return chi2;
}

double ChiSquarePValue(std::span<const int> real, std::span<const int> synth,
                       int num_categories) {
  int df = 0;
  const double chi2 = ChiSquareStatistic(real, synth, num_categories, &df);
  if (df <= 0 || synth.empty()) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

double KsStatistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : 1.0;
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / x.size() -
                             static_cast<double>(j) / y.size()));
  }
  return d;
}

double CramersV(std::span<const int> a, std::span<const int> b, int ra,
                int rb) {
  const size_t n = a.size();
  if (n == 0) return 0.0;
  Matrix table = Matrix::Zero(ra, rb);
  for (size_t i = 0; i < n; ++i) table(a[i], b[i]) += 1.0;
  const Eigen::VectorXd rows = table.rowwise().sum();
  const Eigen::RowVectorXd cols = table.colwise().sum();
  const int r = static_cast<int>((rows.array() > 0).count());
  const int c = static_cast<int>((cols.array() > 0).count());
  if (std::min(r, c) < 2) return 0.0;
  double chi2 = 0.0;
  for (int i = 0; i < ra; ++i) {
    for (int j = 0; j < rb; ++j) {
      const double e = rows(i) * cols(j) / n;
      if (e > 0.0) chi2 += (table(i, j) - e) * (table(i, j) - e) / e;
    }
  }
  const double v = std::sqrt(chi2 / (n * (std::min(r, c) - 1.0)));
  return std::min(v, 1.0);
}

double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y) {
  const size_t n = x.size();
  if (n == 0) return 0.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> MeanKlScore(const DataTable& real, const DataTable& synth,
                                  ColumnKind kind) {
  const TableSchema& schema = real.schema();
  std::vector<double> scores;
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    if (schema.column(c).kind != kind) continue;
    if (kind == ColumnKind::kCategorical) {
      scores.push_back(KlScoreCategorical(
          real.CategoricalColumn(c), synth.CategoricalColumn(c),
          static_cast<int>(schema.column(c).categories.size())));
    } else {
      scores.push_back(KlScoreContinuous(real.ContinuousColumn(c),
                                         synth.ContinuousColumn(c)));
    }
  }
  if (scores.empty()) return std::nullopt;
  return std::accumulate(scores.begin(), scores.end(), 0.0) / scores.size();
}

std::optional<double> CsScore(const DataTable& real, const DataTable& synth) {
  const TableSchema& schema = real.schema();
  std::vector<double> p;
  for (size_t c : schema.CategoricalIndices()) {
    p.push_back(ChiSquarePValue(
        real.CategoricalColumn(c), synth.CategoricalColumn(c),
        static_cast<int>(schema.column(c).categories.size())));
  }
  if (p.empty()) return std::nullopt;
  return std::accumulate(p.begin(), p.end(), 0.0) / p.size();
}

std::optional<double> KsScore(const DataTable& real, const DataTable& synth) {
  std::vector<double> s;
  for (size_t c : real.schema().ContinuousIndices()) {
    s.push_back(1.0 - KsStatistic(real.ContinuousColumn(c),
                                  synth.ContinuousColumn(c)));
  }
  if (s.empty()) return std::nullopt;
  return std::accumulate(s.begin(), s.end(), 0.0) / s.size();
}

std::optional<double> CramersVDiff(const DataTable& real,
                                   const DataTable& synth) {
  const TableSchema& schema = real.schema();
  const std::vector<size_t> cat = schema.CategoricalIndices();
  if (cat.size() < 2) return std::nullopt;
  double total = 0.0;
  int pairs = 0;
  for (size_t i = 0; i < cat.size(); ++i) {
    for (size_t j = i + 1; j < cat.size(); ++j) {
      const int ra = static_cast<int>(schema.column(cat[i]).categories.size());
      const int rb = static_cast<int>(schema.column(cat[j]).categories.size());
      const double vr = CramersV(real.CategoricalColumn(cat[i]),
                                 real.CategoricalColumn(cat[j]), ra, rb);
      const double vs = CramersV(synth.CategoricalColumn(cat[i]),
                                 synth.CategoricalColumn(cat[j]), ra, rb);
      total += std::abs(vr - vs);
      ++pairs;
    }
  }
  return total / pairs;
}

std::optional<double> PearsonDiff(const DataTable& real,
                                  const DataTable& synth) {
  const std::vector<size_t> con = real.schema().ContinuousIndices();
  if (con.size() < 2) return std::nullopt;
  double total = 0.0;
  int pairs = 0;
  for (size_t i = 0; i < con.size(); ++i) {
    for (size_t j = i + 1; j < con.size(); ++j) {
      const double cr = PearsonCorrelation(real.ContinuousColumn(con[i]),
                                           real.ContinuousColumn(con[j]));
      const double cs = PearsonCorrelation(synth.ContinuousColumn(con[i]),
                                           synth.ContinuousColumn(con[j]));
      total += std::abs(cr - cs) / 2.0;
      ++pairs;
    }
  }
  return total / pairs;
}

nlohmann::json UtilityReport::ToJson() const {
  nlohmann::json efficacy_json = nlohmann::json::array();
  for (const EfficacyEntry& e : efficacy) {
    efficacy_json.push_back({{"model", e.model},
                             {"auc", e.auc},
                             {"f1", e.f1},
                             {"real_baseline_auc", e.baseline_auc},
                             {"real_baseline_f1", e.baseline_f1}});
  }
  nlohmann::json out = {
      {"kl_categorical", {{"score", OptionalScore(kl_categorical_score)},
                          {"columns", ScoresJson(kl_categorical)}}},
      {"kl_continuous", {{"score", OptionalScore(kl_continuous_score)},
                         {"columns", ScoresJson(kl_continuous)},
                         {"bins", kKlBins}}},
      {"cs_test", {{"score", OptionalScore(cs_score)},
                   {"columns", ScoresJson(cs)},
                   {"aggregate", "mean p-value"}}},
      {"ks_test", {{"score", OptionalScore(ks_score)},
                   {"columns", ScoresJson(ks)},
                   {"aggregate", "mean of 1 - statistic"}}},
      {"cramers_v_diff", OptionalScore(cramers_v_diff)},
      {"pearson_diff", OptionalScore(pearson_diff)},
  };
  if (efficacy.empty()) {
    out["ml_efficacy"] = {{"status", kNotApplicable}, {"reason", efficacy_note}};
  } else {
    out["ml_efficacy"] = std::move(efficacy_json);
  }
  return out;
}

absl::StatusOr<UtilityReport> EvaluateUtility(
    const DataTable& real_train, const DataTable& real_test,
    const DataTable& synth, const std::optional<std::string>& target,
    uint64_t seed) {
  const TableSchema& schema = real_train.schema();
  if (!(synth.schema() == schema) || !(real_test.schema() == schema)) {
    return absl::InvalidArgumentError(
        "real and synthetic tables do not share one schema");
  }
  UtilityReport report;
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    const ColumnSpec& spec = schema.column(c);
    if (spec.is_categorical()) {
      const std::vector<int> r = real_train.CategoricalColumn(c);
      const std::vector<int> s = synth.CategoricalColumn(c);
      const int k = static_cast<int>(spec.categories.size());
      report.kl_categorical.push_back({spec.name, KlScoreCategorical(r, s, k)});
      report.cs.push_back({spec.name, ChiSquarePValue(r, s, k)});
    } else {
      const std::vector<double> r = real_train.ContinuousColumn(c);
      const std::vector<double> s = synth.ContinuousColumn(c);
      report.kl_continuous.push_back({spec.name, KlScoreContinuous(r, s)});
      report.ks.push_back({spec.name, 1.0 - KsStatistic(r, s)});
    }
  }
  report.kl_categorical_score = MeanScore(report.kl_categorical);
  report.kl_continuous_score = MeanScore(report.kl_continuous);
  report.cs_score = MeanScore(report.cs);
  report.ks_score = MeanScore(report.ks);
  report.cramers_v_diff = CramersVDiff(real_train, synth);
  report.pearson_diff = PearsonDiff(real_train, synth);

  const std::optional<std::string> tgt =
      target.has_value() ? target : schema.target_column();
  if (!tgt.has_value()) {
    report.efficacy_note = "no target column";
  } else if (synth.num_rows() != real_train.num_rows()) {
    report.efficacy_note =
        "synthetic row count differs from the real training row count";
  } else {
    absl::StatusOr<std::vector<EfficacyEntry>> e =
        MlEfficacy(real_train, real_test, synth, *tgt, seed);
    if (!e.ok()) return e.status();
    report.efficacy = *std::move(e);
  }
  return report;
}

}  // namespace dpcgans
