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

#include "dpcgans/transform.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace dpcgans {

absl::StatusOr<std::vector<double>> EncodeCategorical(std::string_view label,
                                                      const ColumnSpec& spec) {
  const int idx = spec.CategoryIndex(label);
  if (idx < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "column ", spec.name, ": unknown category label '", std::string(label), "'"));
  }
  std::vector<double> out(spec.categories.size(), 0.0);
  out[idx] = 1.0;
  return out;
}

std::vector<double> ModeResponsibilities(double x,
                                         const GaussianMixtureFit& fit) {
  const size_t k = fit.size();
  std::vector<double> log_p(k);
  double mx = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < k; ++i) {
    const double z = (x - fit.means[i]) / fit.stds[i];
    log_p[i] = std::log(fit.weights[i]) - std::log(fit.stds[i]) - 0.5 * z * z;
    mx = std::max(mx, log_p[i]);
  }
  double total = 0.0;
  for (double& v : log_p) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : log_p) v /= total;
  return log_p;
}

ContinuousCode EncodeContinuous(double x, const GaussianMixtureFit& fit,
                                std::mt19937_64& rng) {
  const std::vector<double> resp = ModeResponsibilities(x, fit);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double draw = u(rng);
  int mode = static_cast<int>(resp.size()) - 1;
  for (size_t i = 0; i < resp.size(); ++i) {
    draw -= resp[i];
    if (draw < 0.0) {
      mode = static_cast<int>(i);
      break;
    }
  }
  const double scaled =
      (x - fit.means[mode]) / (kModeScale * fit.stds[mode]);
  return {std::clamp(scaled, -1.0, 1.0), mode};
}

double DecodeContinuous(double scalar, int mode,
                        const GaussianMixtureFit& fit) {
  return fit.means[mode] +
         kModeScale * fit.stds[mode] * std::clamp(scalar, -1.0, 1.0);
}

TransformModel TransformModel::Fit(const DataTable& data,
                                   const VgmOptions& options, uint64_t seed) {
  TransformModel model;
  model.schema_ = data.schema();
  const size_t ncols = data.num_columns();
  model.mixtures_.resize(ncols);
  const std::vector<size_t> continuous = data.schema().ContinuousIndices();
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < continuous.size(); ++i) {
    const size_t c = continuous[i];
    VgmOptions column_options = options;
    column_options.seed = seed + c;
    const std::vector<double> values = data.ContinuousColumn(c);
    model.mixtures_[c] = FitVgm(values, column_options);
    model.mixtures_[c].lower_bound_trace.clear();
  }
  model.BuildLayout();
  return model;
}

void TransformModel::BuildLayout() {
  layout_.clear();
  spans_.clear();
  size_t offset = 0;
  for (size_t c = 0; c < schema_.num_columns(); ++c) {
    const ColumnSpec& spec = schema_.column(c);
    if (spec.is_categorical()) {
      const size_t w = spec.categories.size();
      layout_.push_back({offset, w, true});
      spans_.push_back({offset, w, SpanActivation::kSoftmax});
      offset += w;
    } else {
      const size_t modes = mixtures_[c].size();
      layout_.push_back({offset, 1 + modes, false});
      spans_.push_back({offset, 1, SpanActivation::kTanh});
      spans_.push_back({offset + 1, modes, SpanActivation::kSoftmax});
      offset += 1 + modes;
    }
  }
  width_ = offset;
}

nlohmann::json TransformModel::ToJson() const {
  nlohmann::json columns = nlohmann::json::array();
  for (size_t c = 0; c < schema_.num_columns(); ++c) {
    nlohmann::json entry = {{"name", schema_.column(c).name}};
    if (schema_.column(c).is_categorical()) {
      entry["kind"] = "categorical";
      entry["width"] = schema_.column(c).categories.size();
    } else {
      entry["kind"] = "continuous";
      entry["mixture"] = mixtures_[c].ToJson();
    }
    columns.push_back(std::move(entry));
  }
  return {{"schema", schema_.ToJson()}, {"columns", std::move(columns)}};
}

absl::StatusOr<TransformModel> TransformModel::FromJson(
    const nlohmann::json& json) {
  try {
    absl::StatusOr<TableSchema> schema = TableSchema::FromJson(json.at("schema"));
    if (!schema.ok()) return schema.status();
    TransformModel model;
    model.schema_ = *std::move(schema);
    const nlohmann::json& columns = json.at("columns");
    if (columns.size() != model.schema_.num_columns()) {
      return absl::InvalidArgumentError("transform column count mismatch");
    }
    model.mixtures_.resize(columns.size());
    for (size_t c = 0; c < columns.size(); ++c) {
      if (model.schema_.column(c).is_categorical()) continue;
      GaussianMixtureFit fit =
          GaussianMixtureFit::FromJson(columns[c].at("mixture"));
      const size_t k = fit.means.size();
      if (k == 0 || fit.stds.size() != k || fit.weights.size() != k) {
        return absl::InvalidArgumentError(absl::StrCat(
            "column ", model.schema_.column(c).name, ": malformed mixture"));
      }
      for (double s : fit.stds) {
        if (!(s > 0.0)) {
          return absl::InvalidArgumentError("mixture std must be positive");
        }
      }
      model.mixtures_[c] = std::move(fit);
    }
    model.BuildLayout();
    return model;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed transform JSON: ", e.what()));
  }
}

absl::StatusOr<EncodedMatrix> TransformTable(const DataTable& data,
                                             const TransformModel& model,
                                             uint64_t seed) {
  if (!(data.schema() == model.schema())) {
    return absl::InvalidArgumentError(
        "table schema differs from the transform's schema");
  }
  EncodedMatrix out;
  out.layout = model.layout();
  out.values = Matrix::Zero(data.num_rows(), model.encoded_width());
  std::mt19937_64 rng(seed);
  for (size_t r = 0; r < data.num_rows(); ++r) {
    for (size_t c = 0; c < data.num_columns(); ++c) {
      const ColumnLayout& seg = model.layout()[c];
      if (seg.categorical) {
        out.values(r, seg.offset + data.category(r, c)) = 1.0;
      } else {
        const ContinuousCode code =
            EncodeContinuous(data.value(r, c), model.mixture(c), rng);
        out.values(r, seg.offset) = code.scalar;
        out.values(r, seg.offset + 1 + code.mode) = 1.0;
      }
    }
  }
  return out;
}

absl::StatusOr<DataTable> InverseTransform(const Matrix& values,
                                           const TransformModel& model) {
  if (static_cast<size_t>(values.cols()) != model.encoded_width()) {
    return absl::InvalidArgumentError(
        absl::StrCat("encoded width ", values.cols(), " does not match model "
                     "width ", model.encoded_width()));
  }
  DataTable out(model.schema());
  const size_t ncols = model.schema().num_columns();
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    Row row(ncols);
    for (size_t c = 0; c < ncols; ++c) {
      const ColumnLayout& seg = model.layout()[c];
      if (seg.categorical) {
        Eigen::Index arg = 0;
        values.row(r).segment(seg.offset, seg.width).maxCoeff(&arg);
        row[c] = static_cast<int>(arg);
      } else {
        Eigen::Index mode = 0;
        values.row(r).segment(seg.offset + 1, seg.width - 1).maxCoeff(&mode);
        row[c] = DecodeContinuous(values(r, seg.offset),
                                  static_cast<int>(mode), model.mixture(c));
      }
    }
    out.AppendUnchecked(std::move(row));
  }
  return out;
}

}  // namespace dpcgans
