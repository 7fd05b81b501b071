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

#include "dpcgans/classifiers.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "absl/strings/str_cat.h"
#include "dpcgans/nn.h"

namespace dpcgans {
namespace {

Matrix InitUniform(Eigen::Index rows, Eigen::Index cols, size_t fan_in,
                   std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<size_t>(fan_in, 1)));
  std::uniform_real_distribution<double> u(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

void SoftmaxRows(Matrix& logits) {
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double mx = logits.row(r).maxCoeff();
    logits.row(r) = (logits.row(r).array() - mx).exp();
    logits.row(r) /= logits.row(r).sum();
  }
}

std::vector<int> Argmax(const Matrix& p) {
  std::vector<int> out(p.rows());
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    Eigen::Index arg = 0;
    p.row(r).maxCoeff(&arg);
    out[r] = static_cast<int>(arg);
  }
  return out;
}

}  // namespace

FeatureEncoder FeatureEncoder::Fit(const DataTable& data, size_t target) {
  FeatureEncoder enc;
  enc.schema_ = data.schema();
  enc.target_ = target;
  const size_t n = enc.schema_.num_columns();
  enc.min_.assign(n, 0.0);
  enc.range_.assign(n, 0.0);
  for (size_t c = 0; c < n; ++c) {
    if (c == target) continue;
    const ColumnSpec& spec = enc.schema_.column(c);
    if (spec.is_categorical()) {
      enc.width_ += spec.categories.size();
      continue;
    }
    enc.width_ += 1;
    if (data.num_rows() == 0) continue;
    const std::vector<double> v = data.ContinuousColumn(c);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    enc.min_[c] = *lo;
    enc.range_[c] = *hi - *lo;
  }
  return enc;
}

Matrix FeatureEncoder::Transform(const DataTable& data) const {
  Matrix x = Matrix::Zero(data.num_rows(), width_);
  for (size_t r = 0; r < data.num_rows(); ++r) {
    size_t off = 0;
    for (size_t c = 0; c < schema_.num_columns(); ++c) {
      if (c == target_) continue;
      const ColumnSpec& spec = schema_.column(c);
      if (spec.is_categorical()) {
        x(r, off + data.category(r, c)) = 1.0;
        off += spec.categories.size();
      } else {
        x(r, off) = range_[c] > 0.0 ? (data.value(r, c) - min_[c]) / range_[c]
                                    : 0.0;
        off += 1;
      }
    }
  }
  return x;
}

nlohmann::json ClassifierOptions::ToJson() const {
  return {{"hidden", hidden},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"learning_rate", learning_rate},
          {"seed", seed}};
}

SoftmaxClassifier::SoftmaxClassifier(size_t inputs, int classes,
                                     const ClassifierOptions& options)
    : options_(options), classes_(classes) {
  std::mt19937_64 rng(options.seed);
  if (options.hidden == 0) {
    w1_ = InitUniform(classes, inputs, inputs, rng);
    b1_ = InitUniform(1, classes, inputs, rng);
  } else {
    w1_ = InitUniform(options.hidden, inputs, inputs, rng);
    b1_ = InitUniform(1, options.hidden, inputs, rng);
    w2_ = InitUniform(classes, options.hidden, options.hidden, rng);
    b2_ = InitUniform(1, classes, options.hidden, rng);
  }
}

Matrix SoftmaxClassifier::Logits(const Matrix& x, Matrix* hidden_act) const {
  Matrix h = x * w1_.transpose();
  h.rowwise() += b1_.row(0);
  if (options_.hidden == 0) return h;
  h = h.cwiseMax(0.0);
  Matrix out = h * w2_.transpose();
  out.rowwise() += b2_.row(0);
  if (hidden_act != nullptr) *hidden_act = std::move(h);
  return out;
}

void SoftmaxClassifier::Fit(const Matrix& x, std::span<const int> y) {
  const Eigen::Index n = x.rows();
  if (n == 0) return;
  std::vector<Matrix*> params = {&w1_, &b1_};
  if (options_.hidden > 0) {
    params.push_back(&w2_);
    params.push_back(&b2_);
  }
  std::vector<const Matrix*> cparams(params.begin(), params.end());
  AdamOptions adam_options;
  adam_options.learning_rate = options_.learning_rate;
  adam_options.beta1 = 0.9;
  adam_options.beta2 = 0.999;
  AdamState adam(cparams, adam_options);

  const Eigen::Index batch =
      options_.batch_size == 0
          ? n
          : std::min<Eigen::Index>(n, static_cast<Eigen::Index>(options_.batch_size));
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(options_.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int epoch = 0; epoch < options_.epochs; ++epoch) {
    if (batch < n) std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index m = std::min(batch, n - start);
      Matrix xb(m, x.cols());
      Matrix yb = Matrix::Zero(m, classes_);
      for (Eigen::Index i = 0; i < m; ++i) {
        xb.row(i) = x.row(order[start + i]);
        yb(i, y[order[start + i]]) = 1.0;
      }
      Matrix hidden;
      Matrix p = Logits(xb, &hidden);
      SoftmaxRows(p);
      const Matrix dlogits = (p - yb) / static_cast<double>(m);
      Gradients grads;
      if (options_.hidden == 0) {
        grads = {dlogits.transpose() * xb, dlogits.colwise().sum()};
      } else {
        const Matrix dh = (dlogits * w2_).cwiseProduct(
            (hidden.array() > 0.0).cast<double>().matrix());
        grads = {dh.transpose() * xb, dh.colwise().sum(),
                 dlogits.transpose() * hidden, dlogits.colwise().sum()};
      }
      // Shapes are fixed at construction, so Apply cannot fail here.
      adam.Apply(params, grads).IgnoreError();
    }
  }
}

Matrix SoftmaxClassifier::PredictProba(const Matrix& x) const {
  Matrix p = Logits(x, nullptr);
  SoftmaxRows(p);
  return p;
}

double BinaryAuc(std::span<const double> scores, std::span<const int> positive) {
  const size_t n = scores.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double npos = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * (i + j) + 1.0;  // 1-based average rank
    for (size_t k = i; k <= j; ++k) {
      if (positive[idx[k]]) {
        rank_sum += avg_rank;
        npos += 1.0;
      }
    }
    i = j + 1;
  }
  const double nneg = static_cast<double>(n) - npos;
  if (npos == 0.0 || nneg == 0.0) return 0.5;
  return (rank_sum - npos * (npos + 1.0) / 2.0) / (npos * nneg);
}

double MulticlassAuc(const Matrix& proba, std::span<const int> labels) {
  const int classes = static_cast<int>(proba.cols());
  const size_t n = labels.size();
  std::vector<double> scores(n);
  std::vector<int> pos(n);
  if (classes == 2) {
    for (size_t i = 0; i < n; ++i) {
      scores[i] = proba(i, 1);
      pos[i] = labels[i] == 1;
    }
    return BinaryAuc(scores, pos);
  }
  double total = 0.0;
  int counted = 0;
  for (int c = 0; c < classes; ++c) {
    int npos = 0;
    for (size_t i = 0; i < n; ++i) {
      scores[i] = proba(i, c);
      pos[i] = labels[i] == c;
      npos += pos[i];
    }
    if (npos == 0 || npos == static_cast<int>(n)) continue;
    total += BinaryAuc(scores, pos);
    ++counted;
  }
  return counted > 0 ? total / counted : 0.5;
}

double F1Score(std::span<const int> predicted, std::span<const int> labels,
               int classes) {
  auto f1_for = [&](int c) {
    double tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
      const bool p = predicted[i] == c;
      const bool t = labels[i] == c;
      tp += p && t;
      fp += p && !t;
      fn += !p && t;
    }
    const double denom = 2 * tp + fp + fn;
    return denom > 0 ? 2 * tp / denom : 0.0;
  };
  if (classes == 2) return f1_for(1);
  std::set<int> present(labels.begin(), labels.end());
  present.insert(predicted.begin(), predicted.end());
  double total = 0.0;
  for (int c : present) total += f1_for(c);
  return present.empty() ? 0.0 : total / present.size();
}

ClassifierOptions LogisticRegressionOptions(uint64_t seed) {
  ClassifierOptions o;
  o.hidden = 0;
  o.epochs = 500;
  o.batch_size = 0;
  o.learning_rate = 5e-2;
  o.seed = seed;
  return o;
}

ClassifierOptions MlpOptions(uint64_t seed) {
  ClassifierOptions o;
  o.hidden = 64;
  o.epochs = 50;
  o.batch_size = 128;
  o.learning_rate = 1e-3;
  o.seed = seed;
  return o;
}

absl::StatusOr<std::vector<EfficacyEntry>> MlEfficacy(
    const DataTable& real_train, const DataTable& real_test,
    const DataTable& synth, const std::string& target, uint64_t seed) {
  const TableSchema& schema = real_train.schema();
  if (!(real_test.schema() == schema) || !(synth.schema() == schema)) {
    return absl::InvalidArgumentError(
        "ML efficacy tables do not share one schema");
  }
  const int t = schema.ColumnIndex(target);
  if (t < 0 || !schema.column(t).is_categorical()) {
    return absl::InvalidArgumentError(
        absl::StrCat("target '", target, "' is not a categorical column"));
  }
  if (synth.num_rows() != real_train.num_rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "synthetic table has ", synth.num_rows(),
        " rows; ML efficacy needs the real training row count ",
        real_train.num_rows()));
  }
  const std::vector<int> y_train = real_train.CategoricalColumn(t);
  if (std::set<int>(y_train.begin(), y_train.end()).size() < 2) {
    return absl::InvalidArgumentError(
        "target has a single class in the training split");
  }
  const int classes = static_cast<int>(schema.column(t).categories.size());
  const FeatureEncoder enc = FeatureEncoder::Fit(real_train, t);
  const Matrix x_train = enc.Transform(real_train);
  const Matrix x_synth = enc.Transform(synth);
  const Matrix x_test = enc.Transform(real_test);
  const std::vector<int> y_synth = synth.CategoricalColumn(t);
  const std::vector<int> y_test = real_test.CategoricalColumn(t);

  std::vector<EfficacyEntry> out;
  const std::vector<std::pair<std::string, ClassifierOptions>> models = {
      {"logistic_regression", LogisticRegressionOptions(seed)},
      {"mlp", MlpOptions(seed)}};
  for (const auto& [name, options] : models) {
    auto score = [&](const Matrix& x, const std::vector<int>& y,
                     double* auc, double* f1) {
      SoftmaxClassifier clf(enc.width(), classes, options);
      clf.Fit(x, y);
      const Matrix p = clf.PredictProba(x_test);
      *auc = MulticlassAuc(p, y_test);
      *f1 = F1Score(Argmax(p), y_test, classes);
    };
    EfficacyEntry e;
    e.model = name;
    score(x_train, y_train, &e.baseline_auc, &e.baseline_f1);
    score(x_synth, y_synth, &e.auc, &e.f1);
    out.push_back(e);
  }
  return out;
}

}  // namespace dpcgans
