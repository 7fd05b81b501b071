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

// Small softmax classifiers for ML-efficacy scoring, trained with the Adam
// optimizer from nn.h.

#ifndef DPCGANS_CLASSIFIERS_H_
#define DPCGANS_CLASSIFIERS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/data_table.h"
#include "dpcgans/matrix.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

// One-hot categorical and min-max continuous features for every non-target
// column, with statistics taken from the table passed to Fit.
class FeatureEncoder {
 public:
  static FeatureEncoder Fit(const DataTable& data, size_t target);
  Matrix Transform(const DataTable& data) const;
  size_t width() const { return width_; }

 private:
  TableSchema schema_;
  size_t target_ = 0;
  std::vector<double> min_, range_;
  size_t width_ = 0;
};

struct ClassifierOptions {
  size_t hidden = 0;  // 0: multinomial logistic regression
  int epochs = 300;
  size_t batch_size = 0;  // 0: full batch
  double learning_rate = 1e-2;
  uint64_t seed = 0;

  nlohmann::json ToJson() const;
};

class SoftmaxClassifier {
 public:
  SoftmaxClassifier(size_t inputs, int classes, const ClassifierOptions& options);

  void Fit(const Matrix& x, std::span<const int> y);
  Matrix PredictProba(const Matrix& x) const;

 private:
  Matrix Logits(const Matrix& x, Matrix* hidden_act) const;

  ClassifierOptions options_;
  int classes_;
  Matrix w1_, b1_, w2_, b2_;  // w2_/b2_ unused without a hidden layer
};

// Rank-based (Mann-Whitney) AUC; ties get half credit. Returns 0.5 when one
// class is absent.
double BinaryAuc(std::span<const double> scores, std::span<const int> positive);
// Binary: AUC of class 1. Multiclass: one-vs-rest mean over classes that
// occur in `labels`.
double MulticlassAuc(const Matrix& proba, std::span<const int> labels);
// Binary: F1 of class 1. Multiclass: macro F1 over classes present in either
// the labels or the predictions.
double F1Score(std::span<const int> predicted, std::span<const int> labels,
               int classes);

struct EfficacyEntry {
  std::string model;
  double auc = 0.0;
  double f1 = 0.0;
  double baseline_auc = 0.0;  // same model trained on the real training split
  double baseline_f1 = 0.0;
};

// Trains logistic regression and a 64-unit MLP on real_train (baseline) and
// on synth with identical settings, scoring both on real_test.
absl::StatusOr<std::vector<EfficacyEntry>> MlEfficacy(
    const DataTable& real_train, const DataTable& real_test,
    const DataTable& synth, const std::string& target, uint64_t seed);

ClassifierOptions LogisticRegressionOptions(uint64_t seed);
ClassifierOptions MlpOptions(uint64_t seed);

}  // namespace dpcgans

#endif  // DPCGANS_CLASSIFIERS_H_
