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

// Dense networks for the conditional tabular GAN with hand-derived backward
// passes. All tensors are 64-bit; batches are stored one sample per row and a
// dense layer computes y = x W^T + b with W shaped (out, in).

#ifndef DPCGANS_NN_H_
#define DPCGANS_NN_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/matrix.h"
#include "dpcgans/tensor_bundle.h"
#include "dpcgans/transform.h"

namespace dpcgans {

// Gradients are stored in the same order and shapes as Parameters().
using Gradients = std::vector<Matrix>;

enum class NetMode { kTrain, kEval };

// Softmax of (logits + gumbel) / tau over one row segment.
void GumbelSoftmax(const double* logits, const double* gumbel, size_t width,
                   double tau, double* out);

// Draws standard Gumbel noise -log(-log(u)).
Matrix SampleGumbel(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

struct GeneratorConfig {
  size_t noise_dim = 128;
  size_t condition_dim = 0;
  size_t hidden_dim = 256;
  double tau = 0.2;
  double batch_norm_eps = 1e-5;
  double batch_norm_momentum = 0.1;
  std::vector<OutputSpan> spans;  // output activation layout

  size_t input_dim() const { return noise_dim + condition_dim; }
  size_t output_dim() const;
};

struct GeneratorCache {
  NetMode mode = NetMode::kTrain;
  Matrix input;
  Matrix xhat1, xhat2;            // normalized pre-activations
  Eigen::RowVectorXd inv_std1, inv_std2;
  Matrix act1, act2;              // ReLU outputs
  Matrix logits;                  // output layer pre-activation
  Matrix gumbel;                  // noise used by softmax spans
  Matrix output;                  // tanh / Gumbel-softmax output
};

// Input -> [dense, batch norm, ReLU] x 2 -> dense -> per-span tanh or
// Gumbel-softmax.
class GeneratorNet {
 public:
  GeneratorNet() = default;
  GeneratorNet(const GeneratorConfig& config, std::mt19937_64& rng);

  const GeneratorConfig& config() const { return config_; }

  // Train mode normalizes with batch statistics (needs >= 2 rows) and updates
  // the running statistics; eval mode uses the running statistics.
  absl::StatusOr<GeneratorCache> Forward(const Matrix& input, NetMode mode,
                                         std::mt19937_64& rng);
  // Same, with caller-supplied Gumbel noise (shape batch x output_dim).
  absl::StatusOr<GeneratorCache> ForwardWithNoise(const Matrix& input,
                                                  NetMode mode,
                                                  const Matrix& gumbel);

  // Reverse pass. `grad_output` is dL/d(output); `grad_logits`, if non-empty,
  // is added directly to dL/d(logits). Returns parameter gradients and writes
  // dL/d(input) when `grad_input` is non-null.
  Gradients Backward(const GeneratorCache& cache, const Matrix& grad_output,
                     const Matrix& grad_logits,
                     Matrix* grad_input = nullptr) const;

  std::vector<Matrix*> Parameters();
  std::vector<const Matrix*> Parameters() const;
  static std::vector<std::string> ParameterNames();

  const Eigen::RowVectorXd& running_mean(int layer) const {
    return layer == 0 ? running_mean1_ : running_mean2_;
  }
  const Eigen::RowVectorXd& running_var(int layer) const {
    return layer == 0 ? running_var1_ : running_var2_;
  }

  // Manifest plus named tensors; Serialize wraps this in a versioned payload.
  TensorBundle ToBundle() const;
  static absl::StatusOr<GeneratorNet> FromBundle(const TensorBundle& bundle);
  std::string Serialize() const;
  static absl::StatusOr<GeneratorNet> Deserialize(std::string_view bytes);

 private:
  GeneratorConfig config_;
  Matrix w1_, b1_, gamma1_, beta1_;
  Matrix w2_, b2_, gamma2_, beta2_;
  Matrix w3_, b3_;
  Eigen::RowVectorXd running_mean1_, running_var1_;
  Eigen::RowVectorXd running_mean2_, running_var2_;
};

struct DiscriminatorConfig {
  size_t row_dim = 0;  // data width + condition width
  size_t pac = 10;
  size_t hidden_dim = 256;
  double negative_slope = 0.2;
  double dropout = 0.5;

  size_t input_dim() const { return pac * row_dim; }
};

struct DiscriminatorCache {
  Matrix input;
  Matrix pre1, pre2;    // dense outputs before LeakyReLU
  Matrix mask1, mask2;  // dropout masks, already scaled by 1/(1-p)
  Matrix out1, out2;    // after LeakyReLU and dropout
  Matrix score;         // one column
};

struct PenaltyResult {
  double penalty = 0.0;      // lambda * mean((||g|| - 1)^2)
  Eigen::VectorXd norms;     // ||g|| per pack
  Gradients gradients;       // d penalty / d parameters
};

// Packed critic: input -> [dense, LeakyReLU, dropout] x 2 -> dense(1).
class DiscriminatorNet {
 public:
  DiscriminatorNet() = default;
  DiscriminatorNet(const DiscriminatorConfig& config, std::mt19937_64& rng);

  const DiscriminatorConfig& config() const { return config_; }

  // Draws fresh dropout masks in train mode; eval mode uses no dropout.
  absl::StatusOr<DiscriminatorCache> Forward(const Matrix& packed, NetMode mode,
                                             std::mt19937_64& rng) const;
  // Forward with fixed, pre-scaled dropout masks.
  absl::StatusOr<DiscriminatorCache> ForwardWithMasks(
      const Matrix& packed, const Matrix& mask1, const Matrix& mask2) const;

  // Parameter gradients of sum_i grad_score_i * score_i; optional input
  // gradient.
  Gradients Backward(const DiscriminatorCache& cache,
                     const Eigen::VectorXd& grad_score,
                     Matrix* grad_input = nullptr) const;

  // d score_i / d input_i for every pack, using the cached activation
  // pattern and dropout masks.
  Matrix InputGradient(const DiscriminatorCache& cache) const;

  // Gradient penalty lambda * mean_i (||d score_i / d input_i|| - 1)^2 and
  // its exact parameter gradient. LeakyReLU has zero curvature off its kink,
  // so the activation pattern is held fixed.
  PenaltyResult GradientPenalty(const DiscriminatorCache& cache,
                                double lambda) const;

  std::vector<Matrix*> Parameters();
  std::vector<const Matrix*> Parameters() const;
  static std::vector<std::string> ParameterNames();

  TensorBundle ToBundle() const;
  static absl::StatusOr<DiscriminatorNet> FromBundle(const TensorBundle& bundle);
  std::string Serialize() const;
  static absl::StatusOr<DiscriminatorNet> Deserialize(std::string_view bytes);

 private:
  Matrix Slopes(const Matrix& pre) const;

  DiscriminatorConfig config_;
  Matrix w1_, b1_, w2_, b2_, w3_, b3_;
};

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.99;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;
  AdamState(const std::vector<const Matrix*>& params,
            const AdamOptions& options = {});

  const AdamOptions& options() const { return options_; }
  int64_t step() const { return step_; }
  const std::vector<Matrix>& first_moment() const { return m_; }
  const std::vector<Matrix>& second_moment() const { return v_; }

  // Bias-corrected Adam update.
  absl::Status Apply(const std::vector<Matrix*>& params,
                     const Gradients& grads);

 private:
  AdamOptions options_;
  std::vector<Matrix> m_, v_;
  int64_t step_ = 0;
};

Gradients ZeroGradients(const std::vector<const Matrix*>& params);
void AddInPlace(Gradients& acc, const Gradients& other, double scale = 1.0);

}  // namespace dpcgans

#endif  // DPCGANS_NN_H_
