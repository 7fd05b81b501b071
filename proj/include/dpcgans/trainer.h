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

// Differentially private conditional WGAN-GP training and sampling.
//
// The critic sees packs of `pac` rows, each row being encoded data followed by
// its condition bits. Its loss is mean D(fake) - mean D(real) plus the
// gradient penalty on per-pack interpolations. When a noise multiplier is set
// the critic gradient is clipped per coordinate to [-C_p, C_p] and perturbed
// with N(0, sigma^2 C_g^2) before the Adam step, and every such step is
// charged to the RDP accountant. The generator minimizes -mean D(fake) plus a
// BCE-with-logits penalty tying its two conditioned categorical heads to the
// condition bits.

#ifndef DPCGANS_TRAINER_H_
#define DPCGANS_TRAINER_H_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/conditioning.h"
#include "dpcgans/data_table.h"
#include "dpcgans/gaussian_mixture.h"
#include "dpcgans/matrix.h"
#include "dpcgans/nn.h"
#include "dpcgans/rdp_accountant.h"
#include "dpcgans/transform.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

struct TrainingConfig {
  int epochs = 2000;
  size_t batch_size = 500;
  double gradient_penalty = 10.0;  // lambda
  int discriminator_steps = 5;
  size_t pac = 10;
  size_t noise_dim = 128;
  size_t generator_hidden = 256;
  size_t discriminator_hidden = 256;
  double tau = 0.2;
  double negative_slope = 0.2;
  double dropout = 0.5;
  double conditional_weight = 1.0;
  AdamOptions adam;

  double target_epsilon = kInfinity;
  double delta = 1e-5;
  // Explicit sigma; calibrated from the target when unset.
  std::optional<double> noise_multiplier;
  double clip = 0.01;

  VgmOptions vgm;
  uint64_t seed = 0;

  absl::Status Validate() const;
  nlohmann::json ToJson() const;
  static absl::StatusOr<TrainingConfig> FromJson(const nlohmann::json& json);
};

struct EpochRecord {
  int epoch = 0;
  double discriminator_loss = 0.0;  // means over the epoch's updates
  double generator_loss = 0.0;
  double conditional_loss = 0.0;
  double epsilon = kInfinity;       // cumulative, after the epoch
  int64_t discriminator_updates = 0;  // cumulative
  bool partial = false;             // epoch cut short by the budget gate
};

struct TrainingHistory {
  std::vector<EpochRecord> records;
  int epochs_completed = 0;
  bool halted_by_budget = false;
  int64_t discriminator_updates = 0;
  int64_t generator_updates = 0;

  nlohmann::json ToJson() const;
  static absl::StatusOr<TrainingHistory> FromJson(const nlohmann::json& json);
};

struct GanModel {
  TrainingConfig config;
  size_t batch_size = 0;  // effective batch after shrinking to the data
  TransformModel transform;
  PairFrequencyTable conditions;
  GeneratorNet generator;
  DiscriminatorNet discriminator;
  PrivacySpec privacy;
  AccountantState accountant;
  TrainingHistory history;

  // eps recomputed from the accountant (+inf without noise).
  double Epsilon() const;
};

// Fixed randomness for one critic-loss evaluation. Masks are pre-scaled
// dropout masks, one pair per pack kind (fake, real, interpolated).
struct DiscriminatorInputs {
  Matrix real;       // batch x data width, encoded real rows
  Matrix condition;  // batch x condition width
  Matrix noise;      // batch x noise_dim
  Matrix gumbel;     // batch x data width
  Eigen::VectorXd interpolation;  // one u per pack
  Matrix fake_mask1, fake_mask2;
  Matrix real_mask1, real_mask2;
  Matrix mix_mask1, mix_mask2;
};

struct DiscriminatorLoss {
  double loss = 0.0;
  double wasserstein = 0.0;  // mean D(real) - mean D(fake)
  double penalty = 0.0;
  Gradients gradients;       // critic parameters
};

// Runs the generator in train mode (its batch-norm running statistics are
// updated) and returns the critic loss with its exact parameter gradient.
absl::StatusOr<DiscriminatorLoss> ComputeDiscriminatorLoss(
    GeneratorNet& generator, const DiscriminatorNet& discriminator,
    const DiscriminatorInputs& inputs, double lambda);

struct GeneratorInputs {
  Matrix condition;   // batch x condition width
  Matrix noise;       // batch x noise_dim
  Matrix gumbel;      // batch x data width
  Matrix mask1, mask2;  // critic dropout masks
  // Generator-output positions entering the BCE term and their targets.
  Matrix bce_mask;    // batch x data width, 1 on conditioned segments
  Matrix bce_target;  // batch x data width, the condition bits there
};

struct GeneratorLoss {
  double loss = 0.0;
  double adversarial = 0.0;  // -mean D(fake)
  double conditional = 0.0;  // mean BCE over conditioned entries
  Gradients gradients;       // generator parameters
};

absl::StatusOr<GeneratorLoss> ComputeGeneratorLoss(
    GeneratorNet& generator, const DiscriminatorNet& discriminator,
    const GeneratorInputs& inputs, double conditional_weight);

// Mean BCE-with-logits over entries where mask = 1; writes d/d(logits).
double MaskedBceWithLogits(const Matrix& logits, const Matrix& target,
                           const Matrix& mask, Matrix* grad);

// Groups consecutive `pac` rows into one packed row.
Matrix Pack(const Matrix& rows, size_t pac);

// Fills the BCE mask and target for `conds` given the data and condition
// layouts.
void ConditionTargets(const std::vector<ConditionVector>& conds,
                      const ConditionLayout& condition_layout,
                      const std::vector<ColumnLayout>& data_layout,
                      Matrix* mask, Matrix* target);

struct GeneratorStepResult {
  double loss = 0.0;
  double adversarial = 0.0;
  double conditional = 0.0;
};

class Trainer {
 public:
  // Fits the transform, builds the condition sampler, initializes both nets
  // and resolves sigma. Fails on empty data, schema problems or an
  // infeasible budget (OutOfRange).
  static absl::StatusOr<Trainer> Create(const DataTable& data,
                                        const TrainingConfig& config);

  const GanModel& model() const { return model_; }
  GanModel& mutable_model() { return model_; }
  size_t steps_per_epoch() const { return steps_per_epoch_; }
  // Discriminator updates a full run performs.
  int64_t planned_discriminator_updates() const;

  // True when one more noised update would push eps past the target.
  bool BudgetWouldBeExceeded() const;

  // One critic update. Refused with ResourceExhausted if the budget gate
  // trips. Returns the critic loss.
  absl::StatusOr<DiscriminatorLoss> DiscriminatorStep();
  absl::StatusOr<GeneratorStepResult> GeneratorStep();

  // Runs the remaining epochs, stopping before a step that would exceed the
  // budget.
  absl::Status Run();

  // Draws the randomness for one critic / generator evaluation.
  DiscriminatorInputs SampleDiscriminatorInputs();
  GeneratorInputs SampleGeneratorInputs();

  // Clips each coordinate to [-C_p, C_p] and adds N(0, sigma^2 C_g^2).
  void Privatize(Gradients& grads);

 private:
  Trainer() = default;

  std::vector<ConditionVector> SampleConditions(size_t n);
  Matrix ConditionMatrix(const std::vector<ConditionVector>& conds) const;
  Matrix DropoutMask(size_t rows);

  GanModel model_;
  Matrix encoded_;
  std::optional<MatchingRowIndex> matching_;
  AdamState generator_adam_;
  AdamState discriminator_adam_;
  std::mt19937_64 rng_;
  size_t steps_per_epoch_ = 1;
};

absl::StatusOr<GanModel> Fit(const DataTable& data,
                             const TrainingConfig& config);

// Samples n >= 1 rows: generation-time conditions, z ~ N(0, 1), eval-mode
// generator, argmax decoding.
absl::StatusOr<DataTable> Generate(const GanModel& model, size_t n,
                                   uint64_t seed);

}  // namespace dpcgans

#endif  // DPCGANS_TRAINER_H_
