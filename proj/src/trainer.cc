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

#include "dpcgans/trainer.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "dpcgans/json_util.h"

namespace dpcgans {
namespace {

Matrix NormalMatrix(Eigen::Index rows, Eigen::Index cols,
                    std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

Matrix HStack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out.leftCols(a.cols()) = a;
  out.rightCols(b.cols()) = b;
  return out;
}

nlohmann::json VgmToJson(const VgmOptions& o) {
  return {{"max_components", o.max_components},
          {"weight_concentration_prior", o.weight_concentration_prior},
          {"weight_threshold", o.weight_threshold},
          {"tol", o.tol},
          {"max_iter", o.max_iter},
          {"seed", o.seed}};
}

VgmOptions VgmFromJson(const nlohmann::json& j) {
  VgmOptions o;
  o.max_components = j.at("max_components").get<int>();
  o.weight_concentration_prior = j.at("weight_concentration_prior").get<double>();
  o.weight_threshold = j.at("weight_threshold").get<double>();
  o.tol = j.at("tol").get<double>();
  o.max_iter = j.at("max_iter").get<int>();
  o.seed = j.at("seed").get<uint64_t>();
  return o;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration and history

absl::Status TrainingConfig::Validate() const {
  if (epochs < 1) return absl::InvalidArgumentError("epochs must be >= 1");
  if (batch_size < 1 || pac < 1) {
    return absl::InvalidArgumentError("batch size and pac must be >= 1");
  }
  if (batch_size % pac != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pac ", pac, " does not divide the batch size ", batch_size));
  }
  if (!(gradient_penalty >= 0.0)) {
    return absl::InvalidArgumentError("gradient penalty weight must be >= 0");
  }
  if (discriminator_steps < 1) {
    return absl::InvalidArgumentError("discriminator steps must be >= 1");
  }
  if (noise_dim < 1 || generator_hidden < 1 || discriminator_hidden < 1) {
    return absl::InvalidArgumentError("layer widths must be >= 1");
  }
  if (!(tau > 0.0)) return absl::InvalidArgumentError("tau must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    return absl::InvalidArgumentError("dropout must lie in [0, 1)");
  }
  if (!(conditional_weight >= 0.0)) {
    return absl::InvalidArgumentError("conditional weight must be >= 0");
  }
  if (!(adam.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning rate must be positive");
  }
  if (!(target_epsilon > 0.0)) {
    return absl::InvalidArgumentError("target epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (noise_multiplier.has_value() &&
      (!(*noise_multiplier >= 0.0) || std::isinf(*noise_multiplier))) {
    return absl::InvalidArgumentError("sigma must be finite and >= 0");
  }
  if (!(clip > 0.0)) return absl::InvalidArgumentError("clip must be positive");
  return absl::OkStatus();
}

nlohmann::json TrainingConfig::ToJson() const {
  return {{"epochs", epochs},
          {"batch_size", batch_size},
          {"gradient_penalty", gradient_penalty},
          {"discriminator_steps", discriminator_steps},
          {"pac", pac},
          {"noise_dim", noise_dim},
          {"generator_hidden", generator_hidden},
          {"discriminator_hidden", discriminator_hidden},
          {"tau", tau},
          {"negative_slope", negative_slope},
          {"dropout", dropout},
          {"conditional_weight", conditional_weight},
          {"adam",
           {{"learning_rate", adam.learning_rate},
            {"beta1", adam.beta1},
            {"beta2", adam.beta2},
            {"epsilon", adam.epsilon}}},
          {"target_epsilon", RealToJson(target_epsilon)},
          {"delta", delta},
          {"noise_multiplier", noise_multiplier.has_value()
                                   ? nlohmann::json(*noise_multiplier)
                                   : nlohmann::json("auto")},
          {"clip", clip},
          {"vgm", VgmToJson(vgm)},
          {"seed", seed}};
}

absl::StatusOr<TrainingConfig> TrainingConfig::FromJson(
    const nlohmann::json& j) {
  TrainingConfig c;
  try {
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<size_t>();
    c.gradient_penalty = j.at("gradient_penalty").get<double>();
    c.discriminator_steps = j.at("discriminator_steps").get<int>();
    c.pac = j.at("pac").get<size_t>();
    c.noise_dim = j.at("noise_dim").get<size_t>();
    c.generator_hidden = j.at("generator_hidden").get<size_t>();
    c.discriminator_hidden = j.at("discriminator_hidden").get<size_t>();
    c.tau = j.at("tau").get<double>();
    c.negative_slope = j.at("negative_slope").get<double>();
    c.dropout = j.at("dropout").get<double>();
    c.conditional_weight = j.at("conditional_weight").get<double>();
    const nlohmann::json& a = j.at("adam");
    c.adam.learning_rate = a.at("learning_rate").get<double>();
    c.adam.beta1 = a.at("beta1").get<double>();
    c.adam.beta2 = a.at("beta2").get<double>();
    c.adam.epsilon = a.at("epsilon").get<double>();
    c.target_epsilon = RealFromJson(j.at("target_epsilon"));
    c.delta = j.at("delta").get<double>();
    if (!j.at("noise_multiplier").is_string()) {
      c.noise_multiplier = j.at("noise_multiplier").get<double>();
    }
    c.clip = j.at("clip").get<double>();
    c.vgm = VgmFromJson(j.at("vgm"));
    c.seed = j.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed training config: ", e.what()));
  }
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  return c;
}

nlohmann::json TrainingHistory::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const EpochRecord& r : records) {
    list.push_back({{"epoch", r.epoch},
                    {"discriminator_loss", r.discriminator_loss},
                    {"generator_loss", r.generator_loss},
                    {"conditional_loss", r.conditional_loss},
                    {"epsilon", RealToJson(r.epsilon)},
                    {"discriminator_updates", r.discriminator_updates},
                    {"partial", r.partial}});
  }
  return {{"epochs", std::move(list)},
          {"epochs_completed", epochs_completed},
          {"halted_by_budget", halted_by_budget},
          {"discriminator_updates", discriminator_updates},
          {"generator_updates", generator_updates}};
}

absl::StatusOr<TrainingHistory> TrainingHistory::FromJson(
    const nlohmann::json& j) {
  TrainingHistory h;
  try {
    for (const auto& r : j.at("epochs")) {
      EpochRecord rec;
      rec.epoch = r.at("epoch").get<int>();
      rec.discriminator_loss = r.at("discriminator_loss").get<double>();
      rec.generator_loss = r.at("generator_loss").get<double>();
      rec.conditional_loss = r.at("conditional_loss").get<double>();
      rec.epsilon = RealFromJson(r.at("epsilon"));
      rec.discriminator_updates = r.at("discriminator_updates").get<int64_t>();
      rec.partial = r.at("partial").get<bool>();
      h.records.push_back(rec);
    }
    h.epochs_completed = j.at("epochs_completed").get<int>();
    h.halted_by_budget = j.at("halted_by_budget").get<bool>();
    h.discriminator_updates = j.at("discriminator_updates").get<int64_t>();
    h.generator_updates = j.at("generator_updates").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed training history: ", e.what()));
  }
  return h;
}

double GanModel::Epsilon() const {
  if (!privacy.noised()) return kInfinity;
  return accountant.ToEps(privacy.delta);
}

// ---------------------------------------------------------------------------
// Losses

Matrix Pack(const Matrix& rows, size_t pac) {
  const Eigen::Index packs = rows.rows() / static_cast<Eigen::Index>(pac);
  return Eigen::Map<const Matrix>(rows.data(), packs,
                                  rows.cols() * static_cast<Eigen::Index>(pac));
}

double MaskedBceWithLogits(const Matrix& logits, const Matrix& target,
                           const Matrix& mask, Matrix* grad) {
  const double count = mask.sum();
  if (grad != nullptr) grad->setZero(logits.rows(), logits.cols());
  if (count <= 0.0) return 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double m = mask.data()[i];
    if (m == 0.0) continue;
    const double l = logits.data()[i];
    const double t = target.data()[i];
    total += m * (std::max(l, 0.0) - l * t + std::log1p(std::exp(-std::abs(l))));
    if (grad != nullptr) {
      const double sig = 1.0 / (1.0 + std::exp(-l));
      grad->data()[i] = m * (sig - t) / count;
    }
  }
  return total / count;
}

void ConditionTargets(const std::vector<ConditionVector>& conds,
                      const ConditionLayout& condition_layout,
                      const std::vector<ColumnLayout>& data_layout,
                      Matrix* mask, Matrix* target) {
  size_t width = 0;
  for (const ColumnLayout& l : data_layout) width = std::max(width, l.offset + l.width);
  mask->setZero(conds.size(), width);
  target->setZero(conds.size(), width);
  (void)condition_layout;
  for (size_t r = 0; r < conds.size(); ++r) {
    const ConditionVector& c = conds[r];
    for (const auto& [col, cat] : {std::pair{c.column_a, c.category_a},
                                   std::pair{c.column_b, c.category_b}}) {
      const ColumnLayout& seg = data_layout[col];
      mask->row(r).segment(seg.offset, seg.width).setOnes();
      (*target)(r, seg.offset + cat) = 1.0;
    }
  }
}

absl::StatusOr<DiscriminatorLoss> ComputeDiscriminatorLoss(
    GeneratorNet& generator, const DiscriminatorNet& discriminator,
    const DiscriminatorInputs& in, double lambda) {
  const Eigen::Index batch = in.real.rows();
  const size_t pac = discriminator.config().pac;
  if (batch == 0 || batch % static_cast<Eigen::Index>(pac) != 0) {
    return absl::InvalidArgumentError("batch must be a positive multiple of pac");
  }
  absl::StatusOr<GeneratorCache> gen = generator.ForwardWithNoise(
      HStack(in.noise, in.condition), NetMode::kTrain, in.gumbel);
  if (!gen.ok()) return gen.status();

  const Matrix fake = Pack(HStack(gen->output, in.condition), pac);
  const Matrix real = Pack(HStack(in.real, in.condition), pac);
  const Eigen::Index packs = fake.rows();
  Matrix mix(packs, fake.cols());
  for (Eigen::Index i = 0; i < packs; ++i) {
    const double u = in.interpolation(i);
    mix.row(i) = u * real.row(i) + (1.0 - u) * fake.row(i);
  }
  absl::StatusOr<DiscriminatorCache> cf =
      discriminator.ForwardWithMasks(fake, in.fake_mask1, in.fake_mask2);
  if (!cf.ok()) return cf.status();
  absl::StatusOr<DiscriminatorCache> cr =
      discriminator.ForwardWithMasks(real, in.real_mask1, in.real_mask2);
  if (!cr.ok()) return cr.status();
  absl::StatusOr<DiscriminatorCache> cm =
      discriminator.ForwardWithMasks(mix, in.mix_mask1, in.mix_mask2);
  if (!cm.ok()) return cm.status();

  const double mean_fake = cf->score.mean();
  const double mean_real = cr->score.mean();
  PenaltyResult pen = discriminator.GradientPenalty(*cm, lambda);

  DiscriminatorLoss out;
  out.wasserstein = mean_real - mean_fake;
  out.penalty = pen.penalty;
  out.loss = mean_fake - mean_real + pen.penalty;
  const double w = 1.0 / static_cast<double>(packs);
  out.gradients =
      discriminator.Backward(*cf, Eigen::VectorXd::Constant(packs, w));
  AddInPlace(out.gradients,
             discriminator.Backward(*cr, Eigen::VectorXd::Constant(packs, -w)));
  AddInPlace(out.gradients, pen.gradients);
  return out;
}

absl::StatusOr<GeneratorLoss> ComputeGeneratorLoss(
    GeneratorNet& generator, const DiscriminatorNet& discriminator,
    const GeneratorInputs& in, double conditional_weight) {
  const Eigen::Index batch = in.noise.rows();
  const size_t pac = discriminator.config().pac;
  if (batch == 0 || batch % static_cast<Eigen::Index>(pac) != 0) {
    return absl::InvalidArgumentError("batch must be a positive multiple of pac");
  }
  absl::StatusOr<GeneratorCache> gen = generator.ForwardWithNoise(
      HStack(in.noise, in.condition), NetMode::kTrain, in.gumbel);
  if (!gen.ok()) return gen.status();
  const Matrix rows = HStack(gen->output, in.condition);
  absl::StatusOr<DiscriminatorCache> cd =
      discriminator.ForwardWithMasks(Pack(rows, pac), in.mask1, in.mask2);
  if (!cd.ok()) return cd.status();
  const Eigen::Index packs = cd->score.rows();

  GeneratorLoss out;
  out.adversarial = -cd->score.mean();
  Matrix dpacked;
  discriminator.Backward(
      *cd, Eigen::VectorXd::Constant(packs, -1.0 / static_cast<double>(packs)),
      &dpacked);
  const Eigen::Map<const Matrix> drows(dpacked.data(), batch, rows.cols());
  const Matrix grad_output = drows.leftCols(gen->output.cols());

  Matrix dlogits;
  if (in.bce_mask.size() > 0) {
    out.conditional =
        MaskedBceWithLogits(gen->logits, in.bce_target, in.bce_mask, &dlogits);
    dlogits *= conditional_weight;
  }
  out.loss = out.adversarial + conditional_weight * out.conditional;
  out.gradients = generator.Backward(*gen, grad_output, dlogits);
  return out;
}

// ---------------------------------------------------------------------------
// Trainer

absl::StatusOr<Trainer> Trainer::Create(const DataTable& data,
                                        const TrainingConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  const size_t n = data.num_rows();
  if (n == 0) return absl::InvalidArgumentError("training data is empty");
  size_t batch = config.batch_size;
  if (n < batch) batch = (n / config.pac) * config.pac;
  if (batch < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "training needs at least ", std::max<size_t>(config.pac, 2),
        " rows for pac ", config.pac));
  }

  Trainer t;
  t.rng_.seed(config.seed);
  GanModel& m = t.model_;
  m.config = config;
  m.batch_size = batch;
  m.transform = TransformModel::Fit(data, config.vgm, config.seed);
  absl::StatusOr<EncodedMatrix> enc =
      TransformTable(data, m.transform, config.seed + 1);
  if (!enc.ok()) return enc.status();
  t.encoded_ = std::move(enc->values);
  m.conditions = PairFrequencyTable::Build(data);
  if (m.conditions.enabled()) t.matching_.emplace(data, m.conditions);

  const size_t cond_width = m.conditions.enabled() ? m.conditions.layout().width : 0;
  GeneratorConfig gc;
  gc.noise_dim = config.noise_dim;
  gc.condition_dim = cond_width;
  gc.hidden_dim = config.generator_hidden;
  gc.tau = config.tau;
  gc.spans = m.transform.output_spans();
  m.generator = GeneratorNet(gc, t.rng_);
  DiscriminatorConfig dc;
  dc.row_dim = m.transform.encoded_width() + cond_width;
  dc.pac = config.pac;
  dc.hidden_dim = config.discriminator_hidden;
  dc.negative_slope = config.negative_slope;
  dc.dropout = config.dropout;
  m.discriminator = DiscriminatorNet(dc, t.rng_);
  t.generator_adam_ = AdamState(
      static_cast<const GeneratorNet&>(m.generator).Parameters(), config.adam);
  t.discriminator_adam_ = AdamState(
      static_cast<const DiscriminatorNet&>(m.discriminator).Parameters(),
      config.adam);
  t.steps_per_epoch_ = std::max<size_t>(1, n / batch);

  m.privacy.target_epsilon = config.target_epsilon;
  m.privacy.delta = config.delta;
  m.privacy.clip = config.clip;
  m.privacy.sampling_rate = static_cast<double>(batch) / static_cast<double>(n);
  if (config.noise_multiplier.has_value()) {
    m.privacy.noise_multiplier = *config.noise_multiplier;
  } else {
    absl::StatusOr<double> sigma =
        CalibrateSigma(config.target_epsilon, config.delta,
                       t.planned_discriminator_updates(),
                       m.privacy.sampling_rate);
    if (!sigma.ok()) return sigma.status();
    m.privacy.noise_multiplier = *sigma;
  }
  if (std::isfinite(config.target_epsilon) && !m.privacy.noised()) {
    return absl::OutOfRangeError(
        "a finite epsilon needs a positive noise multiplier");
  }
  if (absl::Status s = m.privacy.Validate(); !s.ok()) return s;
  return t;
}

int64_t Trainer::planned_discriminator_updates() const {
  return static_cast<int64_t>(model_.config.epochs) *
         static_cast<int64_t>(steps_per_epoch_) *
         model_.config.discriminator_steps;
}

bool Trainer::BudgetWouldBeExceeded() const {
  const PrivacySpec& p = model_.privacy;
  if (std::isinf(p.target_epsilon)) return false;
  return model_.accountant.ProspectiveEps(p) > p.target_epsilon;
}

std::vector<ConditionVector> Trainer::SampleConditions(size_t n) {
  std::vector<ConditionVector> out;
  if (!model_.conditions.enabled()) return out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(model_.conditions.SampleTraining(rng_));
  return out;
}

Matrix Trainer::ConditionMatrix(const std::vector<ConditionVector>& conds) const {
  if (!model_.conditions.enabled()) return Matrix(model_.batch_size, 0);
  const ConditionLayout& layout = model_.conditions.layout();
  Matrix out(conds.size(), layout.width);
  for (size_t r = 0; r < conds.size(); ++r) {
    conds[r].Fill(layout, std::span<double>(&out(r, 0), layout.width));
  }
  return out;
}

Matrix Trainer::DropoutMask(size_t rows) {
  const Eigen::Index h = model_.config.discriminator_hidden;
  const double p = model_.config.dropout;
  if (p <= 0.0) return Matrix::Ones(rows, h);
  std::bernoulli_distribution keep(1.0 - p);
  Matrix m(rows, h);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = keep(rng_) ? 1.0 / (1.0 - p) : 0.0;
  }
  return m;
}

DiscriminatorInputs Trainer::SampleDiscriminatorInputs() {
  const size_t batch = model_.batch_size;
  const size_t packs = batch / model_.config.pac;
  DiscriminatorInputs in;
  const std::vector<ConditionVector> conds = SampleConditions(batch);
  in.condition = ConditionMatrix(conds);
  in.real.resize(batch, encoded_.cols());
  std::uniform_int_distribution<size_t> any_row(0, encoded_.rows() - 1);
  for (size_t r = 0; r < batch; ++r) {
    const size_t idx = conds.empty() ? any_row(rng_) : matching_->Sample(conds[r], rng_);
    in.real.row(r) = encoded_.row(idx);
  }
  in.noise = NormalMatrix(batch, model_.config.noise_dim, rng_);
  in.gumbel = SampleGumbel(batch, encoded_.cols(), rng_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  in.interpolation.resize(packs);
  for (size_t i = 0; i < packs; ++i) in.interpolation(i) = unit(rng_);
  in.fake_mask1 = DropoutMask(packs);
  in.fake_mask2 = DropoutMask(packs);
  in.real_mask1 = DropoutMask(packs);
  in.real_mask2 = DropoutMask(packs);
  in.mix_mask1 = DropoutMask(packs);
  in.mix_mask2 = DropoutMask(packs);
  return in;
}

GeneratorInputs Trainer::SampleGeneratorInputs() {
  const size_t batch = model_.batch_size;
  const size_t packs = batch / model_.config.pac;
  GeneratorInputs in;
  const std::vector<ConditionVector> conds = SampleConditions(batch);
  in.condition = ConditionMatrix(conds);
  in.noise = NormalMatrix(batch, model_.config.noise_dim, rng_);
  in.gumbel = SampleGumbel(batch, encoded_.cols(), rng_);
  in.mask1 = DropoutMask(packs);
  in.mask2 = DropoutMask(packs);
  if (!conds.empty()) {
    ConditionTargets(conds, model_.conditions.layout(),
                     model_.transform.layout(), &in.bce_mask, &in.bce_target);
  }
  return in;
}

void Trainer::Privatize(Gradients& grads) {
  const PrivacySpec& p = model_.privacy;
  std::normal_distribution<double> noise(
      0.0, p.noise_multiplier * p.gradient_bound());
  for (Matrix& g : grads) {
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      g.data()[i] = std::clamp(g.data()[i], -p.clip, p.clip) + noise(rng_);
    }
  }
}

absl::StatusOr<DiscriminatorLoss> Trainer::DiscriminatorStep() {
  if (BudgetWouldBeExceeded()) {
    return absl::ResourceExhaustedError(
        "privacy budget would be exceeded by another discriminator update");
  }
  const DiscriminatorInputs in = SampleDiscriminatorInputs();
  absl::StatusOr<DiscriminatorLoss> loss = ComputeDiscriminatorLoss(
      model_.generator, model_.discriminator, in, model_.config.gradient_penalty);
  if (!loss.ok()) return loss.status();
  if (model_.privacy.noised()) Privatize(loss->gradients);
  model_.accountant.Accumulate(model_.privacy);
  if (absl::Status s = discriminator_adam_.Apply(
          model_.discriminator.Parameters(), loss->gradients);
      !s.ok()) {
    return s;
  }
  ++model_.history.discriminator_updates;
  return loss;
}

absl::StatusOr<GeneratorStepResult> Trainer::GeneratorStep() {
  const GeneratorInputs in = SampleGeneratorInputs();
  absl::StatusOr<GeneratorLoss> loss =
      ComputeGeneratorLoss(model_.generator, model_.discriminator, in,
                           model_.config.conditional_weight);
  if (!loss.ok()) return loss.status();
  if (absl::Status s =
          generator_adam_.Apply(model_.generator.Parameters(), loss->gradients);
      !s.ok()) {
    return s;
  }
  ++model_.history.generator_updates;
  return GeneratorStepResult{loss->loss, loss->adversarial, loss->conditional};
}

absl::Status Trainer::Run() {
  TrainingHistory& h = model_.history;
  for (int epoch = h.epochs_completed; epoch < model_.config.epochs; ++epoch) {
    double d_sum = 0.0, g_sum = 0.0, c_sum = 0.0;
    int64_t d_count = 0, g_count = 0;
    bool halted = false;
    for (size_t step = 0; step < steps_per_epoch_ && !halted; ++step) {
      for (int k = 0; k < model_.config.discriminator_steps; ++k) {
        if (BudgetWouldBeExceeded()) {
          halted = true;
          break;
        }
        absl::StatusOr<DiscriminatorLoss> d = DiscriminatorStep();
        if (!d.ok()) return d.status();
        d_sum += d->loss;
        ++d_count;
      }
      if (halted) break;
      absl::StatusOr<GeneratorStepResult> g = GeneratorStep();
      if (!g.ok()) return g.status();
      g_sum += g->loss;
      c_sum += g->conditional;
      ++g_count;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.discriminator_loss = d_count > 0 ? d_sum / d_count : 0.0;
    rec.generator_loss = g_count > 0 ? g_sum / g_count : 0.0;
    rec.conditional_loss = g_count > 0 ? c_sum / g_count : 0.0;
    rec.epsilon = model_.Epsilon();
    rec.discriminator_updates = h.discriminator_updates;
    rec.partial = halted;
    h.records.push_back(rec);
    if (halted) {
      h.halted_by_budget = true;
      break;
    }
    ++h.epochs_completed;
  }
  return absl::OkStatus();
}

absl::StatusOr<GanModel> Fit(const DataTable& data,
                             const TrainingConfig& config) {
  absl::StatusOr<Trainer> trainer = Trainer::Create(data, config);
  if (!trainer.ok()) return trainer.status();
  if (absl::Status s = trainer->Run(); !s.ok()) return s;
  return std::move(trainer->mutable_model());
}

absl::StatusOr<DataTable> Generate(const GanModel& model, size_t n,
                                   uint64_t seed) {
  if (n < 1) return absl::InvalidArgumentError("row count must be >= 1");
  constexpr size_t kChunk = 1000;
  GeneratorNet generator = model.generator;
  std::mt19937_64 rng(seed);
  const size_t width = model.transform.encoded_width();
  const bool conditioned = model.conditions.enabled();
  const size_t cond_width = conditioned ? model.conditions.layout().width : 0;
  Matrix values(n, width);
  for (size_t start = 0; start < n; start += kChunk) {
    const size_t rows = std::min(kChunk, n - start);
    Matrix cond = Matrix::Zero(rows, cond_width);
    for (size_t r = 0; r < rows && conditioned; ++r) {
      model.conditions.SampleGeneration(rng).Fill(
          model.conditions.layout(), std::span<double>(&cond(r, 0), cond_width));
    }
    const Matrix z = NormalMatrix(rows, model.config.noise_dim, rng);
    absl::StatusOr<GeneratorCache> out = generator.ForwardWithNoise(
        HStack(z, cond), NetMode::kEval, SampleGumbel(rows, width, rng));
    if (!out.ok()) return out.status();
    values.middleRows(start, rows) = out->output;
  }
  return InverseTransform(values, model.transform);
}

}  // namespace dpcgans
