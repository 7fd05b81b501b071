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

#include "dpcgans/nn.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "dpcgans/tensor_bundle.h"

namespace dpcgans {
namespace {

constexpr uint32_t kNetFormatVersion = 1;
constexpr char kGeneratorMagic[] = "DPCGGEN";
constexpr char kDiscriminatorMagic[] = "DPCGDIS";

// PyTorch-style default: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Matrix UniformInit(Eigen::Index rows, Eigen::Index cols, size_t fan_in,
                   std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> u(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

Matrix Affine(const Matrix& x, const Matrix& w, const Matrix& b) {
  Matrix y = x * w.transpose();
  y.rowwise() += b.row(0);
  return y;
}

Matrix ColumnSums(const Matrix& m) { return m.colwise().sum(); }

// Batch normalization without the affine part. Writes the normalized values
// and per-feature inverse standard deviation.
void Normalize(const Matrix& h, NetMode mode, double eps, double momentum,
               Eigen::RowVectorXd& running_mean, Eigen::RowVectorXd& running_var,
               Matrix& xhat, Eigen::RowVectorXd& inv_std) {
  const double n = static_cast<double>(h.rows());
  if (mode == NetMode::kTrain) {
    const Eigen::RowVectorXd mean = h.colwise().mean();
    Matrix centered = h.rowwise() - mean;
    const Eigen::RowVectorXd var = centered.array().square().colwise().sum() / n;
    inv_std = (var.array() + eps).rsqrt();
    xhat = centered.array().rowwise() * inv_std.array();
    running_mean = (1.0 - momentum) * running_mean + momentum * mean;
    running_var = (1.0 - momentum) * running_var + momentum * (var * (n / (n - 1.0)));
  } else {
    inv_std = (running_var.array() + eps).rsqrt();
    xhat = (h.rowwise() - running_mean).array().rowwise() * inv_std.array();
  }
}

Matrix NormalizeBackward(const Matrix& dxhat, const Matrix& xhat,
                         const Eigen::RowVectorXd& inv_std, NetMode mode) {
  if (mode == NetMode::kEval) {
    return dxhat.array().rowwise() * inv_std.array();
  }
  const double n = static_cast<double>(dxhat.rows());
  const Eigen::RowVectorXd sum_d = dxhat.colwise().sum();
  const Eigen::RowVectorXd sum_dx = dxhat.cwiseProduct(xhat).colwise().sum();
  Matrix out = (n * dxhat).rowwise() - sum_d;
  out -= (xhat.array().rowwise() * sum_dx.array()).matrix();
  out = (out.array().rowwise() * (inv_std.array() / n)).matrix();
  return out;
}

nlohmann::json SpansToJson(const std::vector<OutputSpan>& spans) {
  nlohmann::json out = nlohmann::json::array();
  for (const OutputSpan& s : spans) {
    out.push_back({s.offset, s.width,
                   s.activation == SpanActivation::kTanh ? "tanh" : "softmax"});
  }
  return out;
}

std::vector<OutputSpan> SpansFromJson(const nlohmann::json& json) {
  std::vector<OutputSpan> spans;
  for (const auto& s : json) {
    spans.push_back({s.at(0).get<size_t>(), s.at(1).get<size_t>(),
                     s.at(2).get<std::string>() == "tanh"
                         ? SpanActivation::kTanh
                         : SpanActivation::kSoftmax});
  }
  return spans;
}

absl::Status CheckShape(const TensorBundle& bundle, const std::string& name,
                        Eigen::Index rows, Eigen::Index cols, Matrix& out) {
  const Matrix* m = bundle.Find(name);
  if (m == nullptr) {
    return absl::DataLossError(absl::StrCat("corrupt payload: missing tensor '",
                                            name, "'"));
  }
  if (m->rows() != rows || m->cols() != cols) {
    return absl::DataLossError(absl::StrCat(
        "corrupt payload: tensor '", name, "' has shape ", m->rows(), "x",
        m->cols(), ", expected ", rows, "x", cols));
  }
  out = *m;
  return absl::OkStatus();
}

}  // namespace

void GumbelSoftmax(const double* logits, const double* gumbel, size_t width,
                   double tau, double* out) {
  double mx = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < width; ++j) {
    out[j] = (logits[j] + gumbel[j]) / tau;
    mx = std::max(mx, out[j]);
  }
  double total = 0.0;
  for (size_t j = 0; j < width; ++j) {
    out[j] = std::exp(out[j] - mx);
    total += out[j];
  }
  for (size_t j = 0; j < width; ++j) out[j] /= total;
}

Matrix SampleGumbel(Eigen::Index rows, Eigen::Index cols,
                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double x = u(rng);
    while (x <= 0.0) x = u(rng);
    g.data()[i] = -std::log(-std::log(x));
  }
  return g;
}

size_t GeneratorConfig::output_dim() const {
  size_t w = 0;
  for (const OutputSpan& s : spans) w = std::max(w, s.offset + s.width);
  return w;
}

// ---------------------------------------------------------------------------
// Generator

GeneratorNet::GeneratorNet(const GeneratorConfig& config, std::mt19937_64& rng)
    : config_(config) {
  const size_t in = config.input_dim();
  const size_t h = config.hidden_dim;
  const size_t out = config.output_dim();
  w1_ = UniformInit(h, in, in, rng);
  b1_ = UniformInit(1, h, in, rng);
  w2_ = UniformInit(h, h, h, rng);
  b2_ = UniformInit(1, h, h, rng);
  w3_ = UniformInit(out, h, h, rng);
  b3_ = UniformInit(1, out, h, rng);
  gamma1_ = Matrix::Ones(1, h);
  beta1_ = Matrix::Zero(1, h);
  gamma2_ = Matrix::Ones(1, h);
  beta2_ = Matrix::Zero(1, h);
  running_mean1_ = Eigen::RowVectorXd::Zero(h);
  running_var1_ = Eigen::RowVectorXd::Ones(h);
  running_mean2_ = Eigen::RowVectorXd::Zero(h);
  running_var2_ = Eigen::RowVectorXd::Ones(h);
}

absl::StatusOr<GeneratorCache> GeneratorNet::Forward(const Matrix& input,
                                                     NetMode mode,
                                                     std::mt19937_64& rng) {
  return ForwardWithNoise(input, mode,
                          SampleGumbel(input.rows(), config_.output_dim(), rng));
}

absl::StatusOr<GeneratorCache> GeneratorNet::ForwardWithNoise(
    const Matrix& input, NetMode mode, const Matrix& gumbel) {
  if (static_cast<size_t>(input.cols()) != config_.input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("generator input width ", input.cols(), ", expected ",
                     config_.input_dim()));
  }
  if (mode == NetMode::kTrain && input.rows() < 2) {
    return absl::InvalidArgumentError(
        "batch normalization in train mode needs at least 2 rows");
  }
  const size_t out_dim = config_.output_dim();
  if (gumbel.rows() != input.rows() ||
      static_cast<size_t>(gumbel.cols()) != out_dim) {
    return absl::InvalidArgumentError("Gumbel noise shape mismatch");
  }
  GeneratorCache c;
  c.mode = mode;
  c.input = input;
  c.gumbel = gumbel;

  Matrix h = Affine(input, w1_, b1_);
  Normalize(h, mode, config_.batch_norm_eps, config_.batch_norm_momentum,
            running_mean1_, running_var1_, c.xhat1, c.inv_std1);
  c.act1 = ((c.xhat1.array().rowwise() * gamma1_.row(0).array()).rowwise() +
            beta1_.row(0).array())
               .cwiseMax(0.0);

  h = Affine(c.act1, w2_, b2_);
  Normalize(h, mode, config_.batch_norm_eps, config_.batch_norm_momentum,
            running_mean2_, running_var2_, c.xhat2, c.inv_std2);
  c.act2 = ((c.xhat2.array().rowwise() * gamma2_.row(0).array()).rowwise() +
            beta2_.row(0).array())
               .cwiseMax(0.0);

  c.logits = Affine(c.act2, w3_, b3_);
  c.output.resize(input.rows(), out_dim);
  for (const OutputSpan& s : config_.spans) {
    for (Eigen::Index r = 0; r < input.rows(); ++r) {
      if (s.activation == SpanActivation::kTanh) {
        for (size_t j = 0; j < s.width; ++j) {
          c.output(r, s.offset + j) = std::tanh(c.logits(r, s.offset + j));
        }
      } else {
        GumbelSoftmax(&c.logits(r, s.offset), &c.gumbel(r, s.offset), s.width,
                      config_.tau, &c.output(r, s.offset));
      }
    }
  }
  return c;
}

Gradients GeneratorNet::Backward(const GeneratorCache& c,
                                 const Matrix& grad_output,
                                 const Matrix& grad_logits,
                                 Matrix* grad_input) const {
  const Eigen::Index n = c.input.rows();
  Matrix dlogits = Matrix::Zero(n, c.logits.cols());
  for (const OutputSpan& s : config_.spans) {
    for (Eigen::Index r = 0; r < n; ++r) {
      if (s.activation == SpanActivation::kTanh) {
        for (size_t j = 0; j < s.width; ++j) {
          const double y = c.output(r, s.offset + j);
          dlogits(r, s.offset + j) = grad_output(r, s.offset + j) * (1.0 - y * y);
        }
      } else {
        double dot = 0.0;
        for (size_t j = 0; j < s.width; ++j) {
          dot += c.output(r, s.offset + j) * grad_output(r, s.offset + j);
        }
        for (size_t j = 0; j < s.width; ++j) {
          dlogits(r, s.offset + j) = c.output(r, s.offset + j) *
                                     (grad_output(r, s.offset + j) - dot) /
                                     config_.tau;
        }
      }
    }
  }
  if (grad_logits.size() > 0) dlogits += grad_logits;

  Gradients g(10);
  g[8] = dlogits.transpose() * c.act2;
  g[9] = ColumnSums(dlogits);

  Matrix dn = (dlogits * w3_).cwiseProduct(
      (c.act2.array() > 0.0).cast<double>().matrix());
  g[6] = ColumnSums(dn.cwiseProduct(c.xhat2));
  g[7] = ColumnSums(dn);
  Matrix dh = NormalizeBackward(dn.array().rowwise() * gamma2_.row(0).array(),
                                c.xhat2, c.inv_std2, c.mode);
  g[4] = dh.transpose() * c.act1;
  g[5] = ColumnSums(dh);

  dn = (dh * w2_).cwiseProduct((c.act1.array() > 0.0).cast<double>().matrix());
  g[2] = ColumnSums(dn.cwiseProduct(c.xhat1));
  g[3] = ColumnSums(dn);
  dh = NormalizeBackward(dn.array().rowwise() * gamma1_.row(0).array(), c.xhat1,
                         c.inv_std1, c.mode);
  g[0] = dh.transpose() * c.input;
  g[1] = ColumnSums(dh);
  if (grad_input != nullptr) *grad_input = dh * w1_;
  return g;
}

std::vector<Matrix*> GeneratorNet::Parameters() {
  return {&w1_, &b1_, &gamma1_, &beta1_, &w2_,
          &b2_, &gamma2_, &beta2_, &w3_, &b3_};
}

std::vector<const Matrix*> GeneratorNet::Parameters() const {
  return {&w1_, &b1_, &gamma1_, &beta1_, &w2_,
          &b2_, &gamma2_, &beta2_, &w3_, &b3_};
}

std::vector<std::string> GeneratorNet::ParameterNames() {
  return {"fc1.weight", "fc1.bias", "bn1.gamma", "bn1.beta", "fc2.weight",
          "fc2.bias",   "bn2.gamma", "bn2.beta", "out.weight", "out.bias"};
}

TensorBundle GeneratorNet::ToBundle() const {
  TensorBundle bundle;
  bundle.manifest = {{"kind", "generator"},
                     {"noise_dim", config_.noise_dim},
                     {"condition_dim", config_.condition_dim},
                     {"hidden_dim", config_.hidden_dim},
                     {"tau", config_.tau},
                     {"batch_norm_eps", config_.batch_norm_eps},
                     {"batch_norm_momentum", config_.batch_norm_momentum},
                     {"spans", SpansToJson(config_.spans)}};
  const std::vector<std::string> names = ParameterNames();
  const std::vector<const Matrix*> params = Parameters();
  for (size_t i = 0; i < names.size(); ++i) bundle.Add(names[i], *params[i]);
  bundle.Add("bn1.running_mean", running_mean1_);
  bundle.Add("bn1.running_var", running_var1_);
  bundle.Add("bn2.running_mean", running_mean2_);
  bundle.Add("bn2.running_var", running_var2_);
  return bundle;
}

std::string GeneratorNet::Serialize() const {
  return EncodeBundle(kGeneratorMagic, kNetFormatVersion, ToBundle());
}

absl::StatusOr<GeneratorNet> GeneratorNet::Deserialize(std::string_view bytes) {
  absl::StatusOr<TensorBundle> bundle =
      DecodeBundle(bytes, kGeneratorMagic, kNetFormatVersion);
  if (!bundle.ok()) return bundle.status();
  return FromBundle(*bundle);
}

absl::StatusOr<GeneratorNet> GeneratorNet::FromBundle(
    const TensorBundle& bundle) {
  GeneratorNet net;
  try {
    const nlohmann::json& m = bundle.manifest;
    if (m.at("kind") != "generator") {
      return absl::DataLossError("corrupt payload: not a generator");
    }
    net.config_.noise_dim = m.at("noise_dim").get<size_t>();
    net.config_.condition_dim = m.at("condition_dim").get<size_t>();
    net.config_.hidden_dim = m.at("hidden_dim").get<size_t>();
    net.config_.tau = m.at("tau").get<double>();
    net.config_.batch_norm_eps = m.at("batch_norm_eps").get<double>();
    net.config_.batch_norm_momentum = m.at("batch_norm_momentum").get<double>();
    net.config_.spans = SpansFromJson(m.at("spans"));
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(absl::StrCat("corrupt payload: ", e.what()));
  }
  const Eigen::Index in = net.config_.input_dim();
  const Eigen::Index h = net.config_.hidden_dim;
  const Eigen::Index out = net.config_.output_dim();
  const std::vector<std::string> names = ParameterNames();
  const std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes = {
      {h, in}, {1, h}, {1, h}, {1, h}, {h, h},
      {1, h},  {1, h}, {1, h}, {out, h}, {1, out}};
  std::vector<Matrix*> params = net.Parameters();
  for (size_t i = 0; i < names.size(); ++i) {
    absl::Status s = CheckShape(bundle, names[i], shapes[i].first,
                                shapes[i].second, *params[i]);
    if (!s.ok()) return s;
  }
  Matrix tmp;
  const std::vector<std::pair<std::string, Eigen::RowVectorXd*>> stats = {
      {"bn1.running_mean", &net.running_mean1_},
      {"bn1.running_var", &net.running_var1_},
      {"bn2.running_mean", &net.running_mean2_},
      {"bn2.running_var", &net.running_var2_}};
  for (const auto& [name, dest] : stats) {
    absl::Status s = CheckShape(bundle, name, 1, h, tmp);
    if (!s.ok()) return s;
    *dest = tmp.row(0);
  }
  return net;
}

// ---------------------------------------------------------------------------
// Discriminator

DiscriminatorNet::DiscriminatorNet(const DiscriminatorConfig& config,
                                   std::mt19937_64& rng)
    : config_(config) {
  const size_t in = config.input_dim();
  const size_t h = config.hidden_dim;
  w1_ = UniformInit(h, in, in, rng);
  b1_ = UniformInit(1, h, in, rng);
  w2_ = UniformInit(h, h, h, rng);
  b2_ = UniformInit(1, h, h, rng);
  w3_ = UniformInit(1, h, h, rng);
  b3_ = UniformInit(1, 1, h, rng);
}

Matrix DiscriminatorNet::Slopes(const Matrix& pre) const {
  const double slope = config_.negative_slope;
  return ((pre.array() > 0.0).cast<double>() * (1.0 - slope) + slope).matrix();
}

absl::StatusOr<DiscriminatorCache> DiscriminatorNet::Forward(
    const Matrix& packed, NetMode mode, std::mt19937_64& rng) const {
  const Eigen::Index n = packed.rows();
  const Eigen::Index h = config_.hidden_dim;
  if (mode == NetMode::kEval || config_.dropout <= 0.0) {
    return ForwardWithMasks(packed, Matrix::Ones(n, h), Matrix::Ones(n, h));
  }
  const double keep = 1.0 - config_.dropout;
  std::bernoulli_distribution bern(keep);
  Matrix m1(n, h), m2(n, h);
  for (Eigen::Index i = 0; i < m1.size(); ++i) {
    m1.data()[i] = bern(rng) ? 1.0 / keep : 0.0;
  }
  for (Eigen::Index i = 0; i < m2.size(); ++i) {
    m2.data()[i] = bern(rng) ? 1.0 / keep : 0.0;
  }
  return ForwardWithMasks(packed, m1, m2);
}

absl::StatusOr<DiscriminatorCache> DiscriminatorNet::ForwardWithMasks(
    const Matrix& packed, const Matrix& mask1, const Matrix& mask2) const {
  if (static_cast<size_t>(packed.cols()) != config_.input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("discriminator input width ", packed.cols(),
                     ", expected ", config_.input_dim()));
  }
  const Eigen::Index h = config_.hidden_dim;
  if (mask1.rows() != packed.rows() || mask1.cols() != h ||
      mask2.rows() != packed.rows() || mask2.cols() != h) {
    return absl::InvalidArgumentError("dropout mask shape mismatch");
  }
  DiscriminatorCache c;
  c.input = packed;
  c.mask1 = mask1;
  c.mask2 = mask2;
  c.pre1 = Affine(packed, w1_, b1_);
  c.out1 = c.pre1.cwiseProduct(Slopes(c.pre1)).cwiseProduct(mask1);
  c.pre2 = Affine(c.out1, w2_, b2_);
  c.out2 = c.pre2.cwiseProduct(Slopes(c.pre2)).cwiseProduct(mask2);
  c.score = Affine(c.out2, w3_, b3_);
  return c;
}

Gradients DiscriminatorNet::Backward(const DiscriminatorCache& c,
                                     const Eigen::VectorXd& grad_score,
                                     Matrix* grad_input) const {
  Gradients g(6);
  g[4] = grad_score.transpose() * c.out2;
  g[5] = Matrix::Constant(1, 1, grad_score.sum());
  Matrix d = (grad_score * w3_.row(0))
                 .cwiseProduct(c.mask2)
                 .cwiseProduct(Slopes(c.pre2));
  g[2] = d.transpose() * c.out1;
  g[3] = ColumnSums(d);
  d = (d * w2_).cwiseProduct(c.mask1).cwiseProduct(Slopes(c.pre1));
  g[0] = d.transpose() * c.input;
  g[1] = ColumnSums(d);
  if (grad_input != nullptr) *grad_input = d * w1_;
  return g;
}

Matrix DiscriminatorNet::InputGradient(const DiscriminatorCache& c) const {
  Matrix v2 = c.mask2.cwiseProduct(Slopes(c.pre2)).array().rowwise() *
              w3_.row(0).array();
  Matrix v1 = (v2 * w2_).cwiseProduct(c.mask1).cwiseProduct(Slopes(c.pre1));
  return v1 * w1_;
}

PenaltyResult DiscriminatorNet::GradientPenalty(const DiscriminatorCache& c,
                                                double lambda) const {
  const Eigen::Index n = c.input.rows();
  const Matrix d2 = c.mask2.cwiseProduct(Slopes(c.pre2));
  const Matrix d1 = c.mask1.cwiseProduct(Slopes(c.pre1));
  // Input gradient g = ((d2 * w3) w2 * d1) w1, row by row.
  const Matrix v2 = d2.array().rowwise() * w3_.row(0).array();
  const Matrix v1 = (v2 * w2_).cwiseProduct(d1);
  const Matrix grad = v1 * w1_;

  PenaltyResult result;
  result.norms = grad.rowwise().norm();
  Eigen::VectorXd coeff(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = result.norms(i);
    total += (norm - 1.0) * (norm - 1.0);
    coeff(i) = norm > 0.0 ? 2.0 * lambda * (norm - 1.0) / (norm * n) : 0.0;
  }
  result.penalty = lambda * total / static_cast<double>(n);

  // Reverse through g = v1 w1, v1 = (v2 w2) .* d1, v2 = d2 .* w3.
  const Matrix dgrad = grad.array().colwise() * coeff.array();
  result.gradients.resize(6);
  result.gradients[0] = v1.transpose() * dgrad;
  result.gradients[1] = Matrix::Zero(1, b1_.cols());
  const Matrix du1 = (dgrad * w1_.transpose()).cwiseProduct(d1);
  result.gradients[2] = v2.transpose() * du1;
  result.gradients[3] = Matrix::Zero(1, b2_.cols());
  const Matrix dv2 = du1 * w2_.transpose();
  result.gradients[4] = ColumnSums(dv2.cwiseProduct(d2));
  result.gradients[5] = Matrix::Zero(1, 1);
  return result;
}

std::vector<Matrix*> DiscriminatorNet::Parameters() {
  return {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_};
}

std::vector<const Matrix*> DiscriminatorNet::Parameters() const {
  return {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_};
}

std::vector<std::string> DiscriminatorNet::ParameterNames() {
  return {"fc1.weight", "fc1.bias", "fc2.weight",
          "fc2.bias",   "out.weight", "out.bias"};
}

TensorBundle DiscriminatorNet::ToBundle() const {
  TensorBundle bundle;
  bundle.manifest = {{"kind", "discriminator"},
                     {"row_dim", config_.row_dim},
                     {"pac", config_.pac},
                     {"hidden_dim", config_.hidden_dim},
                     {"negative_slope", config_.negative_slope},
                     {"dropout", config_.dropout}};
  const std::vector<std::string> names = ParameterNames();
  const std::vector<const Matrix*> params = Parameters();
  for (size_t i = 0; i < names.size(); ++i) bundle.Add(names[i], *params[i]);
  return bundle;
}

std::string DiscriminatorNet::Serialize() const {
  return EncodeBundle(kDiscriminatorMagic, kNetFormatVersion, ToBundle());
}

absl::StatusOr<DiscriminatorNet> DiscriminatorNet::Deserialize(
    std::string_view bytes) {
  absl::StatusOr<TensorBundle> bundle =
      DecodeBundle(bytes, kDiscriminatorMagic, kNetFormatVersion);
  if (!bundle.ok()) return bundle.status();
  return FromBundle(*bundle);
}

absl::StatusOr<DiscriminatorNet> DiscriminatorNet::FromBundle(
    const TensorBundle& bundle) {
  DiscriminatorNet net;
  try {
    const nlohmann::json& m = bundle.manifest;
    if (m.at("kind") != "discriminator") {
      return absl::DataLossError("corrupt payload: not a discriminator");
    }
    net.config_.row_dim = m.at("row_dim").get<size_t>();
    net.config_.pac = m.at("pac").get<size_t>();
    net.config_.hidden_dim = m.at("hidden_dim").get<size_t>();
    net.config_.negative_slope = m.at("negative_slope").get<double>();
    net.config_.dropout = m.at("dropout").get<double>();
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(absl::StrCat("corrupt payload: ", e.what()));
  }
  const Eigen::Index in = net.config_.input_dim();
  const Eigen::Index h = net.config_.hidden_dim;
  const std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes = {
      {h, in}, {1, h}, {h, h}, {1, h}, {1, h}, {1, 1}};
  const std::vector<std::string> names = ParameterNames();
  std::vector<Matrix*> params = net.Parameters();
  for (size_t i = 0; i < names.size(); ++i) {
    absl::Status s = CheckShape(bundle, names[i], shapes[i].first,
                                shapes[i].second, *params[i]);
    if (!s.ok()) return s;
  }
  return net;
}

// ---------------------------------------------------------------------------
// Adam

AdamState::AdamState(const std::vector<const Matrix*>& params,
                     const AdamOptions& options)
    : options_(options) {
  for (const Matrix* p : params) {
    m_.push_back(Matrix::Zero(p->rows(), p->cols()));
    v_.push_back(Matrix::Zero(p->rows(), p->cols()));
  }
}

absl::Status AdamState::Apply(const std::vector<Matrix*>& params,
                              const Gradients& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    return absl::InvalidArgumentError("Adam: parameter count mismatch");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i]->rows() != m_[i].rows() || params[i]->cols() != m_[i].cols() ||
        grads[i].rows() != m_[i].rows() || grads[i].cols() != m_[i].cols()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Adam: shape mismatch for tensor ", i));
    }
  }
  ++step_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grads[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grads[i].cwiseProduct(grads[i]);
    params[i]->array() -=
        options_.learning_rate * (m_[i].array() / c1) /
        ((v_[i].array() / c2).sqrt() + options_.epsilon);
  }
  return absl::OkStatus();
}

Gradients ZeroGradients(const std::vector<const Matrix*>& params) {
  Gradients g;
  for (const Matrix* p : params) g.push_back(Matrix::Zero(p->rows(), p->cols()));
  return g;
}

void AddInPlace(Gradients& acc, const Gradients& other, double scale) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] += scale * other[i];
}

}  // namespace dpcgans
