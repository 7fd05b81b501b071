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

#include "dpcgans/rdp_accountant.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "dpcgans/json_util.h"

namespace dpcgans {
namespace {

constexpr double kMaxSigma = 1e6;
constexpr double kSigmaRelativeWidth = 1e-9;

double LogAddExp(double a, double b) {
  if (a == -kInfinity) return b;
  if (b == -kInfinity) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

std::vector<double> PerStepVector(double q, double sigma) {
  const std::vector<double>& orders = RdpOrders();
  std::vector<double> out(orders.size());
  for (size_t i = 0; i < orders.size(); ++i) {
    out[i] = RdpPerStep(q, sigma, orders[i]);
  }
  return out;
}

}  // namespace

absl::Status PrivacySpec::Validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(target_epsilon > 0.0)) {
    return absl::InvalidArgumentError("target epsilon must be positive");
  }
  if (!(noise_multiplier >= 0.0) || std::isinf(noise_multiplier)) {
    return absl::InvalidArgumentError("noise multiplier must be finite and >= 0");
  }
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) {
    return absl::InvalidArgumentError("sampling rate must lie in (0, 1]");
  }
  if (!(clip > 0.0) || std::isinf(clip)) {
    return absl::InvalidArgumentError("clip constant must be positive");
  }
  return absl::OkStatus();
}

nlohmann::json PrivacySpec::ToJson() const {
  return {{"target_epsilon", RealToJson(target_epsilon)},
          {"delta", delta},
          {"noise_multiplier", noise_multiplier},
          {"clip", clip},
          {"gradient_bound", gradient_bound()},
          {"sampling_rate", sampling_rate}};
}

absl::StatusOr<PrivacySpec> PrivacySpec::FromJson(const nlohmann::json& json) {
  PrivacySpec spec;
  try {
    spec.target_epsilon = RealFromJson(json.at("target_epsilon"));
    spec.delta = json.at("delta").get<double>();
    spec.noise_multiplier = json.at("noise_multiplier").get<double>();
    spec.clip = json.at("clip").get<double>();
    spec.sampling_rate = json.at("sampling_rate").get<double>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed privacy spec: ", e.what()));
  }
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  return spec;
}

const std::vector<double>& RdpOrders() {
  static const std::vector<double>* orders = [] {
    auto* v = new std::vector<double>{1.25, 1.5};
    for (int a = 2; a <= 64; ++a) v->push_back(a);
    for (double a : {128.0, 256.0, 512.0, 1024.0}) v->push_back(a);
    return v;
  }();
  return *orders;
}

double LogMomentInteger(double q, double sigma, int alpha) {
  if (alpha <= 1 || q == 0.0) return 0.0;
  if (sigma == 0.0) return kInfinity;
  const double a = static_cast<double>(alpha);
  const double two_var = 2.0 * sigma * sigma;
  if (q == 1.0) return (a * a - a) / two_var;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double lg_a = std::lgamma(a + 1.0);
  double total = -kInfinity;
  for (int k = 0; k <= alpha; ++k) {
    const double kd = static_cast<double>(k);
    const double log_binom =
        lg_a - std::lgamma(kd + 1.0) - std::lgamma(a - kd + 1.0);
    const double term = log_binom + (a - kd) * log_1mq + kd * log_q +
                        (kd * kd - kd) / two_var;
    total = LogAddExp(total, term);
  }
  // The moment is >= 1; clamp round-off below zero.
  return std::max(total, 0.0);
}

double RdpPerStep(double q, double sigma, double alpha) {
  if (q == 0.0) return 0.0;
  if (sigma == 0.0) return kInfinity;
  if (q == 1.0) return alpha / (2.0 * sigma * sigma);
  const double lo = std::floor(alpha);
  const double hi = std::ceil(alpha);
  double log_a;
  if (lo == hi) {
    log_a = LogMomentInteger(q, sigma, static_cast<int>(lo));
  } else {
    const double t = alpha - lo;
    log_a = (1.0 - t) * LogMomentInteger(q, sigma, static_cast<int>(lo)) +
            t * LogMomentInteger(q, sigma, static_cast<int>(hi));
  }
  return log_a / (alpha - 1.0);
}

double EpsilonFromRdp(const std::vector<double>& orders,
                      const std::vector<double>& rdp, double delta) {
  const double log_inv_delta = -std::log(delta);
  double best = kInfinity;
  for (size_t i = 0; i < orders.size(); ++i) {
    best = std::min(best, rdp[i] + log_inv_delta / (orders[i] - 1.0));
  }
  return best;
}

AccountantState::AccountantState()
    : orders_(RdpOrders()), rdp_(orders_.size(), 0.0) {}

void AccountantState::Accumulate(const PrivacySpec& spec) {
  AccumulateSteps(spec, 1);
}

void AccountantState::AccumulateSteps(const PrivacySpec& spec, int64_t count) {
  if (count <= 0) return;
  const std::vector<double>& step = StepCost(spec);
  for (size_t i = 0; i < rdp_.size(); ++i) {
    rdp_[i] += static_cast<double>(count) * step[i];
  }
  steps_ += count;
}

double AccountantState::ToEps(double delta) const {
  return EpsilonFromRdp(orders_, rdp_, delta);
}

double AccountantState::ProspectiveEps(const PrivacySpec& spec) const {
  const std::vector<double>& step = StepCost(spec);
  std::vector<double> next(rdp_.size());
  for (size_t i = 0; i < rdp_.size(); ++i) next[i] = rdp_[i] + step[i];
  return EpsilonFromRdp(orders_, next, spec.delta);
}

const std::vector<double>& AccountantState::StepCost(
    const PrivacySpec& spec) const {
  if (spec.sampling_rate != cached_q_ ||
      spec.noise_multiplier != cached_sigma_ ||
      cached_step_.size() != orders_.size()) {
    cached_step_.resize(orders_.size());
    for (size_t i = 0; i < orders_.size(); ++i) {
      cached_step_[i] =
          RdpPerStep(spec.sampling_rate, spec.noise_multiplier, orders_[i]);
    }
    cached_q_ = spec.sampling_rate;
    cached_sigma_ = spec.noise_multiplier;
  }
  return cached_step_;
}

nlohmann::json AccountantState::ToJson() const {
  nlohmann::json rdp = nlohmann::json::array();
  for (double v : rdp_) rdp.push_back(RealToJson(v));
  return {{"orders", orders_}, {"rdp", std::move(rdp)}, {"steps", steps_}};
}

absl::StatusOr<AccountantState> AccountantState::FromJson(
    const nlohmann::json& json) {
  AccountantState state;
  try {
    state.orders_ = json.at("orders").get<std::vector<double>>();
    state.rdp_.clear();
    for (const auto& v : json.at("rdp")) state.rdp_.push_back(RealFromJson(v));
    state.steps_ = json.at("steps").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed accountant state: ", e.what()));
  }
  if (state.orders_.size() != state.rdp_.size() || state.orders_.empty()) {
    return absl::InvalidArgumentError("accountant orders/rdp length mismatch");
  }
  for (size_t i = 0; i < state.orders_.size(); ++i) {
    if (!(state.orders_[i] > 1.0) || !(state.rdp_[i] >= 0.0)) {
      return absl::InvalidArgumentError("accountant state out of range");
    }
  }
  if (state.steps_ < 0) {
    return absl::InvalidArgumentError("negative accountant step count");
  }
  return state;
}

double EpsilonAfter(double q, double sigma, int64_t steps, double delta) {
  std::vector<double> rdp = PerStepVector(q, sigma);
  for (double& v : rdp) v *= static_cast<double>(steps);
  return EpsilonFromRdp(RdpOrders(), rdp, delta);
}

absl::StatusOr<double> CalibrateSigma(double target_epsilon, double delta,
                                      int64_t steps, double q) {
  if (std::isinf(target_epsilon) && target_epsilon > 0) return 0.0;
  if (!(target_epsilon > 0.0)) {
    return absl::InvalidArgumentError("target epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (steps < 1) {
    return absl::InvalidArgumentError("planned steps must be >= 1");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    return absl::InvalidArgumentError("sampling rate must lie in (0, 1]");
  }
  auto feasible = [&](double sigma) {
    return EpsilonAfter(q, sigma, steps, delta) <= target_epsilon;
  };
  if (!feasible(kMaxSigma)) {
    return absl::OutOfRangeError(absl::StrCat(
        "epsilon ", target_epsilon, " at delta ", delta,
        " is unachievable over ", steps, " steps with sigma <= 1e6"));
  }
  double lo = 0.0;
  double hi = 1.0;
  while (!feasible(hi)) {
    lo = hi;
    hi = std::min(2.0 * hi, kMaxSigma);
  }
  while (hi - lo > kSigmaRelativeWidth * hi) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

bool BudgetExceeded(const AccountantState& state, const PrivacySpec& spec) {
  if (std::isinf(spec.target_epsilon)) return false;
  return state.ToEps(spec.delta) > spec.target_epsilon;
}

}  // namespace dpcgans
