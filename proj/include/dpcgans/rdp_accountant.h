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

// Renyi-DP accounting for the sampled Gaussian mechanism.
//
// Every noised discriminator update is one step of a Gaussian mechanism with
// noise multiplier sigma applied to a batch sampled at rate q. Per-step RDP is
// composed additively at a fixed grid of orders and converted to (eps, delta)
// with eps = min_alpha [RDP(alpha) + log(1/delta) / (alpha - 1)].

#ifndef DPCGANS_RDP_ACCOUNTANT_H_
#define DPCGANS_RDP_ACCOUNTANT_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PrivacySpec {
  double target_epsilon = kInfinity;
  double delta = 1e-5;
  double noise_multiplier = 0.0;  // sigma
  double clip = 0.01;             // C_p: gradient coordinates clipped to +-C_p
  double sampling_rate = 1.0;     // q = batch / rows

  // Sensitivity bound C_g of a value-clipped coordinate.
  double gradient_bound() const { return 2.0 * clip; }
  // Noise (and clipping) are active only with a positive multiplier.
  bool noised() const { return noise_multiplier > 0.0; }

  absl::Status Validate() const;
  nlohmann::json ToJson() const;
  static absl::StatusOr<PrivacySpec> FromJson(const nlohmann::json& json);
};

// The order grid: 1.25, 1.5, 2, 3, ..., 64, 128, 256, 512, 1024.
const std::vector<double>& RdpOrders();

// log A_alpha for integer alpha >= 1, the alpha-th moment of the privacy loss
// of the sampled Gaussian mechanism, by binomial expansion in log space.
double LogMomentInteger(double q, double sigma, int alpha);

// RDP of one step at order alpha. q = 1 uses alpha / (2 sigma^2); q = 0 gives
// 0; sigma = 0 (with q > 0) gives +infinity. Fractional orders interpolate
// log A linearly between the bracketing integers (log A_1 = 0).
double RdpPerStep(double q, double sigma, double alpha);

// eps = min over orders of rdp[i] + log(1/delta) / (orders[i] - 1).
double EpsilonFromRdp(const std::vector<double>& orders,
                      const std::vector<double>& rdp, double delta);

class AccountantState {
 public:
  AccountantState();

  const std::vector<double>& orders() const { return orders_; }
  const std::vector<double>& rdp() const { return rdp_; }
  int64_t steps() const { return steps_; }

  // Adds one step at (spec.sampling_rate, spec.noise_multiplier).
  void Accumulate(const PrivacySpec& spec);
  // Adds `count` identical steps.
  void AccumulateSteps(const PrivacySpec& spec, int64_t count);

  double ToEps(double delta) const;
  // eps after one more step under `spec`, without mutating the state.
  double ProspectiveEps(const PrivacySpec& spec) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<AccountantState> FromJson(const nlohmann::json& json);

 private:
  const std::vector<double>& StepCost(const PrivacySpec& spec) const;

  std::vector<double> orders_;
  std::vector<double> rdp_;
  int64_t steps_ = 0;
  // Per-step RDP for the last (q, sigma) seen; training reuses one spec for
  // every step.
  mutable double cached_q_ = -1.0;
  mutable double cached_sigma_ = -1.0;
  mutable std::vector<double> cached_step_;
};

// eps after `steps` steps at (q, sigma).
double EpsilonAfter(double q, double sigma, int64_t steps, double delta);

// Smallest sigma (bisection, relative width 1e-9) with
// EpsilonAfter(q, sigma, steps, delta) <= target. Infinite target returns 0.
// Returns OutOfRange when even sigma = 1e6 cannot meet the target.
absl::StatusOr<double> CalibrateSigma(double target_epsilon, double delta,
                                      int64_t steps, double q);

// True iff the current eps exceeds the target (never for an infinite target).
bool BudgetExceeded(const AccountantState& state, const PrivacySpec& spec);

}  // namespace dpcgans

#endif  // DPCGANS_RDP_ACCOUNTANT_H_
