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

#ifndef DPCGANS_GAUSSIAN_MIXTURE_H_
#define DPCGANS_GAUSSIAN_MIXTURE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "nlohmann/json.hpp"

namespace dpcgans {

struct VgmOptions {
  int max_components = 10;
  // Concentration of the stick-breaking Beta(1, gamma) prior.
  double weight_concentration_prior = 1e-3;
  double weight_threshold = 1e-3;
  double tol = 1e-4;
  int max_iter = 200;
  uint64_t seed = 0;
};

// A fitted one-dimensional mixture restricted to its kept components. Weights
// of the kept components are renormalized to sum to one.
struct GaussianMixtureFit {
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<double> weights;
  // Indices of the kept components among the `max_components` fitted.
  std::vector<int> kept_components;

  // Evidence lower bound after each coordinate-ascent sweep. Diagnostic only;
  // not serialized.
  std::vector<double> lower_bound_trace;

  size_t size() const { return means.size(); }

  nlohmann::json ToJson() const;
  static GaussianMixtureFit FromJson(const nlohmann::json& json);
};

// Lower bound applied to component standard deviations:
// 1e-6 * (max - min), or 1e-6 when the data range is zero.
double StdFloor(std::span<const double> values);

// Variational Bayesian Gaussian mixture with a truncated Dirichlet-process
// (stick-breaking) prior on the weights and a Normal-Gamma prior on each
// component's (mean, precision). Closed-form coordinate ascent; stops when
// the lower bound improves by less than `tol` or after `max_iter` sweeps.
//
// Constant input produces a single component at that value with the floored
// standard deviation.
GaussianMixtureFit FitVgm(std::span<const double> values,
                          const VgmOptions& options = {});

}  // namespace dpcgans

#endif  // DPCGANS_GAUSSIAN_MIXTURE_H_
