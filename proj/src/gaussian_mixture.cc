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

#include "dpcgans/gaussian_mixture.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "boost/math/special_functions/digamma.hpp"

namespace dpcgans {
namespace {

using boost::math::digamma;

constexpr double kLog2Pi = 1.8378770664093454836;

// Variational factors: q(v_k) = Beta(alpha1, alpha2) for the first K-1
// sticks (the last stick is fixed at 1), q(mu_k, lambda_k) = NormalGamma(
// mean, beta, shape, rate).
struct Posterior {
  std::vector<double> alpha1, alpha2;
  std::vector<double> mean, beta, shape, rate;
};

struct Prior {
  double gamma;
  double mean;
  double beta;
  double shape;
  double rate;
};

struct StickMoments {
  std::vector<double> log_v, log_1mv;  // size K-1
  std::vector<double> log_weight;      // size K
};

StickMoments ComputeStickMoments(const Posterior& q, int k_total) {
  StickMoments s;
  s.log_v.resize(k_total - 1);
  s.log_1mv.resize(k_total - 1);
  s.log_weight.resize(k_total);
  double prefix = 0.0;
  for (int k = 0; k < k_total; ++k) {
    if (k < k_total - 1) {
      const double dsum = digamma(q.alpha1[k] + q.alpha2[k]);
      s.log_v[k] = digamma(q.alpha1[k]) - dsum;
      s.log_1mv[k] = digamma(q.alpha2[k]) - dsum;
      s.log_weight[k] = s.log_v[k] + prefix;
      prefix += s.log_1mv[k];
    } else {
      s.log_weight[k] = prefix;
    }
  }
  return s;
}

// Hard k-means assignments (k-means++ seeding, Lloyd iterations) used as the
// initial responsibilities.
std::vector<int> KMeansInit(std::span<const double> x, int k,
                            std::mt19937_64& rng) {
  const size_t n = x.size();
  std::vector<double> centers;
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  centers.push_back(x[pick(rng)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (double c : centers) best = std::min(best, (x[i] - c) * (x[i] - c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      centers.push_back(x[pick(rng)]);
      continue;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double target = u(rng);
    size_t chosen = n - 1;
    for (size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target <= 0.0) {
        chosen = i;
        break;
      }
    }
    centers.push_back(x[chosen]);
  }
  std::vector<int> label(n, 0);
  for (int iter = 0; iter < 20; ++iter) {
    bool changed = false;
    for (size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = std::abs(x[i] - centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed = changed || label[i] != best;
      label[i] = best;
    }
    std::vector<double> sum(k, 0.0);
    std::vector<double> cnt(k, 0.0);
    for (size_t i = 0; i < n; ++i) {
      sum[label[i]] += x[i];
      cnt[label[i]] += 1.0;
    }
    for (int c = 0; c < k; ++c) {
      if (cnt[c] > 0) centers[c] = sum[c] / cnt[c];
    }
    if (!changed && iter > 0) break;
  }
  return label;
}

void UpdateFactors(std::span<const double> x, const std::vector<double>& resp,
                   int k_total, const Prior& prior, Posterior& q) {
  const size_t n = x.size();
  std::vector<double> nk(k_total, 0.0), xbar(k_total, 0.0), sk(k_total, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (int k = 0; k < k_total; ++k) {
      const double r = resp[i * k_total + k];
      nk[k] += r;
      xbar[k] += r * x[i];
    }
  }
  for (int k = 0; k < k_total; ++k) {
    xbar[k] = nk[k] > 1e-12 ? xbar[k] / nk[k] : prior.mean;
  }
  for (size_t i = 0; i < n; ++i) {
    for (int k = 0; k < k_total; ++k) {
      const double d = x[i] - xbar[k];
      sk[k] += resp[i * k_total + k] * d * d;
    }
  }
  double tail = 0.0;
  for (int k = k_total - 1; k >= 0; --k) {
    if (k < k_total - 1) {
      q.alpha1[k] = 1.0 + nk[k];
      q.alpha2[k] = prior.gamma + tail;
    }
    tail += nk[k];
    q.beta[k] = prior.beta + nk[k];
    q.mean[k] = (prior.beta * prior.mean + nk[k] * xbar[k]) / q.beta[k];
    q.shape[k] = prior.shape + 0.5 * nk[k];
    const double dm = xbar[k] - prior.mean;
    q.rate[k] = prior.rate +
                0.5 * (sk[k] + prior.beta * nk[k] * dm * dm / q.beta[k]);
  }
}

// Updates responsibilities in place and returns the per-sample lower bound.
double UpdateResponsibilitiesAndBound(std::span<const double> x,
                                      int k_total, const Prior& prior,
                                      const Posterior& q,
                                      std::vector<double>& resp) {
  const size_t n = x.size();
  const StickMoments sticks = ComputeStickMoments(q, k_total);
  std::vector<double> e_log_prec(k_total), e_prec(k_total);
  for (int k = 0; k < k_total; ++k) {
    e_log_prec[k] = digamma(q.shape[k]) - std::log(q.rate[k]);
    e_prec[k] = q.shape[k] / q.rate[k];
  }
  double bound = 0.0;
  std::vector<double> log_rho(k_total);
  for (size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_total; ++k) {
      const double d = x[i] - q.mean[k];
      log_rho[k] = sticks.log_weight[k] + 0.5 * e_log_prec[k] -
                   0.5 * kLog2Pi - 0.5 * (e_prec[k] * d * d + 1.0 / q.beta[k]);
      mx = std::max(mx, log_rho[k]);
    }
    double z = 0.0;
    for (int k = 0; k < k_total; ++k) z += std::exp(log_rho[k] - mx);
    const double log_norm = mx + std::log(z);
    // sum_k r (log rho - log r) = log_norm for r = softmax(log rho).
    bound += log_norm;
    for (int k = 0; k < k_total; ++k) {
      resp[i * k_total + k] = std::exp(log_rho[k] - log_norm);
    }
  }
  const double log_gamma_prior = std::log(prior.gamma);
  for (int k = 0; k < k_total - 1; ++k) {
    const double a1 = q.alpha1[k];
    const double a2 = q.alpha2[k];
    bound += log_gamma_prior + (prior.gamma - 1.0) * sticks.log_1mv[k];
    bound -= std::lgamma(a1 + a2) - std::lgamma(a1) - std::lgamma(a2) +
             (a1 - 1.0) * sticks.log_v[k] + (a2 - 1.0) * sticks.log_1mv[k];
  }
  for (int k = 0; k < k_total; ++k) {
    const double dm = q.mean[k] - prior.mean;
    bound += 0.5 * std::log(prior.beta) - 0.5 * kLog2Pi +
             (prior.shape - 0.5) * e_log_prec[k] -
             0.5 * prior.beta * (e_prec[k] * dm * dm + 1.0 / q.beta[k]) +
             prior.shape * std::log(prior.rate) - std::lgamma(prior.shape) -
             prior.rate * e_prec[k];
    bound -= 0.5 * std::log(q.beta[k]) - 0.5 * kLog2Pi +
             (q.shape[k] - 0.5) * e_log_prec[k] - 0.5 +
             q.shape[k] * std::log(q.rate[k]) - std::lgamma(q.shape[k]) -
             q.shape[k];
  }
  return bound / static_cast<double>(n);
}

std::vector<int> OrderBySize(const std::vector<double>& resp, int k_total) {
  std::vector<double> nk(k_total, 0.0);
  for (size_t i = 0; i < resp.size(); ++i) nk[i % k_total] += resp[i];
  std::vector<int> order(k_total);
  for (int k = 0; k < k_total; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return nk[a] > nk[b]; });
  return order;
}

// Column k of the result is column order[k] of `resp`.
std::vector<double> Permute(const std::vector<double>& resp,
                            const std::vector<int>& order) {
  const size_t k_total = order.size();
  std::vector<double> out(resp.size());
  for (size_t i = 0; i < resp.size() / k_total; ++i) {
    for (size_t k = 0; k < k_total; ++k) {
      out[i * k_total + k] = resp[i * k_total + order[k]];
    }
  }
  return out;
}

}  // namespace

double StdFloor(std::span<const double> values) {
  if (values.empty()) return 1e-6;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  return 1e-6 * (range > 0.0 ? range : 1.0);
}

GaussianMixtureFit FitVgm(std::span<const double> values,
                          const VgmOptions& options) {
  GaussianMixtureFit fit;
  const double floor = StdFloor(values);
  const size_t n = values.size();
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (n == 0 || *lo == *hi) {
    fit.means = {n == 0 ? 0.0 : *lo};
    fit.stds = {floor};
    fit.weights = {1.0};
    fit.kept_components = {0};
    return fit;
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);

  // Normal-Gamma prior mirrors a Normal-Wishart with one degree of freedom
  // and the empirical variance as the covariance prior.
  const Prior prior{options.weight_concentration_prior, mean, 1.0, 0.5,
                    0.5 * var};

  size_t distinct = 1;
  {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
  }
  const int k_total = static_cast<int>(
      std::max<size_t>(1, std::min<size_t>(options.max_components, distinct)));

  std::mt19937_64 rng(options.seed);
  std::vector<double> resp(n * k_total, 0.0);
  const std::vector<int> labels = KMeansInit(values, k_total, rng);
  for (size_t i = 0; i < n; ++i) resp[i * k_total + labels[i]] = 1.0;

  Posterior q;
  q.alpha1.assign(std::max(0, k_total - 1), 1.0);
  q.alpha2.assign(std::max(0, k_total - 1), 1.0);
  q.mean.assign(k_total, 0.0);
  q.beta.assign(k_total, 1.0);
  q.shape.assign(k_total, 1.0);
  q.rate.assign(k_total, 1.0);

  double previous = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < options.max_iter; ++iter) {
    UpdateFactors(values, resp, k_total, prior, q);
    double bound =
        UpdateResponsibilitiesAndBound(values, k_total, prior, q, resp);
    // The stick-breaking prior favours large components first. Try the
    // size-sorted relabelling and keep it only if the bound improves, so the
    // trace stays monotone.
    std::vector<int> order = OrderBySize(resp, k_total);
    if (!std::is_sorted(order.begin(), order.end())) {
      std::vector<double> permuted = Permute(resp, order);
      Posterior candidate = q;
      UpdateFactors(values, permuted, k_total, prior, candidate);
      const double candidate_bound = UpdateResponsibilitiesAndBound(
          values, k_total, prior, candidate, permuted);
      if (candidate_bound > bound) {
        resp = std::move(permuted);
        q = std::move(candidate);
        bound = candidate_bound;
      }
    }
    fit.lower_bound_trace.push_back(bound);
    if (std::abs(bound - previous) < options.tol) break;
    previous = bound;
  }
  // Final factors consistent with the last responsibilities.
  UpdateFactors(values, resp, k_total, prior, q);

  std::vector<double> weight(k_total);
  double remaining = 1.0;
  for (int k = 0; k < k_total; ++k) {
    const double ev =
        k < k_total - 1 ? q.alpha1[k] / (q.alpha1[k] + q.alpha2[k]) : 1.0;
    weight[k] = ev * remaining;
    remaining *= 1.0 - ev;
  }
  double kept_total = 0.0;
  for (int k = 0; k < k_total; ++k) {
    if (weight[k] >= options.weight_threshold) {
      fit.kept_components.push_back(k);
      fit.means.push_back(q.mean[k]);
      fit.stds.push_back(std::max(floor, std::sqrt(q.rate[k] / q.shape[k])));
      fit.weights.push_back(weight[k]);
      kept_total += weight[k];
    }
  }
  if (fit.kept_components.empty()) {
    const int best = static_cast<int>(
        std::max_element(weight.begin(), weight.end()) - weight.begin());
    fit.kept_components = {best};
    fit.means = {q.mean[best]};
    fit.stds = {std::max(floor, std::sqrt(q.rate[best] / q.shape[best]))};
    fit.weights = {weight[best]};
    kept_total = weight[best];
  }
  for (double& w : fit.weights) w /= kept_total;
  return fit;
}

nlohmann::json GaussianMixtureFit::ToJson() const {
  return {{"means", means},
          {"stds", stds},
          {"weights", weights},
          {"kept_components", kept_components}};
}

GaussianMixtureFit GaussianMixtureFit::FromJson(const nlohmann::json& json) {
  GaussianMixtureFit fit;
  fit.means = json.at("means").get<std::vector<double>>();
  fit.stds = json.at("stds").get<std::vector<double>>();
  fit.weights = json.at("weights").get<std::vector<double>>();
  fit.kept_components = json.at("kept_components").get<std::vector<int>>();
  return fit;
}

}  // namespace dpcgans
