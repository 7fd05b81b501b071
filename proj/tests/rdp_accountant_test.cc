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

#include <cmath>

#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "gtest/gtest.h"

namespace dpcgans {
namespace {

// Direct (linear-space) binomial sum for the integer moment; fine for the
// moderate parameters used here.
double BinomialMoment(double q, double sigma, int alpha) {
  double total = 0.0, binom = 1.0;
  for (int k = 0; k <= alpha; ++k) {
    if (k > 0) binom = binom * (alpha - k + 1) / k;
    total += binom * std::pow(1 - q, alpha - k) * std::pow(q, k) *
             std::exp((k * k - k) / (2 * sigma * sigma));
  }
  return total;
}

// E_{z ~ N(0, s^2)} [(mu(z) / mu0(z))^alpha] with mu = (1-q) mu0 + q mu1,
// integrated numerically.
double QuadratureMoment(double q, double sigma, double alpha) {
  auto f = [&](double z) {
    const double log_mu0 = -z * z / (2 * sigma * sigma);
    const double ratio = (1 - q) + q * std::exp((2 * z - 1) / (2 * sigma * sigma));
    return std::exp(log_mu0 + alpha * std::log(ratio)) /
           (sigma * std::sqrt(2 * M_PI));
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  const double lo = -40 * sigma, hi = alpha + 40 * sigma;
  for (auto [a, b] : {std::pair{lo, 0.0}, {0.0, 0.5}, {0.5, alpha}, {alpha, hi}}) {
    total += gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
  }
  return total;
}

TEST(RdpTest, OrderGridIsFixed) {
  const std::vector<double>& orders = RdpOrders();
  EXPECT_EQ(orders.front(), 1.25);
  EXPECT_EQ(orders[1], 1.5);
  EXPECT_EQ(orders[2], 2.0);
  EXPECT_EQ(orders.back(), 1024.0);
  for (size_t i = 1; i < orders.size(); ++i) EXPECT_LT(orders[i - 1], orders[i]);
}

TEST(RdpTest, IntegerMomentsMatchIndependentOracles) {
  for (double q : {0.01, 0.1, 0.5}) {
    for (double sigma : {1.0, 2.0, 5.0}) {
      for (int alpha : {2, 3, 5, 8}) {
        const double log_a = LogMomentInteger(q, sigma, alpha);
        EXPECT_NEAR(log_a, std::log(BinomialMoment(q, sigma, alpha)), 1e-12)
            << q << " " << sigma << " " << alpha;
        EXPECT_NEAR(log_a, std::log(QuadratureMoment(q, sigma, alpha)), 1e-9)
            << q << " " << sigma << " " << alpha;
        EXPECT_NEAR(RdpPerStep(q, sigma, alpha), log_a / (alpha - 1), 1e-15);
      }
    }
  }
}

TEST(RdpTest, EdgeCases) {
  EXPECT_DOUBLE_EQ(RdpPerStep(1.0, 2.0, 8.0), 8.0 / 8.0);
  EXPECT_DOUBLE_EQ(RdpPerStep(1.0, 0.5, 1.5), 1.5 / 0.5);
  EXPECT_EQ(RdpPerStep(0.0, 1.0, 4.0), 0.0);
  EXPECT_EQ(RdpPerStep(0.1, 0.0, 4.0), kInfinity);
}

TEST(RdpTest, FractionalOrdersUpperBoundTheTrueMoment) {
  for (double q : {0.05, 0.3}) {
    for (double sigma : {0.8, 3.0}) {
      for (double alpha : {1.25, 1.5}) {
        const double exact = std::log(QuadratureMoment(q, sigma, alpha)) /
                             (alpha - 1);
        const double rdp = RdpPerStep(q, sigma, alpha);
        EXPECT_GE(rdp, exact - 1e-12);
        // Bracketed by the integer neighbours' linear interpolation.
        const double interp =
            ((alpha - 1) * LogMomentInteger(q, sigma, 2)) / (alpha - 1);
        EXPECT_NEAR(rdp, interp, 1e-12);
      }
    }
  }
}

TEST(RdpTest, EpsilonConversion) {
  const std::vector<double> orders = {2.0, 11.0};
  const std::vector<double> rdp = {0.5, 3.0};
  const double log_inv_delta = std::log(1e5);
  EXPECT_DOUBLE_EQ(EpsilonFromRdp(orders, rdp, 1e-5),
                   std::min(0.5 + log_inv_delta, 3.0 + log_inv_delta / 10));
}

TEST(RdpTest, EpsilonIsMonotone) {
  double prev = 0.0;
  for (int64_t steps : {1, 10, 100, 1000, 10000}) {
    const double eps = EpsilonAfter(0.05, 1.5, steps, 1e-5);
    EXPECT_GT(eps, prev);
    prev = eps;
  }
  prev = kInfinity;
  for (double sigma : {0.6, 1.0, 2.0, 4.0, 8.0}) {
    const double eps = EpsilonAfter(0.05, sigma, 1000, 1e-5);
    EXPECT_LT(eps, prev);
    prev = eps;
  }
}

TEST(AccountantTest, AccumulatesAdditively) {
  PrivacySpec spec;
  spec.noise_multiplier = 1.2;
  spec.sampling_rate = 0.02;
  AccountantState a, b;
  EXPECT_EQ(a.ToEps(1e-5), EpsilonFromRdp(a.orders(), a.rdp(), 1e-5));
  for (int i = 0; i < 37; ++i) a.Accumulate(spec);
  b.AccumulateSteps(spec, 37);
  EXPECT_EQ(a.steps(), 37);
  for (size_t i = 0; i < a.rdp().size(); ++i) {
    EXPECT_NEAR(a.rdp()[i], b.rdp()[i], 1e-12 * std::abs(b.rdp()[i]));
    EXPECT_NEAR(b.rdp()[i], 37 * RdpPerStep(0.02, 1.2, a.orders()[i]),
                1e-12 * std::abs(b.rdp()[i]));
  }
  EXPECT_NEAR(a.ToEps(1e-5), EpsilonAfter(0.02, 1.2, 37, 1e-5), 1e-12);

  const double prospective = a.ProspectiveEps(spec);
  EXPECT_EQ(a.steps(), 37);
  a.Accumulate(spec);
  EXPECT_NEAR(prospective, a.ToEps(1e-5), 1e-12);
}

TEST(AccountantTest, JsonRoundTrip) {
  PrivacySpec spec;
  spec.noise_multiplier = 2.0;
  spec.sampling_rate = 0.1;
  AccountantState a;
  a.AccumulateSteps(spec, 12);
  absl::StatusOr<AccountantState> back =
      AccountantState::FromJson(nlohmann::json::parse(a.ToJson().dump()));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->steps(), 12);
  EXPECT_EQ(back->rdp(), a.rdp());
  nlohmann::json broken = a.ToJson();
  broken["orders"] = {2.0, 3.0};
  EXPECT_FALSE(AccountantState::FromJson(broken).ok());
}

TEST(CalibrateSigmaTest, FindsTheSmallestFeasibleSigma) {
  const int64_t steps = 500;
  const double q = 0.1;
  for (double target : {0.5, 1.0, 3.0}) {
    absl::StatusOr<double> sigma = CalibrateSigma(target, 1e-5, steps, q);
    ASSERT_TRUE(sigma.ok()) << sigma.status();
    EXPECT_LE(EpsilonAfter(q, *sigma, steps, 1e-5), target);
    EXPECT_GT(EpsilonAfter(q, *sigma * (1 - 1e-6), steps, 1e-5), target);
  }
  EXPECT_EQ(*CalibrateSigma(kInfinity, 1e-5, steps, q), 0.0);
  // Below the zero-step floor log(1/delta) / (1024 - 1) no sigma suffices.
  EXPECT_EQ(CalibrateSigma(1e-3, 1e-5, steps, q).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(BudgetTest, ExceededOnlyPastTheTarget) {
  PrivacySpec spec;
  spec.target_epsilon = 1.0;
  spec.noise_multiplier = *CalibrateSigma(1.0, 1e-5, 100, 0.1);
  spec.sampling_rate = 0.1;
  AccountantState state;
  state.AccumulateSteps(spec, 100);
  EXPECT_FALSE(BudgetExceeded(state, spec));
  EXPECT_GT(state.ProspectiveEps(spec), 1.0);
  state.Accumulate(spec);
  EXPECT_TRUE(BudgetExceeded(state, spec));
  spec.target_epsilon = kInfinity;
  EXPECT_FALSE(BudgetExceeded(state, spec));
}

TEST(PrivacySpecTest, ValidatesAndRoundTrips) {
  PrivacySpec spec;
  spec.target_epsilon = 2.0;
  spec.noise_multiplier = 1.5;
  spec.sampling_rate = 0.25;
  ASSERT_TRUE(spec.Validate().ok());
  EXPECT_EQ(spec.gradient_bound(), 0.02);
  absl::StatusOr<PrivacySpec> back =
      PrivacySpec::FromJson(nlohmann::json::parse(spec.ToJson().dump()));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->noise_multiplier, 1.5);
  EXPECT_EQ(back->sampling_rate, 0.25);
  PrivacySpec infinite;
  EXPECT_EQ(PrivacySpec::FromJson(infinite.ToJson())->target_epsilon, kInfinity);
  spec.delta = 0.0;
  EXPECT_FALSE(spec.Validate().ok());
  spec.delta = 1e-5;
  spec.sampling_rate = 1.5;
  EXPECT_FALSE(spec.Validate().ok());
}

}  // namespace
}  // namespace dpcgans
