// Copyright 2026 The dpdme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Closed-form (epsilon, delta) accounting for the Gaussian and Binomial
// mechanisms, plus composition across rounds. Everything here is a pure
// function of its arguments; natural logarithms throughout.
#ifndef DPDME_ACCOUNTANT_H_
#define DPDME_ACCOUNTANT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dpdme/types.hpp"

namespace dpdme {

// Gaussian mechanism: per-coordinate noise standard deviation.
struct GaussianSpec {
  double sigma = 0;
};

// Binomial mechanism: adds (Z - trials * p) * scale per coordinate,
// Z ~ Bin(trials, success_prob).
struct BinomialSpec {
  int64_t trials = 0;
  double success_prob = 0;
  double scale = 0;

  void Validate() const;
};

// The three closed-form constants entering the Binomial epsilon bound.
struct BinomialConstants {
  double b = 0;
  double c = 0;
  double d = 0;
};

struct ConditionDetail {
  std::string name;
  double required = 0;
  double actual = 0;
  bool ok = false;
};

// Epsilon guarantee of the Binomial mechanism, decomposed into its three
// additive terms, plus the applicability conditions. When conditions_ok is
// false the epsilon value is reported for diagnostics only and carries no
// privacy guarantee.
struct EpsilonReport {
  double epsilon = 0;
  double term_gaussian_like = 0;
  double term_l2_l1 = 0;
  double term_linf = 0;
  bool conditions_ok = false;
  std::vector<ConditionDetail> condition_details;
};

// epsilon of the Gaussian mechanism with L2 sensitivity delta_2 and noise
// sigma: (delta_2 / sigma) * sqrt(2 log(1.25/delta)).
double GaussianEpsilon(double delta_2, double sigma, double delta);

// True when sigma >= delta_2 * sqrt(2 log(1.25/delta)), the regime in which
// GaussianEpsilon is a valid privacy guarantee.
bool GaussianPreconditionOk(double delta_2, double sigma, double delta);

// Worst-case mean squared error of the Gaussian mechanism: d * sigma^2.
double GaussianMechanismError(int64_t d, double sigma);

// Distributed mean estimation with per-client Gaussian noise.
struct GaussianDmeReport {
  double epsilon = 0;
  // MSE per coordinate count: sigma^2 / n. Scale by d for the full error.
  double mse_per_coordinate = 0;
  bool precondition_ok = false;
};
GaussianDmeReport GaussianDmeEpsilon(int64_t n, double diameter_d,
                                     double sigma, double delta);

// Constants b_p, c_p, d_p with p canonicalized to min(p, 1-p).
BinomialConstants BinomialMechanismConstants(double p);

// Epsilon of the d-dimensional Binomial mechanism. Conditions are evaluated
// and reported, never assumed; no exception on condition failure.
EpsilonReport BinomialEpsilon(const BinomialSpec& spec,
                              const SensitivityBounds& bounds, int64_t d,
                              double delta);

// Worst-case error of the Binomial mechanism: d * s^2 * N p (1-p).
double BinomialMechanismError(int64_t d, const BinomialSpec& spec);

// Basic and advanced composition of T identical per-round budgets. The caller
// picks whichever epsilon is smaller.
struct CompositionResult {
  PrivacyBudget basic;
  PrivacyBudget advanced;

  const PrivacyBudget& Tighter() const {
    return advanced.epsilon < basic.epsilon ? advanced : basic;
  }
};
CompositionResult ComposeRounds(const PrivacyBudget& per_round, int64_t rounds,
                                double delta_slack);

}  // namespace dpdme

#endif  // DPDME_ACCOUNTANT_H_
