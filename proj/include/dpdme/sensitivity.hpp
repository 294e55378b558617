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
// High-probability sensitivity of the stochastic quantizer, two ways: the
// closed-form worst-case bounds used by the accountant, and an explicit
// coupling sampler that validates them empirically. The coupling draws a pair
// of quantizations whose marginals match the quantizer exactly while their
// distance concentrates.
#ifndef DPDME_SENSITIVITY_H_
#define DPDME_SENSITIVITY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dpdme/quantize.hpp"
#include "dpdme/rng.hpp"
#include "dpdme/types.hpp"

namespace dpdme {

// Worst-case sensitivity of the quantized sum over inputs of L2 norm <= D,
// in grid units, holding with probability >= 1 - delta. Uses the reduced
// grid step q = xmax / (k-1), which absorbs the factor-2 input diameter.
SensitivityBounds ComputeSensitivityBounds(double diameter_d, double xmax,
                                           int64_t k, int64_t d, double delta);

struct CoupledPair {
  std::vector<int64_t> y;
  std::vector<int64_t> y_prime;
  double l1 = 0;    // sum_j |y_j - y'_j|
  double l2 = 0;    // sqrt(sum_j (y_j - y'_j)^2)
  double linf = 0;  // max_j |y_j - y'_j|
};

// Samples (y, y') with exact quantizer marginals: coordinates falling in the
// same grid cell share one uniform draw; coordinates in different cells are
// sampled independently. Inputs are clamped to [-xmax, xmax] first.
CoupledPair CoupledQuantizePair(std::span<const double> x,
                                std::span<const double> x_prime,
                                const QuantizerConfig& cfg, Rng& rng);

// Input-specific distance bounds for one (x, x') pair: the right-hand sides
// the coupled distances must satisfy, all in grid units of the full spacing
// 2 xmax / (k-1).
struct PairwiseBounds {
  double l1 = 0;
  double l2 = 0;
  double linf = 0;
};
PairwiseBounds PairwiseSensitivityBounds(std::span<const double> x,
                                         std::span<const double> x_prime,
                                         const QuantizerConfig& cfg,
                                         double delta);

struct SensitivityCheckReport {
  int64_t trials = 0;
  int64_t violations = 0;  // trials where any of the three bounds failed
  double violation_frequency = 0;
  double threshold = 0;  // delta + 3 binomial standard errors
  PairwiseBounds bounds;
  bool pass = false;
};

// Samples `trials` coupled pairs and checks the simultaneous bounds.
// Throws std::invalid_argument when trials < 1000 (insufficient power).
SensitivityCheckReport EmpiricalSensitivityCheck(std::span<const double> x,
                                                 std::span<const double> x_prime,
                                                 const QuantizerConfig& cfg,
                                                 double delta, int64_t trials,
                                                 uint64_t seed);

}  // namespace dpdme

#endif  // DPDME_SENSITIVITY_H_
