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
// Randomized Hadamard-Rademacher rotation R = (1/sqrt(d)) H A with public
// randomness: the sign diagonal A is derived deterministically from a shared
// seed, so any party holding the seed applies the identical orthogonal map.
#ifndef DPDME_TRANSFORM_H_
#define DPDME_TRANSFORM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dpdme/rng.hpp"

namespace dpdme {

// Smallest power of two >= d.
uint64_t NextPowerOfTwo(uint64_t d);

// Public randomness identifier for one rotation. Vectors of dimension `dim`
// are zero-padded to `padded_dim` before the Hadamard stages.
struct RotationSeed {
  uint64_t seed = 0;
  uint32_t dim = 0;
  uint32_t padded_dim = 0;
  GeneratorId generator = GeneratorId::kMt19937;

  static RotationSeed Make(uint64_t seed, uint32_t dim);
};

struct RotatedVector {
  std::vector<double> values;  // length padded_dim
  uint32_t original_dim = 0;
};

// In-place unnormalized Walsh-Hadamard transform. Throws std::invalid_argument
// unless the length is a power of two. O(n log n) time, O(1) extra space.
void Fwht(std::span<double> values);

// The +-1 diagonal derived from the seed, as doubles, length padded_dim.
std::vector<double> RademacherSigns(const RotationSeed& seed);

// Applies R: pad, multiply by the sign diagonal, Hadamard stages, scale by
// 1/sqrt(padded_dim). Preserves the L2 norm.
RotatedVector Rotate(std::span<const double> x, const RotationSeed& seed);

// Applies R^{-1} and drops the padding coordinates.
std::vector<double> InverseRotate(const RotatedVector& rotated,
                                  const RotationSeed& seed);

// High-probability bound on |coordinate| after rotating any of n vectors of
// L2 norm <= D: 2 D sqrt(log(2 n d / delta) / d), evaluated with the padded
// dimension (rotation acts in the padded space).
double XmaxBound(double diameter_d, int64_t n, int64_t d, double delta);

}  // namespace dpdme

#endif  // DPDME_TRANSFORM_H_
