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
#include "dpdme/transform.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "dpdme/kernels.hpp"

namespace dpdme {

uint64_t NextPowerOfTwo(uint64_t d) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  return std::bit_ceil(d);
}

RotationSeed RotationSeed::Make(uint64_t seed, uint32_t dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  RotationSeed out;
  out.seed = seed;
  out.dim = dim;
  out.padded_dim = static_cast<uint32_t>(NextPowerOfTwo(dim));
  return out;
}

void Fwht(std::span<double> values) {
  const size_t n = values.size();
  if (n == 0 || !std::has_single_bit(n)) {
    throw std::invalid_argument("Fwht: length must be a power of two");
  }
  kernels::Fwht(values.data(), n);
}

std::vector<double> RademacherSigns(const RotationSeed& seed) {
  Rng rng(DeriveSeed(seed.seed, StreamTag::kRotationSigns, 0));
  std::vector<double> signs(seed.padded_dim);
  for (double& s : signs) {
    s = (rng.NextU64() >> 63) ? -1.0 : 1.0;
  }
  return signs;
}

RotatedVector Rotate(std::span<const double> x, const RotationSeed& seed) {
  if (x.size() != seed.dim) {
    throw std::invalid_argument("Rotate: dimension mismatch with seed");
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Rotate: input must be finite");
    }
  }
  RotatedVector out;
  out.original_dim = seed.dim;
  out.values.assign(seed.padded_dim, 0.0);
  std::copy(x.begin(), x.end(), out.values.begin());

  const std::vector<double> signs = RademacherSigns(seed);
  kernels::Multiply(out.values.data(), signs.data(), seed.padded_dim);
  kernels::Fwht(out.values.data(), seed.padded_dim);
  kernels::Scale(out.values.data(), seed.padded_dim,
                 1.0 / std::sqrt(static_cast<double>(seed.padded_dim)));
  return out;
}

std::vector<double> InverseRotate(const RotatedVector& rotated,
                                  const RotationSeed& seed) {
  if (rotated.values.size() != seed.padded_dim ||
      rotated.original_dim != seed.dim) {
    throw std::invalid_argument("InverseRotate: dimension mismatch with seed");
  }
  // R = (1/sqrt(P)) H A with A = A^{-1} and H H = P I, so
  // R^{-1} = A H / sqrt(P).
  std::vector<double> work = rotated.values;
  kernels::Fwht(work.data(), seed.padded_dim);
  kernels::Scale(work.data(), seed.padded_dim,
                 1.0 / std::sqrt(static_cast<double>(seed.padded_dim)));
  const std::vector<double> signs = RademacherSigns(seed);
  kernels::Multiply(work.data(), signs.data(), seed.padded_dim);
  work.resize(seed.dim);
  return work;
}

double XmaxBound(double diameter_d, int64_t n, int64_t d, double delta) {
  if (!(diameter_d > 0) || n < 1 || d < 1) {
    throw std::invalid_argument("XmaxBound: need D > 0, n >= 1, d >= 1");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("XmaxBound: delta must lie in (0, 1)");
  }
  const double padded =
      static_cast<double>(NextPowerOfTwo(static_cast<uint64_t>(d)));
  return 2.0 * diameter_d *
         std::sqrt(std::log(2.0 * static_cast<double>(n) * padded / delta) /
                   padded);
}

}  // namespace dpdme
