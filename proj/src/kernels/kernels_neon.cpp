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
#include "dpdme/kernels.hpp"

#if defined(DPDME_HAVE_NEON_BUILD)

#include <arm_neon.h>

namespace dpdme::kernels::neon {

void Fwht(double* data, size_t n) {
  size_t h = 1;
  for (; h < n && h < 2; h <<= 1) {
    for (size_t i = 0; i < n; i += h << 1) {
      for (size_t j = i; j < i + h; ++j) {
        const double x = data[j];
        const double y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
  for (; h < n; h <<= 1) {
    for (size_t i = 0; i < n; i += h << 1) {
      for (size_t j = i; j < i + h; j += 2) {
        const float64x2_t x = vld1q_f64(data + j);
        const float64x2_t y = vld1q_f64(data + j + h);
        vst1q_f64(data + j, vaddq_f64(x, y));
        vst1q_f64(data + j + h, vsubq_f64(x, y));
      }
    }
  }
}

void Scale(double* x, size_t n, double c) {
  const float64x2_t vc = vdupq_n_f64(c);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), vc));
  }
  for (; i < n; ++i) x[i] *= c;
}

void Multiply(double* x, const double* y, size_t n) {
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (; i < n; ++i) x[i] *= y[i];
}

size_t ClipCount(double* x, size_t n, double lo, double hi) {
  const float64x2_t vlo = vdupq_n_f64(lo);
  const float64x2_t vhi = vdupq_n_f64(hi);
  size_t clipped = 0;
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    const uint64x2_t outside =
        vorrq_u64(vcltq_f64(v, vlo), vcgtq_f64(v, vhi));
    vst1q_f64(x + i, vminq_f64(vmaxq_f64(v, vlo), vhi));
    clipped += (vgetq_lane_u64(outside, 0) & 1) + (vgetq_lane_u64(outside, 1) & 1);
  }
  for (; i < n; ++i) {
    const double v = x[i];
    if (v < lo) {
      x[i] = lo;
      ++clipped;
    } else if (v > hi) {
      x[i] = hi;
      ++clipped;
    }
  }
  return clipped;
}

void Axpy(double* y, const double* x, size_t n, double a) {
  const float64x2_t va = vdupq_n_f64(a);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace dpdme::kernels::neon

#endif  // DPDME_HAVE_NEON_BUILD
