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

#if defined(DPDME_HAVE_AVX2_BUILD)

#include <immintrin.h>

// Every loop below performs exactly the per-element IEEE operations of the
// scalar reference (add, sub, mul, min, max), so results are bit-identical.
namespace dpdme::kernels::avx2 {

void Fwht(double* data, size_t n) {
  size_t h = 1;
  // Butterfly strides below the vector width stay scalar.
  for (; h < n && h < 4; h <<= 1) {
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
      for (size_t j = i; j < i + h; j += 4) {
        const __m256d x = _mm256_loadu_pd(data + j);
        const __m256d y = _mm256_loadu_pd(data + j + h);
        _mm256_storeu_pd(data + j, _mm256_add_pd(x, y));
        _mm256_storeu_pd(data + j + h, _mm256_sub_pd(x, y));
      }
    }
  }
}

void Scale(double* x, size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vc));
  }
  for (; i < n; ++i) x[i] *= c;
}

void Multiply(double* x, const double* y, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) x[i] *= y[i];
}

size_t ClipCount(double* x, size_t n, double lo, double hi) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  size_t clipped = 0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d below = _mm256_cmp_pd(v, vlo, _CMP_LT_OQ);
    const __m256d above = _mm256_cmp_pd(v, vhi, _CMP_GT_OQ);
    const __m256d clamped = _mm256_min_pd(_mm256_max_pd(v, vlo), vhi);
    _mm256_storeu_pd(x + i, clamped);
    clipped += static_cast<size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_or_pd(below, above)))));
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
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace dpdme::kernels::avx2

#endif  // DPDME_HAVE_AVX2_BUILD
