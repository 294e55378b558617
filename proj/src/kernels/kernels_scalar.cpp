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

namespace dpdme::kernels::scalar {

void Fwht(double* data, size_t n) {
  for (size_t h = 1; h < n; h <<= 1) {
    for (size_t i = 0; i < n; i += h << 1) {
      for (size_t j = i; j < i + h; ++j) {
        const double x = data[j];
        const double y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
}

void Scale(double* x, size_t n, double c) {
  for (size_t i = 0; i < n; ++i) x[i] *= c;
}

void Multiply(double* x, const double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= y[i];
}

size_t ClipCount(double* x, size_t n, double lo, double hi) {
  size_t clipped = 0;
  for (size_t i = 0; i < n; ++i) {
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
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace dpdme::kernels::scalar
