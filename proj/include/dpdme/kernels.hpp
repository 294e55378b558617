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
#ifndef DPDME_KERNELS_H_
#define DPDME_KERNELS_H_

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, where the build targets support them, AVX2 and NEON
// variants selected once at startup. All variants are bit-identical: they
// perform the same IEEE operations per element (the build disables FP
// contraction), so dispatch never changes results.
//
// The environment variable DPDME_KERNELS=scalar|avx2|neon overrides the
// automatic choice; unsupported requests fall back to scalar.
namespace dpdme::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

// Backend the dispatcher resolved at startup.
Backend ActiveBackend();

// Test hook: force a backend. Returns false (and leaves the active backend
// unchanged) if the requested backend is not available on this machine.
bool ForceBackend(Backend backend);

// In-place unnormalized Walsh-Hadamard butterflies; n must be a power of two
// (not validated here; callers validate).
void Fwht(double* data, size_t n);

// x[i] *= c
void Scale(double* x, size_t n, double c);

// x[i] *= y[i]
void Multiply(double* x, const double* y, size_t n);

// x[i] = min(max(x[i], lo), hi); returns how many elements were clamped.
size_t ClipCount(double* x, size_t n, double lo, double hi);

// y[i] += a * x[i]
void Axpy(double* y, const double* x, size_t n, double a);

namespace scalar {
void Fwht(double* data, size_t n);
void Scale(double* x, size_t n, double c);
void Multiply(double* x, const double* y, size_t n);
size_t ClipCount(double* x, size_t n, double lo, double hi);
void Axpy(double* y, const double* x, size_t n, double a);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define DPDME_HAVE_AVX2_BUILD 1
namespace avx2 {
void Fwht(double* data, size_t n);
void Scale(double* x, size_t n, double c);
void Multiply(double* x, const double* y, size_t n);
size_t ClipCount(double* x, size_t n, double lo, double hi);
void Axpy(double* y, const double* x, size_t n, double a);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define DPDME_HAVE_NEON_BUILD 1
namespace neon {
void Fwht(double* data, size_t n);
void Scale(double* x, size_t n, double c);
void Multiply(double* x, const double* y, size_t n);
size_t ClipCount(double* x, size_t n, double lo, double hi);
void Axpy(double* y, const double* x, size_t n, double a);
}  // namespace neon
#endif

}  // namespace dpdme::kernels

#endif  // DPDME_KERNELS_H_
