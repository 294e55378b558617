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

#include <cstdlib>
#include <cstring>

namespace dpdme::kernels {
namespace {

struct Vtable {
  void (*fwht)(double*, size_t);
  void (*scale)(double*, size_t, double);
  void (*multiply)(double*, const double*, size_t);
  size_t (*clip_count)(double*, size_t, double, double);
  void (*axpy)(double*, const double*, size_t, double);
};

constexpr Vtable kScalarVtable = {scalar::Fwht, scalar::Scale,
                                  scalar::Multiply, scalar::ClipCount,
                                  scalar::Axpy};

#if defined(DPDME_HAVE_AVX2_BUILD)
constexpr Vtable kAvx2Vtable = {avx2::Fwht, avx2::Scale, avx2::Multiply,
                                avx2::ClipCount, avx2::Axpy};
#endif
#if defined(DPDME_HAVE_NEON_BUILD)
constexpr Vtable kNeonVtable = {neon::Fwht, neon::Scale, neon::Multiply,
                                neon::ClipCount, neon::Axpy};
#endif

bool BackendAvailable(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(DPDME_HAVE_AVX2_BUILD)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(DPDME_HAVE_NEON_BUILD)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const Vtable* VtableFor(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return &kScalarVtable;
#if defined(DPDME_HAVE_AVX2_BUILD)
    case Backend::kAvx2:
      return &kAvx2Vtable;
#endif
#if defined(DPDME_HAVE_NEON_BUILD)
    case Backend::kNeon:
      return &kNeonVtable;
#endif
    default:
      return &kScalarVtable;
  }
}

Backend DetectBackend() {
  if (const char* env = std::getenv("DPDME_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::kScalar;
    if (std::strcmp(env, "avx2") == 0 && BackendAvailable(Backend::kAvx2)) {
      return Backend::kAvx2;
    }
    if (std::strcmp(env, "neon") == 0 && BackendAvailable(Backend::kNeon)) {
      return Backend::kNeon;
    }
    return Backend::kScalar;
  }
  if (BackendAvailable(Backend::kAvx2)) return Backend::kAvx2;
  if (BackendAvailable(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

struct Dispatch {
  Backend backend;
  const Vtable* vtable;
  Dispatch() : backend(DetectBackend()), vtable(VtableFor(backend)) {}
};

Dispatch& ActiveDispatch() {
  static Dispatch dispatch;
  return dispatch;
}

}  // namespace

Backend ActiveBackend() { return ActiveDispatch().backend; }

bool ForceBackend(Backend backend) {
  if (!BackendAvailable(backend)) return false;
  ActiveDispatch().backend = backend;
  ActiveDispatch().vtable = VtableFor(backend);
  return true;
}

void Fwht(double* data, size_t n) { ActiveDispatch().vtable->fwht(data, n); }

void Scale(double* x, size_t n, double c) {
  ActiveDispatch().vtable->scale(x, n, c);
}

void Multiply(double* x, const double* y, size_t n) {
  ActiveDispatch().vtable->multiply(x, y, n);
}

size_t ClipCount(double* x, size_t n, double lo, double hi) {
  return ActiveDispatch().vtable->clip_count(x, n, lo, hi);
}

void Axpy(double* y, const double* x, size_t n, double a) {
  ActiveDispatch().vtable->axpy(y, x, n, a);
}

}  // namespace dpdme::kernels
