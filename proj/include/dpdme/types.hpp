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
#ifndef DPDME_TYPES_H_
#define DPDME_TYPES_H_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dpdme {

// An (epsilon, delta) differential privacy guarantee.
// Valid budgets have epsilon > 0 and delta in (0, 1).
struct PrivacyBudget {
  double epsilon = 0;
  double delta = 0;

  void Validate() const {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("PrivacyBudget: epsilon must be positive");
    }
    if (!(delta > 0) || !(delta < 1)) {
      throw std::invalid_argument("PrivacyBudget: delta must lie in (0, 1)");
    }
  }
};

// L1/L2/Linf sensitivity of a randomized query, expressed in integer grid
// units, together with the failure probability the bounds hold with.
struct SensitivityBounds {
  double delta_1 = 0;
  double delta_2 = 0;
  double delta_inf = 0;
  double holds_with_delta = 0;
};

}  // namespace dpdme

#endif  // DPDME_TYPES_H_
