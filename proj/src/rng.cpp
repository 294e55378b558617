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
#include "dpdme/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace dpdme {

uint64_t Rng::NextBounded(uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("NextBounded: bound must be positive");
  }
  // Reject the tail of the 64-bit range that does not divide evenly.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::NextGaussian() {
  if (have_spare_gaussian_) {
    have_spare_gaussian_ = false;
    return spare_gaussian_;
  }
  double u, v, s;
  do {
    u = 2.0 * NextUniform() - 1.0;
    v = 2.0 * NextUniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_gaussian_ = v * factor;
  have_spare_gaussian_ = true;
  return u * factor;
}

int64_t Rng::NextBinomial(int64_t trials, double p) {
  if (trials < 0 || !(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("NextBinomial: need trials >= 0, p in [0,1]");
  }
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  // Work with q = min(p, 1-p) and mirror the result if p > 1/2.
  const bool flipped = p > 0.5;
  const double pr = flipped ? 1.0 - p : p;
  int64_t result;
  if (static_cast<double>(trials) * pr <= 30.0) {
    result = BinomialInversion(trials, pr);
  } else {
    result = BinomialBtpe(trials, pr);
  }
  return flipped ? trials - result : result;
}

// CDF inversion (BINV). Exact for n * p <= 30 where pow(q, n) stays far from
// the underflow threshold.
int64_t Rng::BinomialInversion(int64_t trials, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = (static_cast<double>(trials) + 1.0) * s;
  const double r0 = std::exp(static_cast<double>(trials) * std::log(q));
  for (;;) {
    double u = NextUniform();
    double r = r0;
    int64_t x = 0;
    while (u > r) {
      u -= r;
      ++x;
      if (x > trials) break;  // guards accumulated rounding in the tail
      r *= a / static_cast<double>(x) - s;
    }
    if (x <= trials) return x;
  }
}

// BTPE (Kachitvichyanukul & Schmeiser): triangle / parallelogram / exponential
// envelope with squeeze acceptance. Requires p <= 1/2 and n * p > 30.
int64_t Rng::BinomialBtpe(int64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double q = 1.0 - p;
  const double npq = n * p * q;
  const double fm = n * p + p;
  const int64_t m = static_cast<int64_t>(std::floor(fm));
  const double p1 = std::floor(2.195 * std::sqrt(npq) - 4.6 * q) + 0.5;
  const double xm = static_cast<double>(m) + 0.5;
  const double xl = xm - p1;
  const double xr = xm + p1;
  const double c = 0.134 + 20.5 / (15.3 + static_cast<double>(m));
  double a = (fm - xl) / (fm - xl * p);
  const double laml = a * (1.0 + a / 2.0);
  a = (xr - fm) / (xr * q);
  const double lamr = a * (1.0 + a / 2.0);
  const double p2 = p1 * (1.0 + 2.0 * c);
  const double p3 = p2 + c / laml;
  const double p4 = p3 + c / lamr;

  for (;;) {
    const double u = NextUniform() * p4;
    double v = NextUniform();
    int64_t y;
    if (u <= p1) {
      // Triangular central region: immediate acceptance.
      y = static_cast<int64_t>(std::floor(xm - p1 * v + u));
      return y;
    }
    if (u <= p2) {
      // Parallelogram region.
      const double x = xl + (u - p1) / c;
      v = v * c + 1.0 - std::abs(xm - x) / p1;
      if (v > 1.0) continue;
      y = static_cast<int64_t>(std::floor(x));
    } else if (u <= p3) {
      // Left exponential tail.
      y = static_cast<int64_t>(std::floor(xl + std::log(v) / laml));
      if (y < 0) continue;
      v = v * (u - p2) * laml;
    } else {
      // Right exponential tail.
      y = static_cast<int64_t>(std::floor(xr - std::log(v) / lamr));
      if (y > trials) continue;
      v = v * (u - p3) * lamr;
    }

    // Acceptance test: compare v against f(y)/f(m).
    const int64_t k = std::llabs(y - m);
    if (k <= 20 || static_cast<double>(k) >= npq / 2.0 - 1.0) {
      // Recursive evaluation of the probability ratio.
      const double ss = p / q;
      const double aa = ss * (n + 1.0);
      double f = 1.0;
      if (m < y) {
        for (int64_t i = m + 1; i <= y; ++i) {
          f *= aa / static_cast<double>(i) - ss;
        }
      } else if (m > y) {
        for (int64_t i = y + 1; i <= m; ++i) {
          f /= aa / static_cast<double>(i) - ss;
        }
      }
      if (v <= f) return y;
      continue;
    }

    // Squeeze on log scale, then the full Stirling-corrected test.
    const double kk = static_cast<double>(k);
    const double rho =
        (kk / npq) * ((kk * (kk / 3.0 + 0.625) + 1.0 / 6.0) / npq + 0.5);
    const double t = -kk * kk / (2.0 * npq);
    const double big_a = std::log(v);
    if (big_a < t - rho) return y;
    if (big_a > t + rho) continue;

    const double x1 = static_cast<double>(y + 1);
    const double f1 = static_cast<double>(m + 1);
    const double z = static_cast<double>(trials + 1 - m);
    const double w = static_cast<double>(trials - y + 1);
    const double x2 = x1 * x1;
    const double f2 = f1 * f1;
    const double z2 = z * z;
    const double w2 = w * w;
    const double bound =
        xm * std::log(f1 / x1) + (n - static_cast<double>(m) + 0.5) * std::log(z / w) +
        static_cast<double>(y - m) * std::log(w * p / (x1 * q)) +
        (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / f2) / f2) / f2) / f2) / f1 / 166320.0 +
        (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / z2) / z2) / z2) / z2) / z / 166320.0 +
        (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / x2) / x2) / x2) / x2) / x1 / 166320.0 +
        (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / w2) / w2) / w2) / w2) / w / 166320.0;
    if (big_a <= bound) return y;
  }
}

}  // namespace dpdme
