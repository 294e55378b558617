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
#include "dpdme/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpdme {
namespace {

struct Cell {
  int64_t r = 0;      // lower grid index of the containing cell
  double up_prob = 0; // probability of rounding to r + 1
};

Cell LocateCell(double v, const QuantizerConfig& cfg) {
  const double spacing = cfg.Spacing();
  Cell cell;
  cell.r = std::clamp<int64_t>(
      static_cast<int64_t>(std::floor((v + cfg.xmax) / spacing)), 0,
      cfg.levels - 2);
  cell.up_prob =
      std::clamp((v - cfg.GridPoint(cell.r)) / spacing, 0.0, 1.0);
  return cell;
}

double Clamp(double v, const QuantizerConfig& cfg) {
  return std::clamp(v, -cfg.xmax, cfg.xmax);
}

}  // namespace

SensitivityBounds ComputeSensitivityBounds(double diameter_d, double xmax,
                                           int64_t k, int64_t d, double delta) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(diameter_d >= 0) || !(xmax > 0) || d < 1) {
    throw std::invalid_argument("need D >= 0, xmax > 0, d >= 1");
  }
  const double q = xmax / static_cast<double>(k - 1);
  const double log_term = std::log(2.0 / delta);
  const double root_d = std::sqrt(static_cast<double>(d));
  const double shared = std::sqrt(2.0 * root_d * diameter_d * log_term / q);

  SensitivityBounds bounds;
  bounds.delta_inf = static_cast<double>(k + 1);
  bounds.delta_1 =
      root_d * diameter_d / q + shared + (4.0 / 3.0) * log_term;
  // Evaluated literally as specified; the delta_1 appearing under the root is
  // dimensionless while the leading term is in grid units.
  bounds.delta_2 =
      diameter_d / q + std::sqrt(bounds.delta_1 + shared);
  bounds.holds_with_delta = delta;
  return bounds;
}

CoupledPair CoupledQuantizePair(std::span<const double> x,
                                std::span<const double> x_prime,
                                const QuantizerConfig& cfg, Rng& rng) {
  cfg.Validate();
  if (x.size() != x_prime.size()) {
    throw std::invalid_argument("CoupledQuantizePair: size mismatch");
  }
  CoupledPair pair;
  pair.y.resize(x.size());
  pair.y_prime.resize(x.size());
  double sum_abs = 0, sum_sq = 0, max_abs = 0;
  for (size_t j = 0; j < x.size(); ++j) {
    const Cell a = LocateCell(Clamp(x[j], cfg), cfg);
    const Cell b = LocateCell(Clamp(x_prime[j], cfg), cfg);
    int64_t yj, yj_prime;
    if (a.r == b.r) {
      // Same cell: one shared uniform drives both roundings.
      const double alpha = rng.NextUniform();
      yj = a.r + (alpha < a.up_prob ? 1 : 0);
      yj_prime = b.r + (alpha < b.up_prob ? 1 : 0);
    } else {
      yj = a.r + (rng.NextUniform() < a.up_prob ? 1 : 0);
      yj_prime = b.r + (rng.NextUniform() < b.up_prob ? 1 : 0);
    }
    pair.y[j] = yj;
    pair.y_prime[j] = yj_prime;
    const double dist = std::abs(static_cast<double>(yj - yj_prime));
    sum_abs += dist;
    sum_sq += dist * dist;
    max_abs = std::max(max_abs, dist);
  }
  pair.l1 = sum_abs;
  pair.l2 = std::sqrt(sum_sq);
  pair.linf = max_abs;
  return pair;
}

PairwiseBounds PairwiseSensitivityBounds(std::span<const double> x,
                                         std::span<const double> x_prime,
                                         const QuantizerConfig& cfg,
                                         double delta) {
  cfg.Validate();
  if (x.size() != x_prime.size()) {
    throw std::invalid_argument("PairwiseSensitivityBounds: size mismatch");
  }
  const double spacing = cfg.Spacing();
  double diff_l1 = 0, diff_l2_sq = 0, diff_linf = 0;
  for (size_t j = 0; j < x.size(); ++j) {
    const double diff = std::abs(Clamp(x[j], cfg) - Clamp(x_prime[j], cfg));
    diff_l1 += diff;
    diff_l2_sq += diff * diff;
    diff_linf = std::max(diff_linf, diff);
  }
  const double log_term = std::log(2.0 / delta);
  const double steps_l1 = diff_l1 / spacing;

  PairwiseBounds bounds;
  bounds.linf = diff_linf / spacing + 2.0;
  bounds.l1 =
      steps_l1 + std::sqrt(2.0 * steps_l1 * log_term) + (4.0 / 3.0) * log_term;
  bounds.l2 = std::sqrt(diff_l2_sq) / spacing +
              std::sqrt(steps_l1 + std::sqrt(8.0 * steps_l1 * log_term) +
                        (4.0 / 3.0) * log_term);
  return bounds;
}

SensitivityCheckReport EmpiricalSensitivityCheck(
    std::span<const double> x, std::span<const double> x_prime,
    const QuantizerConfig& cfg, double delta, int64_t trials, uint64_t seed) {
  if (trials < 1000) {
    throw std::invalid_argument(
        "EmpiricalSensitivityCheck: need at least 1000 trials");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  SensitivityCheckReport report;
  report.trials = trials;
  report.bounds = PairwiseSensitivityBounds(x, x_prime, cfg, delta);
  for (int64_t t = 0; t < trials; ++t) {
    Rng rng(DeriveSeed(seed, StreamTag::kTrial, static_cast<uint64_t>(t)));
    const CoupledPair pair = CoupledQuantizePair(x, x_prime, cfg, rng);
    const bool ok = pair.l1 <= report.bounds.l1 &&
                    pair.l2 <= report.bounds.l2 &&
                    pair.linf <= report.bounds.linf;
    if (!ok) ++report.violations;
  }
  report.violation_frequency = static_cast<double>(report.violations) /
                               static_cast<double>(report.trials);
  report.threshold =
      delta + 3.0 * std::sqrt(delta * (1.0 - delta) /
                              static_cast<double>(report.trials));
  report.pass = report.violation_frequency <= report.threshold;
  return report;
}

}  // namespace dpdme
