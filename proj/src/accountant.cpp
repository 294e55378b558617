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
#include "dpdme/accountant.hpp"

#include <cmath>
#include <stdexcept>

namespace dpdme {
namespace {

void CheckFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void CheckDelta(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

}  // namespace

void BinomialSpec::Validate() const {
  if (trials < 1) {
    throw std::invalid_argument("BinomialSpec: trials must be >= 1");
  }
  if (!(success_prob > 0.0) || !(success_prob < 1.0)) {
    throw std::invalid_argument("BinomialSpec: success_prob must be in (0,1)");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("BinomialSpec: scale must be positive");
  }
}

double GaussianEpsilon(double delta_2, double sigma, double delta) {
  CheckFinite(delta_2, "delta_2");
  CheckFinite(sigma, "sigma");
  CheckDelta(delta);
  if (delta_2 < 0) throw std::invalid_argument("delta_2 must be nonnegative");
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  return delta_2 / sigma * std::sqrt(2.0 * std::log(1.25 / delta));
}

bool GaussianPreconditionOk(double delta_2, double sigma, double delta) {
  return sigma >= delta_2 * std::sqrt(2.0 * std::log(1.25 / delta));
}

double GaussianMechanismError(int64_t d, double sigma) {
  return static_cast<double>(d) * sigma * sigma;
}

GaussianDmeReport GaussianDmeEpsilon(int64_t n, double diameter_d,
                                     double sigma, double delta) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  CheckFinite(diameter_d, "D");
  CheckFinite(sigma, "sigma");
  CheckDelta(delta);
  const double root_n = std::sqrt(static_cast<double>(n));
  GaussianDmeReport report;
  // One client changing moves the sum's mean by at most 2D, and the
  // aggregated noise has per-coordinate deviation sigma / sqrt(n).
  report.epsilon = GaussianEpsilon(2.0 * diameter_d, root_n * sigma, delta);
  report.mse_per_coordinate = sigma * sigma / static_cast<double>(n);
  report.precondition_ok =
      GaussianPreconditionOk(2.0 * diameter_d / root_n, sigma, delta);
  return report;
}

BinomialConstants BinomialMechanismConstants(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("p must lie in (0, 1)");
  }
  // The bound is symmetric in p and 1-p, and its closed form assumes
  // p <= 1/2 (b would go negative otherwise), so canonicalize.
  p = std::min(p, 1.0 - p);
  const double q = 1.0 - p;
  const double sq = p * p + q * q;
  BinomialConstants out;
  out.b = 2.0 * sq / 3.0 + (1.0 - 2.0 * p);
  out.c = std::sqrt(2.0) * (3.0 * p * p * p + 3.0 * q * q * q + 2.0 * sq);
  out.d = (4.0 / 3.0) * sq;
  return out;
}

EpsilonReport BinomialEpsilon(const BinomialSpec& spec,
                              const SensitivityBounds& bounds, int64_t d,
                              double delta) {
  spec.Validate();
  CheckDelta(delta);
  if (d < 1) throw std::invalid_argument("d must be >= 1");

  const double p = std::min(spec.success_prob, 1.0 - spec.success_prob);
  const double variance = static_cast<double>(spec.trials) * p * (1.0 - p);
  const double s = spec.scale;
  const BinomialConstants k = BinomialMechanismConstants(p);

  EpsilonReport report;
  auto check = [&report](std::string name, double required, double actual) {
    report.condition_details.push_back(
        {std::move(name), required, actual, actual >= required});
  };
  check("Np(1-p) >= 23 log(10 d / delta)",
        23.0 * std::log(10.0 * static_cast<double>(d) / delta), variance);
  check("Np(1-p) >= 2 delta_inf / s", 2.0 * bounds.delta_inf / s, variance);
  check("Np(1-p) >= 39", 39.0, variance);
  report.conditions_ok = true;
  for (const auto& detail : report.condition_details) {
    report.conditions_ok = report.conditions_ok && detail.ok;
  }

  const double log_125 = std::log(1.25 / delta);
  const double log_10 = std::log(10.0 / delta);
  const double log_20d = std::log(20.0 * static_cast<double>(d) / delta);

  report.term_gaussian_like =
      bounds.delta_2 * std::sqrt(2.0 * log_125) / (s * std::sqrt(variance));
  report.term_l2_l1 =
      (bounds.delta_2 * k.c * std::sqrt(log_10) + bounds.delta_1 * k.b) /
      (s * variance * (1.0 - delta / 10.0));
  report.term_linf = ((2.0 / 3.0) * bounds.delta_inf * log_125 +
                      bounds.delta_inf * k.d * log_20d * log_10) /
                     (s * variance);
  report.epsilon =
      report.term_gaussian_like + report.term_l2_l1 + report.term_linf;
  return report;
}

double BinomialMechanismError(int64_t d, const BinomialSpec& spec) {
  spec.Validate();
  const double p = spec.success_prob;
  return static_cast<double>(d) * spec.scale * spec.scale *
         static_cast<double>(spec.trials) * p * (1.0 - p);
}

CompositionResult ComposeRounds(const PrivacyBudget& per_round, int64_t rounds,
                                double delta_slack) {
  per_round.Validate();
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (!(delta_slack > 0.0) || !(delta_slack < 1.0)) {
    throw std::invalid_argument("delta_slack must lie in (0, 1)");
  }
  const double t = static_cast<double>(rounds);
  const double eps = per_round.epsilon;
  CompositionResult out;
  out.basic = {t * eps, t * per_round.delta};
  out.advanced = {std::sqrt(2.0 * t * std::log(1.0 / delta_slack)) * eps +
                      t * eps * (std::exp(eps) - 1.0),
                  t * per_round.delta + delta_slack};
  return out;
}

}  // namespace dpdme
