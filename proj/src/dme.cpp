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
#include "dpdme/dme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpdme/sensitivity.hpp"

namespace dpdme {
namespace {

constexpr double kNormSlack = 1e-9;
constexpr int64_t kSelectMaxLevels = int64_t{1} << 31;  // largest pow2 in u32
constexpr int64_t kSelectMaxNoise = int64_t{1} << 48;

MessageHeader BuildHeader(const DmeConfig& cfg) {
  MessageHeader h;
  h.version = kWireVersion;
  h.rotation_on = cfg.rotate;
  h.dim = static_cast<uint32_t>(cfg.MessageDim());
  h.levels_k = static_cast<uint32_t>(cfg.levels);
  h.noise_m = static_cast<uint32_t>(cfg.noise_m);
  h.p_num = cfg.p_num;
  h.p_den = cfg.p_den;
  h.xmax = cfg.Xmax();
  h.generator_id =
      cfg.rotate ? static_cast<uint8_t>(GeneratorId::kMt19937) : 0;
  h.rotation_seed = cfg.rotate ? cfg.Rotation().seed : 0;
  return h;
}

double NormL2(std::span<const double> x) {
  double sum = 0;
  for (double v : x) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace

double DmeConfig::Xmax() const {
  return rotate ? XmaxBound(diameter, clients, dim, delta) : diameter;
}

RotationSeed DmeConfig::Rotation() const {
  return RotationSeed::Make(DeriveSeed(master_seed, StreamTag::kRotationSigns,
                                       static_cast<uint64_t>(dim)),
                            static_cast<uint32_t>(dim));
}

void DmeConfig::Validate() const {
  std::vector<std::string> problems;
  if (clients < 1) problems.push_back("clients must be >= 1");
  if (dim < 1) problems.push_back("dim must be >= 1");
  if (!(diameter > 0) || !std::isfinite(diameter)) {
    problems.push_back("diameter must be positive and finite");
  }
  if (levels < 2) problems.push_back("levels must be >= 2");
  if (levels > std::numeric_limits<uint32_t>::max()) {
    problems.push_back("levels exceeds the 32-bit wire field");
  }
  if (noise_m < 0) problems.push_back("noise_m must be >= 0");
  if (noise_m > std::numeric_limits<uint32_t>::max()) {
    problems.push_back("noise_m exceeds the 32-bit wire field");
  }
  if (p_den == 0 || p_num == 0 || p_num >= p_den) {
    problems.push_back("p must be a rational in (0, 1)");
  }
  if (!(delta > 0) || !(delta < 1)) {
    problems.push_back("delta must lie in (0, 1)");
  }
  if (!problems.empty()) {
    std::string what = "DmeConfig:";
    for (const auto& p : problems) what += " [" + p + "]";
    throw std::invalid_argument(what);
  }
}

EncodedClient ClientEncode(std::span<const double> x, const DmeConfig& cfg,
                           int64_t client_index) {
  cfg.Validate();
  if (static_cast<int64_t>(x.size()) != cfg.dim) {
    throw std::invalid_argument("ClientEncode: input dimension mismatch");
  }
  const double norm = NormL2(x);
  if (norm > cfg.diameter * (1.0 + kNormSlack)) {
    throw std::invalid_argument("ClientEncode: ||x||_2 exceeds the clip bound");
  }

  std::vector<double> working;
  if (cfg.rotate) {
    working = Rotate(x, cfg.Rotation()).values;
  } else {
    working.assign(x.begin(), x.end());
  }

  Rng rng(DeriveSeed(cfg.master_seed, StreamTag::kClient,
                     static_cast<uint64_t>(client_index)));
  const QuantizerConfig qcfg{cfg.levels, cfg.Xmax()};
  QuantizeResult quantized = StochasticQuantize(working, qcfg, rng);
  AddBinomialNoise(quantized.levels, cfg.noise_m, cfg.P(), rng);

  ClientMessage message;
  message.header = BuildHeader(cfg);
  message.values.assign(quantized.levels.begin(), quantized.levels.end());

  EncodedClient out;
  out.bytes = EncodeMessage(message);
  out.clip_events = quantized.clip_events;
  return out;
}

DmeResult ServerAggregate(const std::vector<std::vector<uint8_t>>& messages,
                          const DmeConfig& cfg) {
  cfg.Validate();
  if (static_cast<int64_t>(messages.size()) != cfg.clients) {
    throw ProtocolError("ServerAggregate: message count differs from n");
  }
  const MessageHeader expected = BuildHeader(cfg);
  const int64_t message_dim = cfg.MessageDim();

  // Sum the integer symbols exactly; int64 accumulation is order-independent.
  std::vector<int64_t> sums(static_cast<size_t>(message_dim), 0);
  int64_t total_bytes = 0;
  for (const auto& bytes : messages) {
    const ClientMessage message = DecodeMessage(bytes);
    if (!message.header.SameProtocol(expected)) {
      throw ProtocolError("ServerAggregate: header mismatch across clients");
    }
    total_bytes += static_cast<int64_t>(bytes.size());
    for (int64_t j = 0; j < message_dim; ++j) {
      sums[static_cast<size_t>(j)] +=
          static_cast<int64_t>(message.values[static_cast<size_t>(j)]);
    }
  }

  const QuantizerConfig qcfg{cfg.levels, cfg.Xmax()};
  const double spacing = qcfg.Spacing();
  const double n = static_cast<double>(cfg.clients);
  // Mean of B(value) minus the known noise mean spacing * m * p.
  const double base =
      -cfg.Xmax() - spacing * static_cast<double>(cfg.noise_m) * cfg.P();
  std::vector<double> estimate(static_cast<size_t>(message_dim));
  for (int64_t j = 0; j < message_dim; ++j) {
    estimate[static_cast<size_t>(j)] =
        base +
        spacing * (static_cast<double>(sums[static_cast<size_t>(j)]) / n);
  }

  if (cfg.rotate) {
    RotatedVector rotated;
    rotated.values = std::move(estimate);
    rotated.original_dim = static_cast<uint32_t>(cfg.dim);
    estimate = InverseRotate(rotated, cfg.Rotation());
  }

  DmeResult result;
  result.estimate = std::move(estimate);
  result.comm_bits_total = total_bytes * 8;
  const PrivacyRunReport privacy = PrivacyOfRun(cfg);
  result.epsilon_report = privacy.report;
  result.delta_total = privacy.delta_total;
  result.delta_multiplier = privacy.delta_multiplier;
  result.mse_bound = TheoreticalMseBound(cfg);
  return result;
}

DmeResult RunRound(const std::vector<std::vector<double>>& inputs,
                   const DmeConfig& cfg) {
  cfg.Validate();
  if (static_cast<int64_t>(inputs.size()) != cfg.clients) {
    throw ProtocolError("RunRound: input count differs from n");
  }
  std::vector<std::vector<uint8_t>> messages;
  messages.reserve(inputs.size());
  int64_t clip_events = 0;
  for (int64_t i = 0; i < cfg.clients; ++i) {
    EncodedClient encoded =
        ClientEncode(inputs[static_cast<size_t>(i)], cfg, i);
    clip_events += encoded.clip_events;
    messages.push_back(std::move(encoded.bytes));
  }
  DmeResult result = ServerAggregate(messages, cfg);
  result.clip_events = clip_events;
  return result;
}

double TheoreticalMseBound(const DmeConfig& cfg) {
  cfg.Validate();
  const double d = static_cast<double>(cfg.dim);
  const double n = static_cast<double>(cfg.clients);
  const double k1 = static_cast<double>(cfg.levels - 1);
  const double dsq = cfg.diameter * cfg.diameter;
  const double p = cfg.P();
  const double noise_var = static_cast<double>(cfg.noise_m) * p * (1.0 - p);
  if (!cfg.rotate) {
    return d * dsq / (n * k1 * k1) + (d / n) * 4.0 * noise_var * dsq / (k1 * k1);
  }
  const double log_term = std::log(
      2.0 * n * static_cast<double>(cfg.PaddedDim()) / cfg.delta);
  return 2.0 * log_term * dsq / (n * k1 * k1) +
         8.0 * log_term * noise_var * dsq / (n * k1 * k1) +
         4.0 * dsq * cfg.delta * cfg.delta;
}

PrivacyRunReport PrivacyOfRun(const DmeConfig& cfg) {
  cfg.Validate();
  PrivacyRunReport out;
  out.delta_multiplier = cfg.rotate ? 3 : 2;
  out.delta_total = out.delta_multiplier * cfg.delta;
  const int64_t d_used = cfg.MessageDim();
  out.bounds = ComputeSensitivityBounds(cfg.diameter, cfg.Xmax(), cfg.levels,
                                        d_used, cfg.delta);
  if (cfg.noise_m == 0) {
    out.report.conditions_ok = false;
    out.report.epsilon = std::numeric_limits<double>::infinity();
    out.report.condition_details.push_back(
        {"noise_m >= 1 (no noise, no privacy)", 1.0, 0.0, false});
    return out;
  }
  // Aggregate noise across honest clients is Bin(m * n, p); the sensitivity
  // bounds are already in grid-step units, so the scale is 1.
  const BinomialSpec spec{cfg.noise_m * cfg.clients, cfg.P(), 1.0};
  out.report = BinomialEpsilon(spec, out.bounds, d_used, cfg.delta);
  return out;
}

int64_t CommCostBits(const DmeConfig& cfg) {
  cfg.Validate();
  const MessageHeader header = BuildHeader(cfg);
  const int64_t payload_bytes =
      (cfg.MessageDim() * header.BitsPerCoordinate() + 7) / 8;
  return cfg.clients *
         (payload_bytes + static_cast<int64_t>(kWireHeaderBytes)) * 8;
}

std::vector<double> GaussianDme(const std::vector<std::vector<double>>& inputs,
                                double sigma, Rng& rng) {
  if (inputs.empty()) {
    throw std::invalid_argument("GaussianDme: need at least one client");
  }
  const size_t dim = inputs.front().size();
  std::vector<double> estimate(dim, 0.0);
  for (const auto& x : inputs) {
    if (x.size() != dim) {
      throw std::invalid_argument("GaussianDme: ragged inputs");
    }
    for (size_t j = 0; j < dim; ++j) {
      estimate[j] += x[j] + sigma * rng.NextGaussian();
    }
  }
  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  for (double& v : estimate) v *= inv_n;
  return estimate;
}

SelectionResult SelectParameters(const PrivacyBudget& target, int64_t n,
                                 int64_t d, double diameter) {
  target.Validate();
  if (n < 1 || d < 1 || !(diameter > 0)) {
    throw std::invalid_argument("SelectParameters: need n, d >= 1 and D > 0");
  }
  SelectionResult best;
  best.outside_corollary = target.epsilon > 1.0;
  if (best.outside_corollary) {
    best.message = "target epsilon above 1: outside the matching regime";
  }
  // The epsilon-matched Gaussian baseline this search must not exceed.
  const double sigma_star = 2.0 * diameter *
                            std::sqrt(2.0 * std::log(1.25 / target.delta)) /
                            (std::sqrt(static_cast<double>(n)) * target.epsilon);
  best.gaussian_mse =
      static_cast<double>(d) * sigma_star * sigma_star / static_cast<double>(n);

  DmeConfig cfg;
  cfg.clients = n;
  cfg.dim = d;
  cfg.diameter = diameter;
  cfg.p_num = 1;
  cfg.p_den = 2;
  cfg.delta = target.delta;
  cfg.rotate = true;

  const auto meets_privacy = [&cfg, &target](int64_t m) {
    cfg.noise_m = m;
    const PrivacyRunReport report = PrivacyOfRun(cfg);
    return report.report.conditions_ok &&
           report.report.epsilon <= target.epsilon;
  };

  for (int64_t k = 2; k <= kSelectMaxLevels; k *= 2) {
    cfg.levels = k;
    if (!meets_privacy(kSelectMaxNoise)) continue;
    // Epsilon decreases in m, so the cheapest private m is a binary search.
    int64_t lo = 1, hi = kSelectMaxNoise;
    while (lo < hi) {
      const int64_t mid = lo + (hi - lo) / 2;
      if (meets_privacy(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    cfg.noise_m = lo;
    if (cfg.noise_m > std::numeric_limits<uint32_t>::max()) continue;
    const double mse = TheoreticalMseBound(cfg);
    if (mse > best.gaussian_mse) continue;
    const int64_t comm = CommCostBits(cfg);
    if (!best.feasible || comm < best.comm_bits) {
      best.feasible = true;
      best.config = cfg;
      best.comm_bits = comm;
      best.mse_bound = mse;
      best.epsilon = PrivacyOfRun(cfg).report.epsilon;
      best.bits_per_coordinate = BuildHeader(cfg).BitsPerCoordinate();
    }
  }
  if (!best.feasible && best.message.empty()) {
    best.message =
        "no (k, m) within the search bounds meets the privacy target at "
        "Gaussian-level error";
  }
  return best;
}

}  // namespace dpdme
