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
//
// Distributed mean estimation protocols: the Gaussian baseline, k-level
// stochastic quantization with Binomial noise, and the rotated variant.
// Clients produce wire-format byte messages; the server aggregates them into
// a debiased mean estimate with privacy and error accounting attached.
#ifndef DPDME_DME_H_
#define DPDME_DME_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpdme/accountant.hpp"
#include "dpdme/quantize.hpp"
#include "dpdme/rng.hpp"
#include "dpdme/transform.hpp"
#include "dpdme/types.hpp"

namespace dpdme {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shared protocol configuration; every client and the server hold an
// identical copy (the header of each message re-states it on the wire).
struct DmeConfig {
  int64_t clients = 0;        // n
  int64_t dim = 0;            // d
  double diameter = 0;        // D, the L2 clip bound
  int64_t levels = 0;         // k >= 2
  int64_t noise_m = 0;        // Binomial trials per client, >= 0
  uint32_t p_num = 1;         // p as an exact rational, 0 < p < 1
  uint32_t p_den = 2;
  double delta = 0;
  bool rotate = false;
  uint64_t master_seed = 0;

  double P() const { return static_cast<double>(p_num) / p_den; }
  int64_t PaddedDim() const {
    return static_cast<int64_t>(NextPowerOfTwo(static_cast<uint64_t>(dim)));
  }
  // Dimension the quantizer operates in (padded when rotating).
  int64_t MessageDim() const { return rotate ? PaddedDim() : dim; }
  // Coordinate clip range: the concentration bound under rotation, D without.
  double Xmax() const;
  // Public rotation randomness, derived from the master seed.
  RotationSeed Rotation() const;
  void Validate() const;
};

struct DmeResult {
  std::vector<double> estimate;  // length dim
  int64_t comm_bits_total = 0;
  int64_t clip_events = 0;  // known to the simulator only, not the server
  EpsilonReport epsilon_report;
  double delta_total = 0;
  int delta_multiplier = 0;  // 2 without rotation, 3 with
  double mse_bound = 0;
};

struct EncodedClient {
  std::vector<uint8_t> bytes;
  int64_t clip_events = 0;
};

// Rotates (optionally), clips, quantizes, noises, and packs one client's
// vector. Deterministic given (cfg, client_index, x). Throws
// std::invalid_argument when ||x||_2 > D * (1 + 1e-9).
EncodedClient ClientEncode(std::span<const double> x, const DmeConfig& cfg,
                           int64_t client_index);

// Decodes and aggregates exactly cfg.clients messages sharing one protocol
// header, debiases, and inverse-rotates. The integer message values are
// summed exactly, so the estimate is bit-identical for any message order.
// clip_events is 0 here; the server cannot observe client-side clipping.
DmeResult ServerAggregate(const std::vector<std::vector<uint8_t>>& messages,
                          const DmeConfig& cfg);

// Full simulated round: encodes every row of X, aggregates, and fills in the
// simulator-side clip count.
DmeResult RunRound(const std::vector<std::vector<double>>& inputs,
                   const DmeConfig& cfg);

// Worst-case MSE bound for the configured protocol.
double TheoreticalMseBound(const DmeConfig& cfg);

struct PrivacyRunReport {
  EpsilonReport report;
  double delta_total = 0;
  int delta_multiplier = 0;
  SensitivityBounds bounds;
};

// Accounts the aggregate noise Bin(m*n, p) at unit scale against the grid
// sensitivity of the quantized sum.
PrivacyRunReport PrivacyOfRun(const DmeConfig& cfg);

// Total bits on the wire for one round: n * (payload + header) bytes * 8.
int64_t CommCostBits(const DmeConfig& cfg);

// Gaussian baseline: mean of X_i + Z_i with spherical N(0, sigma^2) noise.
std::vector<double> GaussianDme(const std::vector<std::vector<double>>& inputs,
                                double sigma, Rng& rng);

struct SelectionResult {
  bool feasible = false;
  std::string message;          // why infeasible, or regime notes
  bool outside_corollary = false;  // target epsilon above 1
  DmeConfig config;
  int bits_per_coordinate = 0;
  double epsilon = 0;
  double mse_bound = 0;
  double gaussian_mse = 0;   // error of the epsilon-matched Gaussian baseline
  int64_t comm_bits = 0;
};

// Searches k over powers of two and binary-searches m for the cheapest
// rotated configuration whose accounted epsilon meets the target and whose
// MSE bound is at most the Gaussian mechanism's at the same budget.
SelectionResult SelectParameters(const PrivacyBudget& target, int64_t n,
                                 int64_t d, double diameter);

}  // namespace dpdme

#endif  // DPDME_DME_H_
