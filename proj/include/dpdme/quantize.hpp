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
// k-level stochastic quantization onto the grid
//   B(r) = -xmax + r * 2 xmax / (k-1),  r = 0..k-1,
// additive Binomial noise in grid units, and the bit-exact client message
// encoding.
#ifndef DPDME_QUANTIZE_H_
#define DPDME_QUANTIZE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dpdme/rng.hpp"

namespace dpdme {

struct QuantizerConfig {
  int64_t levels = 0;  // k >= 2
  double xmax = 0;     // grid endpoint, > 0

  // Distance between adjacent grid points: 2 xmax / (k-1).
  double Spacing() const { return 2.0 * xmax / static_cast<double>(levels - 1); }
  // Grid point for level r.
  double GridPoint(int64_t r) const {
    return -xmax + Spacing() * static_cast<double>(r);
  }
  void Validate() const;
};

struct QuantizeResult {
  std::vector<int64_t> levels;  // each in [0, k-1]
  int64_t clip_events = 0;      // coordinates clamped to [-xmax, xmax]
};

// Unbiased stochastic rounding: a coordinate between adjacent grid points
// moves to the upper one with probability proportional to its position in the
// cell; a coordinate exactly on a grid point keeps it with probability 1.
// Coordinates outside [-xmax, xmax] are clamped first (and counted).
QuantizeResult StochasticQuantize(std::span<const double> x,
                                  const QuantizerConfig& cfg, Rng& rng);

// Adds an independent Bin(m, p) draw to every entry. Entries must be
// quantizer levels in [0, k-1]; afterwards values lie in [0, k-1+m].
void AddBinomialNoise(std::vector<int64_t>& levels, int64_t m, double p,
                      Rng& rng);

// ---------------------------------------------------------------------------
// Wire format (all multi-byte fields little-endian):
//   magic           2 bytes   0xC9 0x5D
//   version         1 byte    1
//   flags           1 byte    bit0 = rotation on
//   d               4 bytes
//   k               4 bytes
//   m               4 bytes
//   p numerator     4 bytes
//   p denominator   4 bytes
//   xmax            8 bytes   IEEE binary64
//   generator id    1 byte    0 when rotation off
//   rotation seed   8 bytes   0 when rotation off
//   payload length  4 bytes   bytes of payload
//   payload         ceil(d * bits / 8) bytes, bits = ceil(log2(k + m)),
//                   values packed least-significant-bit first in index order
// ---------------------------------------------------------------------------

inline constexpr uint8_t kWireMagic0 = 0xC9;
inline constexpr uint8_t kWireMagic1 = 0x5D;
inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kWireHeaderBytes = 45;

struct MessageHeader {
  uint8_t version = kWireVersion;
  bool rotation_on = false;
  uint32_t dim = 0;
  uint32_t levels_k = 0;
  uint32_t noise_m = 0;
  uint32_t p_num = 0;
  uint32_t p_den = 1;
  double xmax = 0;
  uint8_t generator_id = 0;
  uint64_t rotation_seed = 0;

  // Bits needed per packed coordinate: ceil(log2(k + m)).
  int BitsPerCoordinate() const;
  bool SameProtocol(const MessageHeader& other) const;
};

struct ClientMessage {
  MessageHeader header;
  std::vector<uint64_t> values;  // length dim, each in [0, k-1+m]
};

enum class WireError {
  kValueOutOfRange,
  kBadMagic,
  kVersionMismatch,
  kTruncated,
  kLengthMismatch,
  kBadHeaderField,
};

class WireFormatError : public std::runtime_error {
 public:
  WireFormatError(WireError code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  WireError code() const { return code_; }

 private:
  WireError code_;
};

std::vector<uint8_t> EncodeMessage(const ClientMessage& message);
ClientMessage DecodeMessage(std::span<const uint8_t> bytes);

}  // namespace dpdme

#endif  // DPDME_QUANTIZE_H_
