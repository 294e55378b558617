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
#include "dpdme/quantize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace dpdme {
namespace {

// Little-endian scalar IO.
void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

void PutU64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t GetU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint64_t GetU64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

// Packs fixed-width values least-significant-bit first.
class BitWriter {
 public:
  explicit BitWriter(size_t total_bytes) { bytes_.assign(total_bytes, 0); }

  void Append(uint64_t value, int bits) {
    size_t byte = bit_pos_ >> 3;
    int shift = static_cast<int>(bit_pos_ & 7);
    bit_pos_ += static_cast<size_t>(bits);
    // Write through a sliding byte window.
    while (bits > 0) {
      bytes_[byte] |= static_cast<uint8_t>(value << shift);
      const int written = 8 - shift;
      value >>= written;
      bits -= written;
      shift = 0;
      ++byte;
    }
  }

  std::vector<uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
  size_t bit_pos_ = 0;
};

class BitReader {
 public:
  BitReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  uint64_t Read(int bits) {
    uint64_t value = 0;
    int out_shift = 0;
    size_t byte = bit_pos_ >> 3;
    int shift = static_cast<int>(bit_pos_ & 7);
    bit_pos_ += static_cast<size_t>(bits);
    while (bits > 0) {
      const int take = std::min(8 - shift, bits);
      const uint64_t chunk = (static_cast<uint64_t>(data_[byte]) >> shift) &
                             ((uint64_t{1} << take) - 1);
      value |= chunk << out_shift;
      out_shift += take;
      bits -= take;
      shift = 0;
      ++byte;
    }
    return value;
  }

  size_t size() const { return size_; }

 private:
  const uint8_t* data_;
  size_t size_;
  size_t bit_pos_ = 0;
};

}  // namespace

void QuantizerConfig::Validate() const {
  if (levels < 2) {
    throw std::invalid_argument("QuantizerConfig: levels must be >= 2");
  }
  if (!(xmax > 0) || !std::isfinite(xmax)) {
    throw std::invalid_argument("QuantizerConfig: xmax must be positive");
  }
}

QuantizeResult StochasticQuantize(std::span<const double> x,
                                  const QuantizerConfig& cfg, Rng& rng) {
  cfg.Validate();
  const double spacing = cfg.Spacing();
  QuantizeResult out;
  out.levels.resize(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    double v = x[j];
    if (!std::isfinite(v)) {
      throw std::invalid_argument("StochasticQuantize: input must be finite");
    }
    if (v < -cfg.xmax) {
      v = -cfg.xmax;
      ++out.clip_events;
    } else if (v > cfg.xmax) {
      v = cfg.xmax;
      ++out.clip_events;
    }
    int64_t r = static_cast<int64_t>(std::floor((v + cfg.xmax) / spacing));
    r = std::clamp<int64_t>(r, 0, cfg.levels - 2);
    double up_prob = (v - cfg.GridPoint(r)) / spacing;
    up_prob = std::clamp(up_prob, 0.0, 1.0);
    // A value exactly on a grid point has up_prob 0 and keeps its level.
    out.levels[j] = r + (rng.NextUniform() < up_prob ? 1 : 0);
  }
  return out;
}

void AddBinomialNoise(std::vector<int64_t>& levels, int64_t m, double p,
                      Rng& rng) {
  if (m == 0) return;
  for (int64_t& v : levels) {
    v += rng.NextBinomial(m, p);
  }
}

int MessageHeader::BitsPerCoordinate() const {
  const uint64_t max_symbol =
      static_cast<uint64_t>(levels_k) - 1 + static_cast<uint64_t>(noise_m);
  return std::max(1, static_cast<int>(std::bit_width(max_symbol)));
}

bool MessageHeader::SameProtocol(const MessageHeader& other) const {
  uint64_t xmax_bits, other_xmax_bits;
  std::memcpy(&xmax_bits, &xmax, sizeof xmax_bits);
  std::memcpy(&other_xmax_bits, &other.xmax, sizeof other_xmax_bits);
  return version == other.version && rotation_on == other.rotation_on &&
         dim == other.dim && levels_k == other.levels_k &&
         noise_m == other.noise_m && p_num == other.p_num &&
         p_den == other.p_den && xmax_bits == other_xmax_bits &&
         generator_id == other.generator_id &&
         rotation_seed == other.rotation_seed;
}

std::vector<uint8_t> EncodeMessage(const ClientMessage& message) {
  const MessageHeader& h = message.header;
  if (h.levels_k < 2 || h.p_den == 0 || h.p_num == 0 || h.p_num >= h.p_den) {
    throw WireFormatError(WireError::kBadHeaderField,
                          "EncodeMessage: invalid protocol parameters");
  }
  if (message.values.size() != h.dim) {
    throw WireFormatError(WireError::kLengthMismatch,
                          "EncodeMessage: value count differs from header dim");
  }
  const uint64_t max_symbol =
      static_cast<uint64_t>(h.levels_k) - 1 + static_cast<uint64_t>(h.noise_m);
  const int bits = h.BitsPerCoordinate();
  const size_t payload_bytes = (static_cast<size_t>(h.dim) * bits + 7) / 8;

  std::vector<uint8_t> out;
  out.reserve(kWireHeaderBytes + payload_bytes);
  out.push_back(kWireMagic0);
  out.push_back(kWireMagic1);
  out.push_back(h.version);
  out.push_back(h.rotation_on ? 1 : 0);
  PutU32(out, h.dim);
  PutU32(out, h.levels_k);
  PutU32(out, h.noise_m);
  PutU32(out, h.p_num);
  PutU32(out, h.p_den);
  uint64_t xmax_bits;
  std::memcpy(&xmax_bits, &h.xmax, sizeof xmax_bits);
  PutU64(out, xmax_bits);
  out.push_back(h.rotation_on ? h.generator_id : 0);
  PutU64(out, h.rotation_on ? h.rotation_seed : 0);
  PutU32(out, static_cast<uint32_t>(payload_bytes));

  BitWriter writer(payload_bytes);
  for (uint64_t v : message.values) {
    if (v > max_symbol) {
      throw WireFormatError(WireError::kValueOutOfRange,
                            "EncodeMessage: value exceeds k-1+m");
    }
    writer.Append(v, bits);
  }
  std::vector<uint8_t> payload = writer.Take();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

ClientMessage DecodeMessage(std::span<const uint8_t> bytes) {
  if (bytes.size() < kWireHeaderBytes) {
    throw WireFormatError(WireError::kTruncated,
                          "DecodeMessage: missing header");
  }
  const uint8_t* p = bytes.data();
  if (p[0] != kWireMagic0 || p[1] != kWireMagic1) {
    throw WireFormatError(WireError::kBadMagic, "DecodeMessage: bad magic");
  }
  ClientMessage message;
  MessageHeader& h = message.header;
  h.version = p[2];
  if (h.version != kWireVersion) {
    throw WireFormatError(WireError::kVersionMismatch,
                          "DecodeMessage: unsupported version");
  }
  if ((p[3] & ~uint8_t{1}) != 0) {
    throw WireFormatError(WireError::kBadHeaderField,
                          "DecodeMessage: unknown flag bits");
  }
  h.rotation_on = (p[3] & 1) != 0;
  h.dim = GetU32(p + 4);
  h.levels_k = GetU32(p + 8);
  h.noise_m = GetU32(p + 12);
  h.p_num = GetU32(p + 16);
  h.p_den = GetU32(p + 20);
  uint64_t xmax_bits = GetU64(p + 24);
  std::memcpy(&h.xmax, &xmax_bits, sizeof h.xmax);
  h.generator_id = p[32];
  h.rotation_seed = GetU64(p + 33);
  const uint32_t payload_len = GetU32(p + 41);

  if (h.levels_k < 2 || h.p_den == 0 || h.p_num == 0 || h.p_num >= h.p_den ||
      !std::isfinite(h.xmax) || h.xmax <= 0) {
    throw WireFormatError(WireError::kBadHeaderField,
                          "DecodeMessage: invalid protocol parameters");
  }
  const int bits = h.BitsPerCoordinate();
  const size_t expected =
      (static_cast<size_t>(h.dim) * static_cast<size_t>(bits) + 7) / 8;
  if (payload_len != expected) {
    throw WireFormatError(WireError::kLengthMismatch,
                          "DecodeMessage: payload length disagrees with d,k,m");
  }
  if (bytes.size() != kWireHeaderBytes + payload_len) {
    throw WireFormatError(WireError::kTruncated,
                          "DecodeMessage: truncated or oversized payload");
  }

  const uint64_t max_symbol =
      static_cast<uint64_t>(h.levels_k) - 1 + static_cast<uint64_t>(h.noise_m);
  BitReader reader(p + kWireHeaderBytes, payload_len);
  message.values.resize(h.dim);
  for (uint32_t j = 0; j < h.dim; ++j) {
    const uint64_t v = reader.Read(bits);
    if (v > max_symbol) {
      throw WireFormatError(WireError::kValueOutOfRange,
                            "DecodeMessage: symbol exceeds k-1+m");
    }
    message.values[j] = v;
  }
  return message;
}

}  // namespace dpdme
