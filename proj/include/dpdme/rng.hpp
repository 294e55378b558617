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
#ifndef DPDME_RNG_H_
#define DPDME_RNG_H_

#include <cstdint>
#include <random>

namespace dpdme {

// Identifies the pseudorandom generator family carried in message headers so
// that clients and the server derive identical public randomness. Value 1 is
// the only generator this library implements: std::mt19937_64 (whose output
// sequence is fully specified by the C++ standard) seeded through DeriveSeed.
enum class GeneratorId : uint8_t {
  kMt19937 = 1,
};

// Stream tags keep independently derived seed streams from colliding.
// The numeric values are part of the protocol: changing them changes every
// derived rotation, so treat them as frozen.
enum class StreamTag : uint64_t {
  kRotationSigns = 1,
  kClient = 2,
  kTrial = 3,
  kRoundClients = 4,
  kRoundDme = 5,
  kGaussianNoise = 6,
  kModelData = 7,
  kInitialIterate = 8,
};

// SplitMix64-style finalizer. Bijective, well mixed, stable.
constexpr uint64_t Mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives the seed of an independent stream from a master seed, a stream tag,
// and an index within the stream family. Pure; identical on every platform.
constexpr uint64_t DeriveSeed(uint64_t master, StreamTag tag, uint64_t index) {
  uint64_t s = Mix64(master) ^ Mix64(static_cast<uint64_t>(tag));
  return Mix64(Mix64(s) ^ Mix64(index));
}

// Deterministic random stream. The engine sequence is bit-exact across
// platforms; the distribution transforms below are implemented here (rather
// than with std::*_distribution, whose output is implementation-defined) so
// that a fixed seed reproduces identical samples everywhere the same libm
// rounding applies.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double NextUniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Unbiased via rejection.
  uint64_t NextBounded(uint64_t bound);

  // N(0, 1) via the Marsaglia polar method.
  double NextGaussian();

  // Exact Binomial(trials, p) sample. Uses CDF inversion when
  // trials * min(p, 1 - p) is small and the BTPE accept/reject scheme
  // otherwise; both sample the exact binomial law (no normal approximation).
  int64_t NextBinomial(int64_t trials, double p);

 private:
  int64_t BinomialInversion(int64_t trials, double p);
  int64_t BinomialBtpe(int64_t trials, double p);

  std::mt19937_64 engine_;
  bool have_spare_gaussian_ = false;
  double spare_gaussian_ = 0;
};

}  // namespace dpdme

#endif  // DPDME_RNG_H_
