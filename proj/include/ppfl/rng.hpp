/*
 * Copyright 2026 The PPFL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PPFL_RNG_HPP_
#define PPFL_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ppfl {

// Stream tags keep the per-purpose random streams of one agent disjoint.
enum class Stream : uint64_t {
  kKeygen = 1,
  kNoise = 2,
  kSample = 3,
  kSplit = 4,
  kSynth = 5,
  kLatency = 6,
  kJitter = 7,
  kTest = 99,
};

// SplitMix64 finalizer; used to fold (seed, tags...) into a stream seed.
constexpr uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t DeriveSeed(uint64_t run_seed, Stream stream,
                           std::initializer_list<uint64_t> tags = {}) {
  uint64_t h = MixSeed(run_seed ^ MixSeed(static_cast<uint64_t>(stream)));
  for (uint64_t t : tags) h = MixSeed(h ^ MixSeed(t + 0x632be59bd9b4e019ULL));
  return h;
}

// Seeded 64-bit source. std::mt19937_64 output is fully specified by the
// standard; the floating-point helpers below avoid the implementation-defined
// std distributions so results are identical across standard libraries.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) without modulo bias.
  uint64_t Below(uint64_t bound);

  // Standard normal via Box-Muller (one draw per call, second value dropped).
  double Normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ppfl

#endif  // PPFL_RNG_HPP_
