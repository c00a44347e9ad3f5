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

// Fixed-point encoding into 64-bit words, pairwise masking with the
// index-based sign rule, and masked summation on the server.
//
// All mask arithmetic is done modulo M = 2^64 by unsigned wraparound. The DH
// group is only used to agree on the pairwise keys.

#ifndef PPFL_SECURE_AGG_HPP_
#define PPFL_SECURE_AGG_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "ppfl/group_crypto.hpp"

namespace ppfl {

inline constexpr unsigned kDefaultFractionalBits = 24;

class FixedPointCodec {
 public:
  explicit FixedPointCodec(unsigned fractional_bits = kDefaultFractionalBits);

  unsigned fractional_bits() const { return fractional_bits_; }
  double scale() const { return scale_; }
  // Largest encodable magnitude, B = M / (2 * 2^F) = 2^(63 - F).
  double magnitude_bound() const { return bound_; }
  // Worst-case per-element rounding error of one encode/decode round trip.
  double resolution() const { return 1.0 / scale_; }

  uint64_t Encode(double value) const;
  std::vector<uint64_t> Encode(std::span<const double> values) const;

  // Center-lifts a word into (-M/2, M/2] and rescales.
  double Decode(uint64_t word) const;
  // Decode(total) / n.
  double DecodeSum(uint64_t total, size_t n) const;

 private:
  unsigned fractional_bits_;
  double scale_;
  double bound_;
};

// Upper 1 - 1e-12 quantile of Laplace(0, scale).
double LaplaceTailBound(double scale);

// Startup check that the center-lift precondition of DecodeSum holds with
// overwhelming probability: n * (weight_bound + tail(noise_scale)) < B.
void CheckAggregationBound(const FixedPointCodec& codec, size_t n,
                           double weight_bound, double noise_scale);

struct MaskedVector {
  std::vector<uint64_t> words;
  uint32_t client_id = 0;
  uint32_t iteration = 0;

  friend bool operator==(const MaskedVector&, const MaskedVector&) = default;
};

// Wire format, all integers little-endian:
//   u32 iteration | u32 client_id | u32 word_count | word_count x u64 words
Bytes SerializeMaskedVector(const MaskedVector& vec);
MaskedVector ParseMaskedVector(std::span<const uint8_t> bytes);

// Per-iteration expanded pairwise masks known to (a subset of) the roster.
// The lower index of each pair adds its words, the higher index subtracts.
class PairAssignment {
 public:
  PairAssignment() = default;
  explicit PairAssignment(std::set<uint32_t> roster)
      : roster_(std::move(roster)) {}

  void AddClient(uint32_t client) { roster_.insert(client); }
  // Throws kProtocol for i == j, duplicate pairs or unknown clients.
  void AddPair(uint32_t i, uint32_t j, std::vector<uint64_t> words);

  bool Covers(uint32_t client) const { return roster_.count(client) > 0; }
  const std::set<uint32_t>& roster() const { return roster_; }
  const std::map<std::pair<uint32_t, uint32_t>, std::vector<uint64_t>>&
  pairs() const {
    return pairs_;
  }
  // Partners of `client` that share a pair with it, ascending.
  const std::vector<uint32_t>& partners(uint32_t client) const;
  const std::vector<uint64_t>& words(uint32_t i, uint32_t j) const {
    return pairs_.at(std::minmax(i, j));
  }

 private:
  std::set<uint32_t> roster_;
  std::map<std::pair<uint32_t, uint32_t>, std::vector<uint64_t>> pairs_;
  std::map<uint32_t, std::vector<uint32_t>> partners_;
};

// y_k = encoded_k + noise_k + sum_{client<j} mask_k - sum_{i<client} mask_k.
MaskedVector Mask(const PairAssignment& assignment, uint32_t client,
                  std::span<const uint64_t> encoded,
                  std::span<const uint64_t> noise_words, uint32_t iteration);

// Word-wise sum mod 2^64 of one vector per expected client. Throws kProtocol
// for a missing or duplicate client, mixed iterations or length mismatch.
std::vector<uint64_t> ModularSum(std::span<const MaskedVector> msgs,
                                 size_t expected_clients);

// The shared model W: per-weight DecodeSum of the modular sum.
std::vector<double> Aggregate(std::span<const MaskedVector> msgs,
                              const FixedPointCodec& codec, size_t n);

}  // namespace ppfl

#endif  // PPFL_SECURE_AGG_HPP_
