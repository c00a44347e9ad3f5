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

#include "ppfl/secure_agg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppfl/error.hpp"

namespace ppfl {
namespace {

void PutU32(Bytes& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<uint8_t>(v >> (8 * b)));
}

void PutU64(Bytes& out, uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<uint8_t>(v >> (8 * b)));
}

uint64_t GetLE(std::span<const uint8_t> bytes, size_t offset, size_t width) {
  uint64_t v = 0;
  for (size_t b = 0; b < width; ++b) {
    v |= static_cast<uint64_t>(bytes[offset + b]) << (8 * b);
  }
  return v;
}

}  // namespace

FixedPointCodec::FixedPointCodec(unsigned fractional_bits)
    : fractional_bits_(fractional_bits) {
  if (fractional_bits == 0 || fractional_bits >= 40) {
    throw Error(ErrorKind::kParameter,
                "fractional bits must be in (0, 40), got " +
                    std::to_string(fractional_bits));
  }
  scale_ = std::ldexp(1.0, static_cast<int>(fractional_bits));
  bound_ = std::ldexp(1.0, 63 - static_cast<int>(fractional_bits));
}

uint64_t FixedPointCodec::Encode(double value) const {
  if (!std::isfinite(value) || std::fabs(value) >= bound_) {
    throw Error(ErrorKind::kEncoding,
                "value " + std::to_string(value) +
                    " outside fixed-point bound " + std::to_string(bound_));
  }
  const auto fixed = static_cast<int64_t>(std::llround(value * scale_));
  return static_cast<uint64_t>(fixed);
}

std::vector<uint64_t> FixedPointCodec::Encode(
    std::span<const double> values) const {
  std::vector<uint64_t> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(Encode(v));
  return out;
}

double FixedPointCodec::Decode(uint64_t word) const {
  return static_cast<double>(static_cast<int64_t>(word)) / scale_;
}

double FixedPointCodec::DecodeSum(uint64_t total, size_t n) const {
  return Decode(total) / static_cast<double>(n);
}

double LaplaceTailBound(double scale) {
  if (scale <= 0.0) return 0.0;
  return -scale * std::log(2.0 * 1e-12);
}

void CheckAggregationBound(const FixedPointCodec& codec, size_t n,
                           double weight_bound, double noise_scale) {
  const double worst =
      static_cast<double>(n) * (weight_bound + LaplaceTailBound(noise_scale));
  if (!(worst < codec.magnitude_bound())) {
    throw Error(ErrorKind::kConfig,
                "aggregate bound " + std::to_string(worst) +
                    " exceeds fixed-point range " +
                    std::to_string(codec.magnitude_bound()) +
                    "; lower fractional bits, the weight bound or n");
  }
}

Bytes SerializeMaskedVector(const MaskedVector& vec) {
  Bytes out;
  out.reserve(12 + 8 * vec.words.size());
  PutU32(out, vec.iteration);
  PutU32(out, vec.client_id);
  PutU32(out, static_cast<uint32_t>(vec.words.size()));
  for (uint64_t w : vec.words) PutU64(out, w);
  return out;
}

MaskedVector ParseMaskedVector(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12) {
    throw Error(ErrorKind::kProtocol, "masked vector header truncated");
  }
  MaskedVector vec;
  vec.iteration = static_cast<uint32_t>(GetLE(bytes, 0, 4));
  vec.client_id = static_cast<uint32_t>(GetLE(bytes, 4, 4));
  const auto count = static_cast<size_t>(GetLE(bytes, 8, 4));
  if (bytes.size() != 12 + 8 * count) {
    throw Error(ErrorKind::kProtocol,
                "masked vector length " + std::to_string(bytes.size()) +
                    " does not match word count " + std::to_string(count));
  }
  vec.words.resize(count);
  for (size_t k = 0; k < count; ++k) vec.words[k] = GetLE(bytes, 12 + 8 * k, 8);
  return vec;
}

void PairAssignment::AddPair(uint32_t i, uint32_t j,
                             std::vector<uint64_t> words) {
  if (i == j) throw Error(ErrorKind::kProtocol, "self pair");
  if (!Covers(i) || !Covers(j)) {
    throw Error(ErrorKind::kProtocol, "pair references client outside roster");
  }
  const auto key = std::minmax(i, j);
  if (!pairs_.emplace(key, std::move(words)).second) {
    throw Error(ErrorKind::kProtocol,
                "duplicate pair (" + std::to_string(key.first) + ", " +
                    std::to_string(key.second) + ")");
  }
  for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
    auto& list = partners_[a];
    list.insert(std::upper_bound(list.begin(), list.end(), b), b);
  }
}

const std::vector<uint32_t>& PairAssignment::partners(uint32_t client) const {
  static const std::vector<uint32_t> kNone;
  const auto it = partners_.find(client);
  return it == partners_.end() ? kNone : it->second;
}

MaskedVector Mask(const PairAssignment& assignment, uint32_t client,
                  std::span<const uint64_t> encoded,
                  std::span<const uint64_t> noise_words, uint32_t iteration) {
  if (!assignment.Covers(client)) {
    throw Error(ErrorKind::kProtocol,
                "client " + std::to_string(client) + " not in assignment");
  }
  if (noise_words.size() != encoded.size()) {
    throw Error(ErrorKind::kProtocol, "noise length differs from weights");
  }
  MaskedVector out;
  out.client_id = client;
  out.iteration = iteration;
  out.words.assign(encoded.begin(), encoded.end());
  for (size_t k = 0; k < out.words.size(); ++k) out.words[k] += noise_words[k];
  for (uint32_t partner : assignment.partners(client)) {
    const bool adds = client < partner;
    const std::vector<uint64_t>& words = assignment.words(client, partner);
    if (words.size() != out.words.size()) {
      throw Error(ErrorKind::kProtocol, "mask length differs from weights");
    }
    for (size_t k = 0; k < out.words.size(); ++k) {
      out.words[k] = adds ? out.words[k] + words[k] : out.words[k] - words[k];
    }
  }
  return out;
}

std::vector<uint64_t> ModularSum(std::span<const MaskedVector> msgs,
                                 size_t expected_clients) {
  if (msgs.size() != expected_clients) {
    throw Error(ErrorKind::kProtocol,
                "expected " + std::to_string(expected_clients) +
                    " masked vectors, got " + std::to_string(msgs.size()));
  }
  if (msgs.empty()) return {};
  std::set<uint32_t> seen;
  const size_t length = msgs.front().words.size();
  const uint32_t iteration = msgs.front().iteration;
  std::vector<uint64_t> total(length, 0);
  for (const MaskedVector& m : msgs) {
    if (!seen.insert(m.client_id).second) {
      throw Error(ErrorKind::kProtocol,
                  "duplicate submission from client " +
                      std::to_string(m.client_id));
    }
    if (m.words.size() != length) {
      throw Error(ErrorKind::kProtocol, "masked vector length mismatch");
    }
    if (m.iteration != iteration) {
      throw Error(ErrorKind::kProtocol, "masked vectors from mixed iterations");
    }
    for (size_t k = 0; k < length; ++k) total[k] += m.words[k];
  }
  return total;
}

std::vector<double> Aggregate(std::span<const MaskedVector> msgs,
                              const FixedPointCodec& codec, size_t n) {
  const std::vector<uint64_t> total = ModularSum(msgs, n);
  std::vector<double> w(total.size());
  for (size_t k = 0; k < total.size(); ++k) w[k] = codec.DecodeSum(total[k], n);
  return w;
}

}  // namespace ppfl
