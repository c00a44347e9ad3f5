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

// Diffie-Hellman key agreement, key derivation and the chained
// double-expansion generator that refreshes pairwise randomness each round.

#ifndef PPFL_GROUP_CRYPTO_HPP_
#define PPFL_GROUP_CRYPTO_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppfl/rng.hpp"

namespace ppfl {

using Bytes = std::vector<uint8_t>;

// Smallest accepted security parameter for the toy group, and the floor for
// the standardized MODP groups.
inline constexpr unsigned kToyLambdaFloor = 8;
inline constexpr unsigned kProductionLambdaFloor = 2048;

// Cyclic subgroup of Z_p^* of prime order q generated by g. `lambda` is the
// security parameter and also the width in bits of derived keys.
struct GroupParams {
  mpz_class p;
  mpz_class q;
  mpz_class g;
  unsigned lambda = 0;
  std::string name;

  size_t element_bytes() const { return (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8; }
  size_t key_bytes() const { return lambda / 8; }
};

// Toy mode always returns the safe-prime group p = 23, q = 11, g = 2.
// Otherwise returns the smallest RFC 3526 MODP group with |p| >= lambda.
GroupParams GenerateGroup(unsigned lambda, bool test_mode);

// Re-checks primality of p and q, g^q == 1 and g != 1. Throws kParameter.
void ValidateGroup(const GroupParams& params);

// True if `element` lies in the order-q subgroup.
bool InGroup(const GroupParams& params, const mpz_class& element);

struct KeyPair {
  mpz_class secret;      // in [0, q)
  mpz_class public_key;  // g^secret mod p
};

KeyPair Keygen(const GroupParams& params, Rng& rng);
KeyPair KeyPairFromSecret(const GroupParams& params, const mpz_class& secret);

struct SharedKey {
  Bytes key;  // lambda bits

  friend bool operator==(const SharedKey&, const SharedKey&) = default;
};

// Fixed-width big-endian encoding of a group element.
Bytes EncodeElement(const GroupParams& params, const mpz_class& element);
mpz_class DecodeElement(std::span<const uint8_t> bytes);

// lambda-bit digest of a group element (SHA-256 in counter mode, truncated).
Bytes Kdf(const GroupParams& params, const mpz_class& element);

// Computes their_public^my_secret and hashes it. Throws kProtocol when the
// public value is outside the group.
SharedKey Agree(const GroupParams& params, const mpz_class& my_secret,
                const mpz_class& their_public);

// G: {0,1}^lambda -> {0,1}^(2 lambda).
Bytes PrgExpand(std::span<const uint8_t> seed);

// Per-pair chained randomness. The state starts with the shared key as seed
// and no current value; every advance runs (r', s) = G(s).
struct MaskChainState {
  Bytes current;
  Bytes seed;
  uint64_t iteration = 0;

  static MaskChainState FromSharedKey(const SharedKey& key);

  friend bool operator==(const MaskChainState&, const MaskChainState&) = default;
};

struct PrgStep {
  Bytes r;
  MaskChainState state;
};

PrgStep PrgAdvance(const MaskChainState& state);

// Counter-mode expansion of a chain value into `count` words uniform over
// [0, 2^modulus_bits).
std::vector<uint64_t> ExpandMasks(std::span<const uint8_t> r, size_t count,
                                  unsigned modulus_bits = 64);

std::string ToHex(std::span<const uint8_t> bytes);

}  // namespace ppfl

#endif  // PPFL_GROUP_CRYPTO_HPP_
