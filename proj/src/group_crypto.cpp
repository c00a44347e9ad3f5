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

#include "ppfl/group_crypto.hpp"

#include <openssl/bn.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <array>
#include <memory>

#include "ppfl/error.hpp"

namespace ppfl {
namespace {

using BigNumFetcher = BIGNUM* (*)(BIGNUM*);

struct ModpGroup {
  unsigned bits;
  BigNumFetcher fetch;
  const char* name;
};

constexpr std::array<ModpGroup, 5> kModpGroups = {{
    {2048, &BN_get_rfc3526_prime_2048, "rfc3526-modp-2048"},
    {3072, &BN_get_rfc3526_prime_3072, "rfc3526-modp-3072"},
    {4096, &BN_get_rfc3526_prime_4096, "rfc3526-modp-4096"},
    {6144, &BN_get_rfc3526_prime_6144, "rfc3526-modp-6144"},
    {8192, &BN_get_rfc3526_prime_8192, "rfc3526-modp-8192"},
}};

mpz_class FetchPrime(BigNumFetcher fetch) {
  std::unique_ptr<BIGNUM, decltype(&BN_free)> bn(fetch(nullptr), &BN_free);
  if (!bn) throw Error(ErrorKind::kParameter, "failed to load MODP prime");
  std::unique_ptr<char, void (*)(char*)> hex(
      BN_bn2hex(bn.get()), [](char* s) { OPENSSL_free(s); });
  return mpz_class(hex.get(), 16);
}

using Digest = std::array<uint8_t, SHA256_DIGEST_LENGTH>;

// SHA-256(tag || be32(counter) || body)
// The digest is fetched once; each thread reuses one context.
const EVP_MD* Sha256() {
  static const EVP_MD* const md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
  return md;
}

Digest TaggedHash(std::string_view tag, uint32_t counter,
                  std::span<const uint8_t> body) {
  thread_local const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  const uint8_t be_counter[4] = {
      static_cast<uint8_t>(counter >> 24), static_cast<uint8_t>(counter >> 16),
      static_cast<uint8_t>(counter >> 8), static_cast<uint8_t>(counter)};
  Digest out;
  unsigned len = 0;
  if (!ctx || !Sha256() || EVP_DigestInit_ex(ctx.get(), Sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), tag.data(), tag.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), be_counter, sizeof(be_counter)) != 1 ||
      EVP_DigestUpdate(ctx.get(), body.data(), body.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1) {
    throw Error(ErrorKind::kParameter, "SHA-256 unavailable from libcrypto");
  }
  return out;
}

Bytes CounterModeStream(std::string_view tag, std::span<const uint8_t> body,
                        size_t out_bytes) {
  Bytes out;
  out.reserve(out_bytes + SHA256_DIGEST_LENGTH);
  for (uint32_t ctr = 0; out.size() < out_bytes; ++ctr) {
    const Digest d = TaggedHash(tag, ctr, body);
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(out_bytes);
  return out;
}

mpz_class RandomBelow(const mpz_class& bound, Rng& rng) {
  const size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const size_t words = (bits + 63) / 64;
  std::vector<uint64_t> buf(words);
  mpz_class x;
  do {
    for (auto& w : buf) w = rng();
    const size_t spare = words * 64 - bits;
    if (spare > 0) buf.back() >>= spare;
    // Least significant word first, native endianness within each word.
    mpz_import(x.get_mpz_t(), words, -1, sizeof(uint64_t), 0, 0, buf.data());
  } while (x >= bound);
  return x;
}

}  // namespace

GroupParams GenerateGroup(unsigned lambda, bool test_mode) {
  if (lambda % 8 != 0) {
    throw Error(ErrorKind::kParameter,
                "lambda must be a multiple of 8, got " + std::to_string(lambda));
  }
  if (test_mode) {
    if (lambda < kToyLambdaFloor) {
      throw Error(ErrorKind::kParameter,
                  "lambda " + std::to_string(lambda) + " below toy floor " +
                      std::to_string(kToyLambdaFloor));
    }
    // 2 = 5^2 generates the quadratic residues, the order-11 subgroup.
    return GroupParams{23, 11, 2, lambda, "toy-23"};
  }
  if (lambda < kProductionLambdaFloor) {
    throw Error(ErrorKind::kParameter,
                "lambda " + std::to_string(lambda) +
                    " below production floor " +
                    std::to_string(kProductionLambdaFloor));
  }
  for (const ModpGroup& group : kModpGroups) {
    if (group.bits >= lambda) {
      GroupParams params;
      params.p = FetchPrime(group.fetch);
      params.q = (params.p - 1) / 2;
      params.g = 2;
      params.lambda = lambda;
      params.name = group.name;
      return params;
    }
  }
  throw Error(ErrorKind::kParameter,
              "no standardized group with at least " + std::to_string(lambda) +
                  " bits");
}

void ValidateGroup(const GroupParams& params) {
  if (mpz_probab_prime_p(params.p.get_mpz_t(), 25) == 0) {
    throw Error(ErrorKind::kParameter, "group modulus is not prime");
  }
  if (mpz_probab_prime_p(params.q.get_mpz_t(), 25) == 0) {
    throw Error(ErrorKind::kParameter, "group order is not prime");
  }
  if ((params.p - 1) % params.q != 0) {
    throw Error(ErrorKind::kParameter, "q does not divide p - 1");
  }
  mpz_class check;
  mpz_powm(check.get_mpz_t(), params.g.get_mpz_t(), params.q.get_mpz_t(),
           params.p.get_mpz_t());
  if (params.g <= 1 || params.g >= params.p || check != 1) {
    throw Error(ErrorKind::kParameter, "g does not generate an order-q subgroup");
  }
  if (params.lambda < kToyLambdaFloor || params.lambda % 8 != 0) {
    throw Error(ErrorKind::kParameter, "invalid lambda");
  }
}

bool InGroup(const GroupParams& params, const mpz_class& element) {
  if (element <= 0 || element >= params.p) return false;
  if (params.p == 2 * params.q + 1) {
    // Safe prime: the order-q subgroup is exactly the quadratic residues.
    return mpz_legendre(element.get_mpz_t(), params.p.get_mpz_t()) == 1;
  }
  mpz_class check;
  mpz_powm(check.get_mpz_t(), element.get_mpz_t(), params.q.get_mpz_t(),
           params.p.get_mpz_t());
  return check == 1;
}

KeyPair KeyPairFromSecret(const GroupParams& params, const mpz_class& secret) {
  KeyPair kp;
  kp.secret = secret;
  mpz_powm(kp.public_key.get_mpz_t(), params.g.get_mpz_t(),
           secret.get_mpz_t(), params.p.get_mpz_t());
  return kp;
}

KeyPair Keygen(const GroupParams& params, Rng& rng) {
  return KeyPairFromSecret(params, RandomBelow(params.q, rng));
}

Bytes EncodeElement(const GroupParams& params, const mpz_class& element) {
  const size_t width = params.element_bytes();
  Bytes out(width, 0);
  size_t count = 0;
  Bytes raw((mpz_sizeinbase(element.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(raw.data(), &count, 1, 1, 1, 0, element.get_mpz_t());
  if (count > width) {
    throw Error(ErrorKind::kProtocol, "group element wider than modulus");
  }
  std::copy_n(raw.begin(), count, out.begin() + (width - count));
  return out;
}

mpz_class DecodeElement(std::span<const uint8_t> bytes) {
  mpz_class x;
  if (!bytes.empty()) {
    mpz_import(x.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return x;
}

Bytes Kdf(const GroupParams& params, const mpz_class& element) {
  return CounterModeStream("ppfl/kdf", EncodeElement(params, element),
                           params.key_bytes());
}

SharedKey Agree(const GroupParams& params, const mpz_class& my_secret,
                const mpz_class& their_public) {
  if (!InGroup(params, their_public)) {
    throw Error(ErrorKind::kProtocol, "public key is not a group element");
  }
  mpz_class common;
  mpz_powm(common.get_mpz_t(), their_public.get_mpz_t(),
           my_secret.get_mpz_t(), params.p.get_mpz_t());
  return SharedKey{Kdf(params, common)};
}

Bytes PrgExpand(std::span<const uint8_t> seed) {
  return CounterModeStream("ppfl/prg", seed, 2 * seed.size());
}

MaskChainState MaskChainState::FromSharedKey(const SharedKey& key) {
  return MaskChainState{{}, key.key, 0};
}

PrgStep PrgAdvance(const MaskChainState& state) {
  const Bytes expanded = PrgExpand(state.seed);
  const size_t half = state.seed.size();
  PrgStep step;
  step.r.assign(expanded.begin(), expanded.begin() + half);
  step.state.current = step.r;
  step.state.seed.assign(expanded.begin() + half, expanded.end());
  step.state.iteration = state.iteration + 1;
  return step;
}

std::vector<uint64_t> ExpandMasks(std::span<const uint8_t> r, size_t count,
                                  unsigned modulus_bits) {
  if (modulus_bits == 0 || modulus_bits > 64) {
    throw Error(ErrorKind::kParameter, "mask modulus must be 2^1 .. 2^64");
  }
  const uint64_t keep =
      modulus_bits == 64 ? ~uint64_t{0} : (uint64_t{1} << modulus_bits) - 1;
  std::vector<uint64_t> out;
  out.reserve(count);
  constexpr size_t kWordsPerBlock = SHA256_DIGEST_LENGTH / 8;
  for (uint32_t ctr = 0; out.size() < count; ++ctr) {
    const Digest d = TaggedHash("ppfl/mask", ctr, r);
    for (size_t w = 0; w < kWordsPerBlock && out.size() < count; ++w) {
      uint64_t word = 0;
      for (size_t b = 0; b < 8; ++b) {
        word |= static_cast<uint64_t>(d[w * 8 + b]) << (8 * b);
      }
      out.push_back(word & keep);
    }
  }
  return out;
}

std::string ToHex(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

}  // namespace ppfl
