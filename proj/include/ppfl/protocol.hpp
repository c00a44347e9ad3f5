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

// Client and server agents for differentially private secure federated
// logistic regression.
//
// Agent 0 is the server; agents 1..n are the clients, and a client's agent id
// is also its protocol index (the lower index of a pair adds the pairwise
// mask, the higher one subtracts it). Setup relays one public key per
// neighbor through the server, after which every protocol iteration is
//
//   client: sample -> train from W -> noise -> advance chains -> mask -> send
//   server: collect n masked vectors -> aggregate -> broadcast W
//
// and a terminal marker follows the last broadcast.
//
// Payload layouts (integers little-endian, doubles IEEE-754 binary64 LE):
//   public key     u32 from | u32 to | u32 len | len bytes (big-endian element)
//   masked vector  u32 iteration | u32 client | u32 count | count x u64
//   model          u32 iteration | u32 count | count x f64
//   terminal       u32 completed iterations

#ifndef PPFL_PROTOCOL_HPP_
#define PPFL_PROTOCOL_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ppfl/data.hpp"
#include "ppfl/group_crypto.hpp"
#include "ppfl/learner.hpp"
#include "ppfl/secure_agg.hpp"
#include "ppfl/simkernel.hpp"

namespace ppfl {

enum class NeighborhoodMode { kFull, kLogN };

const char* NeighborhoodModeName(NeighborhoodMode mode);
NeighborhoodMode ParseNeighborhoodMode(std::string_view text);

// Symmetric peer graph over clients 1..n. Full mode is the complete graph;
// logN mode is the circulant graph linking each client to the next and
// previous d = ceil(log2 n) clients (mod n).
class NeighborGraph {
 public:
  NeighborGraph(size_t n, NeighborhoodMode mode);

  size_t clients() const { return adjacency_.size(); }
  NeighborhoodMode mode() const { return mode_; }
  size_t circulant_offset() const { return offset_; }
  // Sorted ascending.
  const std::vector<uint32_t>& neighbors(uint32_t client) const;
  bool adjacent(uint32_t a, uint32_t b) const;
  size_t edge_count() const;
  bool connected() const;

 private:
  NeighborhoodMode mode_;
  size_t offset_ = 0;
  std::vector<std::vector<uint32_t>> adjacency_;  // index client - 1
};

// Measured mode charges the thread CPU time each computation takes; fixed
// mode charges the constants in FixedCosts.
enum class TimingMode { kMeasured, kFixed };

const char* TimingModeName(TimingMode mode);
TimingMode ParseTimingMode(std::string_view text);

// Constant computation charges used in fixed timing mode.
struct FixedCosts {
  SimTime dh_setup = kNanosPerMilli;        // per client, once
  SimTime training = kNanosPerMilli;        // per client per iteration
  SimTime encrypt = kNanosPerMilli;         // per client per iteration
  SimTime server_store = 0;                 // per received masked vector
  SimTime server_aggregate = kNanosPerMilli;  // per iteration
  SimTime server_relay = 0;                 // per forwarded public key
};

struct ProtocolConfig {
  size_t clients = 0;
  size_t iterations = 30;
  TrainConfig train;
  // +infinity disables the Laplace noise.
  double epsilon = std::numeric_limits<double>::infinity();
  NeighborhoodMode neighborhood = NeighborhoodMode::kFull;
  unsigned fractional_bits = kDefaultFractionalBits;
  double weight_bound = 1e6;
  GroupParams group;
  TimingMode timing = TimingMode::kFixed;
  FixedCosts fixed_costs;
  SimTime latency_min = 200'000;
  SimTime latency_max = 2'000'000;
  SimTime jitter_max = 100'000;
  SampleOptions sample;
  uint64_t seed = 0;
  // Keep every party's private values and the server's inbox for analysis.
  bool audit = false;
  bool keep_trace = false;
  uint64_t max_events = 200'000'000;
};

// Throws kConfig / kParameter with an actionable message.
void ValidateProtocolConfig(const ProtocolConfig& config, const Dataset& train);

// Charged durations in nanoseconds.
struct TimingLedger {
  std::vector<SimTime> client_dh_setup;                // [client - 1]
  std::vector<std::vector<SimTime>> client_training;   // [client - 1][iter]
  std::vector<std::vector<SimTime>> client_encrypt;    // [client - 1][iter]
  std::vector<SimTime> server_iteration;               // [iter]
  SimTime server_relay = 0;
  SimTime total = 0;  // latest agent clock when the run drained
};

// Values only the client itself knows; recorded when auditing.
struct ClientAudit {
  std::map<uint32_t, SharedKey> shared_keys;   // by neighbor
  std::vector<ModelWeights> trained;           // [iter] w_i before noise
  std::vector<std::vector<double>> noise;      // [iter] eta_i
  std::vector<std::vector<size_t>> samples;    // [iter] train-partition rows
};

// Everything the server received.
struct ServerAudit {
  std::vector<std::vector<MaskedVector>> inbox;  // [iter], arrival order
  std::vector<Bytes> relayed_public_keys;
  uint64_t public_keys_after_training = 0;
};

struct ProtocolResult {
  std::vector<ModelWeights> models;  // broadcast W per iteration
  TimingLedger timing;
  std::vector<ClientAudit> clients;  // [client - 1], empty unless audit
  ServerAudit server;                // empty unless audit
  std::vector<TraceRecord> trace;    // empty unless keep_trace
  std::string trace_hash;
  uint64_t events = 0;
  double noise_scale = 0.0;
  size_t local_sample_size = 0;
  size_t pairwise_chains = 0;  // distinct pairs with an established chain
};

// Runs the whole protocol on the simulation kernel. Throws kProtocol (or the
// originating kind) when a run aborts.
ProtocolResult RunProtocol(const ProtocolConfig& config, const Dataset& train);

// Payload codecs.
struct PublicKeyMsg {
  uint32_t from = 0;
  uint32_t to = 0;
  Bytes element;
};
Bytes SerializePublicKey(const PublicKeyMsg& msg);
PublicKeyMsg ParsePublicKey(std::span<const uint8_t> bytes);

struct ModelMsg {
  uint32_t iteration = 0;
  std::vector<double> weights;
};
Bytes SerializeModel(const ModelMsg& msg);
ModelMsg ParseModel(std::span<const uint8_t> bytes);

Bytes SerializeTerminal(uint32_t completed_iterations);
uint32_t ParseTerminal(std::span<const uint8_t> bytes);

// Mask words a client pair uses at protocol iteration `iteration` (0-based),
// replayed from their shared key.
std::vector<uint64_t> PairMaskAt(const SharedKey& key, uint32_t iteration,
                                 size_t count);

}  // namespace ppfl

#endif  // PPFL_PROTOCOL_HPP_
