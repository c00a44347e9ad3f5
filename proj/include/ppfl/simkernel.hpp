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

// Single-threaded discrete-event kernel with nanosecond time, per-agent
// clocks, charged computation delays and pairwise latency with cubic jitter.

#ifndef PPFL_SIMKERNEL_HPP_
#define PPFL_SIMKERNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "ppfl/group_crypto.hpp"
#include "ppfl/rng.hpp"

namespace ppfl {

using SimTime = int64_t;  // nanoseconds
using AgentId = uint32_t;

inline constexpr SimTime kNanosPerMilli = 1'000'000;

enum class MessageKind : uint8_t {
  kPublicKey = 1,
  kMaskedVector = 2,
  kModel = 3,
  kTerminal = 4,
  kOther = 255,
};

const char* MessageKindName(MessageKind kind);

struct Payload {
  MessageKind kind = MessageKind::kOther;
  Bytes bytes;
};

struct Message {
  AgentId sender = 0;
  AgentId recipient = 0;
  SimTime sent_at = 0;
  SimTime deliver_at = 0;
  uint64_t seq = 0;
  Payload payload;
};

// What Send reports back about an enqueued message.
struct SendReceipt {
  uint64_t seq = 0;
  SimTime sent_at = 0;
  SimTime deliver_at = 0;
};

class Kernel;

class Agent {
 public:
  virtual ~Agent() = default;
  // Called once at time zero in registration order.
  virtual void OnStart(Kernel& kernel) { (void)kernel; }
  virtual void OnMessage(Kernel& kernel, const Message& msg) = 0;
};

// Symmetric base latencies plus jitter_max * u^3 per message.
class LatencyModel {
 public:
  LatencyModel(size_t agents, SimTime uniform_base, SimTime jitter_max);

  // Pairwise bases drawn once, uniformly from [min_base, max_base].
  static LatencyModel RandomPairwise(size_t agents, SimTime min_base,
                                     SimTime max_base, SimTime jitter_max,
                                     uint64_t seed);

  size_t agents() const { return agents_; }
  SimTime base(AgentId from, AgentId to) const;
  void set_base(AgentId a, AgentId b, SimTime ns);
  SimTime jitter_max() const { return jitter_max_; }

  // round(jitter_max * u^3) for u in [0, 1).
  static SimTime Jitter(SimTime jitter_max, double u);

 private:
  size_t agents_;
  std::vector<SimTime> base_;
  SimTime jitter_max_;
};

struct TraceRecord {
  SimTime time = 0;
  AgentId sender = 0;
  AgentId recipient = 0;
  MessageKind kind = MessageKind::kOther;
  uint64_t seq = 0;
  size_t bytes = 0;
};

struct KernelOptions {
  uint64_t max_events = 200'000'000;
  bool keep_trace = false;  // store records; the hash is always computed
};

struct RunStats {
  uint64_t events = 0;
  SimTime last_delivery = 0;
  bool reached_horizon = false;
};

class Kernel {
 public:
  Kernel(LatencyModel latency, uint64_t jitter_seed, KernelOptions options = {});
  ~Kernel();
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  // Agents are not owned; ids are assigned densely from zero.
  AgentId Register(Agent& agent);
  size_t agent_count() const { return agents_.size(); }

  // Enqueues a message leaving `from` at `now`, which must not precede the
  // sender's clock. Throws kKernel for unknown agents or time travel.
  SendReceipt Send(AgentId from, AgentId to, Payload payload, SimTime now);
  // Sends at the sender's current clock.
  SendReceipt Send(AgentId from, AgentId to, Payload payload);

  void ChargeComputation(AgentId agent, SimTime nanos);
  SimTime Now(AgentId agent) const;

  // Dispatches in (deliver_at, seq) order until the queue drains or the next
  // delivery lies beyond `until`. The first call also runs every OnStart.
  RunStats Run(SimTime until = INT64_MAX);

  uint64_t events() const { return events_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  // Hex SHA-256 over every delivery record and payload so far.
  std::string TraceHash() const;
  // time_ns,sender,recipient,kind,seq,bytes
  void WriteTraceCsv(std::ostream& out) const;

 private:
  struct Later {
    bool operator()(const Message& a, const Message& b) const {
      if (a.deliver_at != b.deliver_at) return a.deliver_at > b.deliver_at;
      return a.seq > b.seq;
    }
  };
  struct HashState;

  void CheckAgent(AgentId id) const;
  void Record(const Message& msg);

  LatencyModel latency_;
  Rng jitter_rng_;
  KernelOptions options_;
  std::vector<Agent*> agents_;
  std::vector<SimTime> clocks_;
  std::vector<Message> heap_;  // min-heap under Later
  uint64_t next_seq_ = 0;
  uint64_t events_ = 0;
  bool started_ = false;
  std::vector<TraceRecord> trace_;
  std::unique_ptr<HashState> hash_;
};

}  // namespace ppfl

#endif  // PPFL_SIMKERNEL_HPP_
