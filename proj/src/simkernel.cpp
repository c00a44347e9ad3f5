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

#include "ppfl/simkernel.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>

#include "ppfl/error.hpp"

namespace ppfl {

struct Kernel::HashState {
  HashState() : ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorKind::kKernel, "cannot initialise trace digest");
    }
  }
  void Update(const void* data, size_t len) {
    EVP_DigestUpdate(ctx.get(), data, len);
  }
  template <typename T>
  void UpdateLE(T value) {
    uint8_t buf[sizeof(T)];
    auto v = static_cast<uint64_t>(value);
    for (size_t b = 0; b < sizeof(T); ++b) buf[b] = static_cast<uint8_t>(v >> (8 * b));
    Update(buf, sizeof(T));
  }

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx;
};

const char* MessageKindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kPublicKey: return "public_key";
    case MessageKind::kMaskedVector: return "masked_vector";
    case MessageKind::kModel: return "model";
    case MessageKind::kTerminal: return "terminal";
    case MessageKind::kOther: return "other";
  }
  return "other";
}

LatencyModel::LatencyModel(size_t agents, SimTime uniform_base,
                           SimTime jitter_max)
    : agents_(agents), base_(agents * agents, uniform_base),
      jitter_max_(jitter_max) {
  if (uniform_base < 0 || jitter_max < 0) {
    throw Error(ErrorKind::kKernel, "latencies must be non-negative");
  }
  for (size_t a = 0; a < agents; ++a) base_[a * agents + a] = 0;
}

LatencyModel LatencyModel::RandomPairwise(size_t agents, SimTime min_base,
                                          SimTime max_base, SimTime jitter_max,
                                          uint64_t seed) {
  if (min_base < 0 || max_base < min_base) {
    throw Error(ErrorKind::kKernel, "invalid base latency range");
  }
  LatencyModel model(agents, min_base, jitter_max);
  Rng rng(DeriveSeed(seed, Stream::kLatency));
  const auto span = static_cast<uint64_t>(max_base - min_base) + 1;
  for (AgentId a = 0; a < agents; ++a) {
    for (AgentId b = a + 1; b < agents; ++b) {
      model.set_base(a, b, min_base + static_cast<SimTime>(rng.Below(span)));
    }
  }
  return model;
}

SimTime LatencyModel::base(AgentId from, AgentId to) const {
  return base_[static_cast<size_t>(from) * agents_ + to];
}

void LatencyModel::set_base(AgentId a, AgentId b, SimTime ns) {
  if (ns < 0) throw Error(ErrorKind::kKernel, "negative base latency");
  base_[static_cast<size_t>(a) * agents_ + b] = ns;
  base_[static_cast<size_t>(b) * agents_ + a] = ns;
}

SimTime LatencyModel::Jitter(SimTime jitter_max, double u) {
  return static_cast<SimTime>(
      std::llround(static_cast<double>(jitter_max) * u * u * u));
}

Kernel::Kernel(LatencyModel latency, uint64_t jitter_seed,
               KernelOptions options)
    : latency_(std::move(latency)),
      jitter_rng_(DeriveSeed(jitter_seed, Stream::kJitter)),
      options_(options),
      hash_(std::make_unique<HashState>()) {}

Kernel::~Kernel() = default;

AgentId Kernel::Register(Agent& agent) {
  if (agents_.size() >= latency_.agents()) {
    throw Error(ErrorKind::kKernel, "latency model has no slot for another agent");
  }
  agents_.push_back(&agent);
  clocks_.push_back(0);
  return static_cast<AgentId>(agents_.size() - 1);
}

void Kernel::CheckAgent(AgentId id) const {
  if (id >= agents_.size()) {
    throw Error(ErrorKind::kKernel, "unknown agent " + std::to_string(id));
  }
}

SendReceipt Kernel::Send(AgentId from, AgentId to, Payload payload,
                         SimTime now) {
  CheckAgent(from);
  CheckAgent(to);
  if (now < clocks_[from]) {
    throw Error(ErrorKind::kKernel,
                "agent " + std::to_string(from) + " sending at " +
                    std::to_string(now) + " before its clock " +
                    std::to_string(clocks_[from]));
  }
  Message msg;
  msg.sender = from;
  msg.recipient = to;
  msg.sent_at = now;
  msg.deliver_at = now + latency_.base(from, to) +
                   LatencyModel::Jitter(latency_.jitter_max(),
                                        jitter_rng_.Uniform01());
  msg.seq = next_seq_++;
  msg.payload = std::move(payload);
  const SendReceipt receipt{msg.seq, msg.sent_at, msg.deliver_at};
  heap_.push_back(std::move(msg));
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return receipt;
}

SendReceipt Kernel::Send(AgentId from, AgentId to, Payload payload) {
  CheckAgent(from);
  return Send(from, to, std::move(payload), clocks_[from]);
}

void Kernel::ChargeComputation(AgentId agent, SimTime nanos) {
  CheckAgent(agent);
  if (nanos < 0) throw Error(ErrorKind::kKernel, "negative computation charge");
  clocks_[agent] += nanos;
}

SimTime Kernel::Now(AgentId agent) const {
  CheckAgent(agent);
  return clocks_[agent];
}

void Kernel::Record(const Message& msg) {
  hash_->UpdateLE<int64_t>(msg.deliver_at);
  hash_->UpdateLE<uint32_t>(msg.sender);
  hash_->UpdateLE<uint32_t>(msg.recipient);
  hash_->UpdateLE<uint8_t>(static_cast<uint8_t>(msg.payload.kind));
  hash_->UpdateLE<uint64_t>(msg.seq);
  hash_->UpdateLE<uint64_t>(msg.payload.bytes.size());
  hash_->Update(msg.payload.bytes.data(), msg.payload.bytes.size());
  if (options_.keep_trace) {
    trace_.push_back(TraceRecord{msg.deliver_at, msg.sender, msg.recipient,
                                 msg.payload.kind, msg.seq,
                                 msg.payload.bytes.size()});
  }
}

RunStats Kernel::Run(SimTime until) {
  if (!started_) {
    started_ = true;
    for (Agent* agent : agents_) agent->OnStart(*this);
  }
  RunStats stats;
  while (!heap_.empty()) {
    if (heap_.front().deliver_at > until) {
      stats.reached_horizon = true;
      break;
    }
    if (events_ >= options_.max_events) {
      throw Error(ErrorKind::kKernel,
                  "event ceiling " + std::to_string(options_.max_events) +
                      " reached with " + std::to_string(heap_.size()) +
                      " messages pending at t=" +
                      std::to_string(heap_.front().deliver_at) + "ns");
    }
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Message msg = std::move(heap_.back());
    heap_.pop_back();
    ++events_;
    ++stats.events;
    stats.last_delivery = msg.deliver_at;
    Record(msg);
    SimTime& clock = clocks_[msg.recipient];
    clock = std::max(clock, msg.deliver_at);
    agents_[msg.recipient]->OnMessage(*this, msg);
  }
  return stats;
}

std::string Kernel::TraceHash() const {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> copy(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_MD_CTX_copy_ex(copy.get(), hash_->ctx.get());
  uint8_t digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(copy.get(), digest, &len);
  return ToHex({digest, len});
}

void Kernel::WriteTraceCsv(std::ostream& out) const {
  out << "time_ns,sender,recipient,kind,seq,bytes\n";
  for (const TraceRecord& r : trace_) {
    out << r.time << ',' << r.sender << ',' << r.recipient << ','
        << MessageKindName(r.kind) << ',' << r.seq << ',' << r.bytes << '\n';
  }
}

}  // namespace ppfl
