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

#include "ppfl/protocol.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <ctime>
#include <cmath>
#include <cstring>
#include <memory>
#include <set>

#include "ppfl/error.hpp"
#include "ppfl/privacy.hpp"

namespace ppfl {
namespace {

// Measured mode charges the CPU time of the simulating thread, so work done
// by other threads or processes while an agent computes is not billed to it.
struct ThreadCpuClock {
  using duration = std::chrono::nanoseconds;
  using rep = duration::rep;
  using period = duration::period;
  using time_point = std::chrono::time_point<ThreadCpuClock>;
  static constexpr bool is_steady = true;

  static time_point now() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return time_point(duration(SimTime{ts.tv_sec} * 1'000'000'000 + ts.tv_nsec));
  }
};

SimTime Since(ThreadCpuClock::time_point start) {
  return (ThreadCpuClock::now() - start).count();
}

void PutU32(Bytes& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<uint8_t>(v >> (8 * b)));
}

void PutU64(Bytes& out, uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<uint8_t>(v >> (8 * b)));
}

uint64_t GetLE(std::span<const uint8_t> bytes, size_t offset, size_t width) {
  if (offset + width > bytes.size()) {
    throw Error(ErrorKind::kProtocol, "payload truncated");
  }
  uint64_t v = 0;
  for (size_t b = 0; b < width; ++b) {
    v |= static_cast<uint64_t>(bytes[offset + b]) << (8 * b);
  }
  return v;
}

// State shared by all agents of one run. Everything but `result` is
// read-only once the run starts.
struct RunContext {
  const ProtocolConfig& config;
  const Dataset& train;
  FixedPointCodec codec;
  NeighborGraph graph;
  PrivacyConfig privacy;
  size_t weight_count;
  ProtocolResult& result;

  bool measured() const { return config.timing == TimingMode::kMeasured; }
};

class ClientAgent final : public Agent {
 public:
  enum class Phase { kSetup1, kSetup2, kTraining, kAwaitingModel, kDone };

  ClientAgent(uint32_t id, RunContext& ctx) : id_(id), ctx_(ctx) {}

  Phase phase() const { return phase_; }
  uint32_t id() const { return id_; }

  std::vector<uint32_t> MissingKeys() const {
    std::vector<uint32_t> missing;
    for (uint32_t j : ctx_.graph.neighbors(id_)) {
      if (!received_.count(j)) missing.push_back(j);
    }
    return missing;
  }

  void OnStart(Kernel& kernel) override { SetupRound1(kernel); }

  void OnMessage(Kernel& kernel, const Message& msg) override {
    if (msg.sender != 0) {
      throw Error(ErrorKind::kProtocol,
                  "client " + std::to_string(id_) +
                      " received a message directly from agent " +
                      std::to_string(msg.sender));
    }
    switch (msg.payload.kind) {
      case MessageKind::kPublicKey:
        OnPublicKey(kernel, ParsePublicKey(msg.payload.bytes));
        break;
      case MessageKind::kModel:
        OnModel(kernel, ParseModel(msg.payload.bytes));
        break;
      case MessageKind::kTerminal:
        // Jitter may let the marker overtake the final model.
        terminal_seen_ = ParseTerminal(msg.payload.bytes) == ctx_.config.iterations;
        MaybeFinish();
        break;
      default:
        throw Error(ErrorKind::kProtocol, "client got unexpected message kind");
    }
  }

 private:
  void Charge(Kernel& kernel, SimTime measured, SimTime fixed, SimTime& ledger) {
    const SimTime cost = ctx_.measured() ? measured : fixed;
    ledger += cost;
    kernel.ChargeComputation(id_, cost);
  }

  // One secret per neighbor; each public key goes to the server for relay.
  void SetupRound1(Kernel& kernel) {
    const auto start = ThreadCpuClock::now();
    Rng rng(DeriveSeed(ctx_.config.seed, Stream::kKeygen, {id_}));
    std::vector<PublicKeyMsg> outgoing;
    for (uint32_t j : ctx_.graph.neighbors(id_)) {
      KeyPair kp = Keygen(ctx_.config.group, rng);
      outgoing.push_back(
          PublicKeyMsg{id_, j, EncodeElement(ctx_.config.group, kp.public_key)});
      secrets_.emplace(j, std::move(kp));
    }
    SimTime& ledger = ctx_.result.timing.client_dh_setup[id_ - 1];
    // Fixed mode charges the whole setup cost in round 2.
    Charge(kernel, Since(start), 0, ledger);
    for (PublicKeyMsg& m : outgoing) {
      kernel.Send(id_, 0, Payload{MessageKind::kPublicKey, SerializePublicKey(m)});
    }
    phase_ = Phase::kSetup2;
    if (outgoing.empty()) SetupRound2(kernel);
  }

  void OnPublicKey(Kernel& kernel, const PublicKeyMsg& msg) {
    if (phase_ != Phase::kSetup2) {
      throw Error(ErrorKind::kProtocol,
                  "client " + std::to_string(id_) + " got a key outside setup");
    }
    if (msg.to != id_ || !ctx_.graph.adjacent(id_, msg.from)) {
      throw Error(ErrorKind::kProtocol,
                  "client " + std::to_string(id_) + " got a misrouted key from " +
                      std::to_string(msg.from));
    }
    if (!received_.emplace(msg.from, DecodeElement(msg.element)).second) {
      throw Error(ErrorKind::kProtocol, "duplicate key from client " +
                                            std::to_string(msg.from));
    }
    if (received_.size() == ctx_.graph.neighbors(id_).size()) {
      SetupRound2(kernel);
    }
  }

  void SetupRound2(Kernel& kernel) {
    const auto start = ThreadCpuClock::now();
    for (const auto& [j, their_public] : received_) {
      const SharedKey key =
          Agree(ctx_.config.group, secrets_.at(j).secret, their_public);
      chains_.emplace(j, MaskChainState::FromSharedKey(key));
      if (ctx_.config.audit) {
        ctx_.result.clients[id_ - 1].shared_keys.emplace(j, key);
      }
    }
    SimTime& ledger = ctx_.result.timing.client_dh_setup[id_ - 1];
    Charge(kernel, Since(start), ctx_.config.fixed_costs.dh_setup, ledger);
    phase_ = Phase::kTraining;
    RunIteration(kernel, 0);
  }

  void OnModel(Kernel& kernel, const ModelMsg& msg) {
    if (phase_ != Phase::kAwaitingModel || msg.iteration != iteration_) {
      throw Error(ErrorKind::kProtocol,
                  "client " + std::to_string(id_) +
                      " got model for iteration " +
                      std::to_string(msg.iteration) + " out of order");
    }
    model_ = msg.weights;
    if (msg.iteration + 1 < ctx_.config.iterations) {
      phase_ = Phase::kTraining;
      RunIteration(kernel, msg.iteration + 1);
    } else {
      final_model_seen_ = true;
      MaybeFinish();
    }
  }

  void MaybeFinish() {
    if (terminal_seen_ && final_model_seen_) phase_ = Phase::kDone;
  }

  void RunIteration(Kernel& kernel, uint32_t t) {
    const ProtocolConfig& cfg = ctx_.config;
    iteration_ = t;
    if (t == 0) model_.assign(ctx_.weight_count, 0.0);

    // Local training from the last shared model.
    auto start = ThreadCpuClock::now();
    LocalDataset local = SampleLocal(ctx_.train, id_, t, cfg.seed, cfg.sample);
    ModelWeights trained;
    try {
      trained = Train(model_, local.data, cfg.train);
    } catch (const Error& e) {
      throw Error(e.kind(), "client " + std::to_string(id_) + " iteration " +
                                std::to_string(t) + ": " + e.what());
    }
    const SimTime training_ns = Since(start);

    // Noise, chain refresh and masking.
    start = ThreadCpuClock::now();
    Rng noise_rng(DeriveSeed(cfg.seed, Stream::kNoise, {id_, t}));
    const NoiseVector noise =
        MakeNoise(ctx_.privacy, ctx_.weight_count, noise_rng, id_, t);
    for (size_t k = 0; k < trained.size(); ++k) {
      if (!(std::fabs(trained[k]) <= cfg.weight_bound)) {
        throw Error(ErrorKind::kEncoding,
                    "client " + std::to_string(id_) + " iteration " +
                        std::to_string(t) + ": weight " + std::to_string(k) +
                        " = " + std::to_string(trained[k]) +
                        " exceeds the configured weight bound");
      }
    }
    const std::vector<uint64_t> encoded = ctx_.codec.Encode(trained);
    const std::vector<uint64_t> noise_words = ctx_.codec.Encode(noise.values);
    PairAssignment assignment;
    assignment.AddClient(id_);
    for (auto& [j, chain] : chains_) {
      PrgStep step = PrgAdvance(chain);
      chain = std::move(step.state);
      if (chain.iteration != t + 1) {
        throw Error(ErrorKind::kProtocol, "mask chain out of step");
      }
      assignment.AddClient(j);
      assignment.AddPair(id_, j, ExpandMasks(step.r, ctx_.weight_count));
    }
    const MaskedVector masked =
        Mask(assignment, id_, encoded, noise_words, t);
    Bytes wire = SerializeMaskedVector(masked);
    const SimTime encrypt_ns = Since(start);

    TimingLedger& timing = ctx_.result.timing;
    Charge(kernel, training_ns, cfg.fixed_costs.training,
           timing.client_training[id_ - 1][t]);
    Charge(kernel, encrypt_ns, cfg.fixed_costs.encrypt,
           timing.client_encrypt[id_ - 1][t]);

    if (cfg.audit) {
      ClientAudit& audit = ctx_.result.clients[id_ - 1];
      audit.trained.push_back(std::move(trained));
      audit.noise.push_back(noise.values);
      audit.samples.push_back(std::move(local.indices));
    }
    kernel.Send(id_, 0, Payload{MessageKind::kMaskedVector, std::move(wire)});
    phase_ = Phase::kAwaitingModel;
  }

  uint32_t id_;
  RunContext& ctx_;
  Phase phase_ = Phase::kSetup1;
  uint32_t iteration_ = 0;
  bool terminal_seen_ = false;
  bool final_model_seen_ = false;
  std::map<uint32_t, KeyPair> secrets_;
  std::map<uint32_t, mpz_class> received_;
  std::map<uint32_t, MaskChainState> chains_;
  ModelWeights model_;
};

class ServerAgent final : public Agent {
 public:
  explicit ServerAgent(RunContext& ctx) : ctx_(ctx) {}

  uint32_t completed() const { return completed_; }

  void OnMessage(Kernel& kernel, const Message& msg) override {
    switch (msg.payload.kind) {
      case MessageKind::kPublicKey:
        Relay(kernel, msg);
        break;
      case MessageKind::kMaskedVector:
        Store(kernel, msg);
        break;
      default:
        throw Error(ErrorKind::kProtocol, "server got unexpected message kind");
    }
  }

 private:
  SimTime Cost(SimTime measured, SimTime fixed) const {
    return ctx_.measured() ? measured : fixed;
  }

  void Relay(Kernel& kernel, const Message& msg) {
    const auto start = ThreadCpuClock::now();
    const PublicKeyMsg key = ParsePublicKey(msg.payload.bytes);
    if (key.from != msg.sender) {
      throw Error(ErrorKind::kProtocol, "public key sender mismatch");
    }
    if (key.to == 0 || key.to > ctx_.config.clients) {
      throw Error(ErrorKind::kProtocol,
                  "public key for unknown client " + std::to_string(key.to));
    }
    if (ctx_.config.audit) {
      ctx_.result.server.relayed_public_keys.push_back(key.element);
      if (training_started_) ++ctx_.result.server.public_keys_after_training;
    }
    const SimTime cost = Cost(Since(start), ctx_.config.fixed_costs.server_relay);
    ctx_.result.timing.server_relay += cost;
    kernel.ChargeComputation(0, cost);
    kernel.Send(0, key.to, msg.payload);
  }

  void Store(Kernel& kernel, const Message& msg) {
    training_started_ = true;
    const auto start = ThreadCpuClock::now();
    MaskedVector vec = ParseMaskedVector(msg.payload.bytes);
    if (vec.client_id != msg.sender) {
      throw Error(ErrorKind::kProtocol, "masked vector sender mismatch");
    }
    if (vec.iteration != completed_) {
      throw Error(ErrorKind::kProtocol,
                  "masked vector for iteration " + std::to_string(vec.iteration) +
                      " while collecting " + std::to_string(completed_));
    }
    if (!submitted_.insert(vec.client_id).second) {
      throw Error(ErrorKind::kProtocol, "duplicate submission from client " +
                                            std::to_string(vec.client_id));
    }
    inbox_.push_back(std::move(vec));
    const SimTime store_cost =
        Cost(Since(start), ctx_.config.fixed_costs.server_store);
    iteration_time_ += store_cost;
    kernel.ChargeComputation(0, store_cost);
    if (inbox_.size() == ctx_.config.clients) Finish(kernel);
  }

  void Finish(Kernel& kernel) {
    const auto start = ThreadCpuClock::now();
    ModelMsg model{completed_, Aggregate(inbox_, ctx_.codec, ctx_.config.clients)};
    Bytes wire = SerializeModel(model);
    const SimTime cost =
        Cost(Since(start), ctx_.config.fixed_costs.server_aggregate);
    iteration_time_ += cost;
    kernel.ChargeComputation(0, cost);
    ctx_.result.timing.server_iteration.push_back(iteration_time_);
    ctx_.result.models.push_back(std::move(model.weights));
    if (ctx_.config.audit) ctx_.result.server.inbox.push_back(std::move(inbox_));

    for (uint32_t c = 1; c <= ctx_.config.clients; ++c) {
      kernel.Send(0, c, Payload{MessageKind::kModel, wire});
    }
    ++completed_;
    if (completed_ == ctx_.config.iterations) {
      for (uint32_t c = 1; c <= ctx_.config.clients; ++c) {
        kernel.Send(0, c,
                    Payload{MessageKind::kTerminal, SerializeTerminal(completed_)});
      }
    }
    inbox_.clear();
    submitted_.clear();
    iteration_time_ = 0;
  }

  RunContext& ctx_;
  std::vector<MaskedVector> inbox_;
  std::set<uint32_t> submitted_;
  uint32_t completed_ = 0;
  SimTime iteration_time_ = 0;
  bool training_started_ = false;
};

}  // namespace

const char* NeighborhoodModeName(NeighborhoodMode mode) {
  return mode == NeighborhoodMode::kFull ? "full" : "logn";
}

NeighborhoodMode ParseNeighborhoodMode(std::string_view text) {
  if (text == "full") return NeighborhoodMode::kFull;
  if (text == "logn" || text == "logN") return NeighborhoodMode::kLogN;
  throw Error(ErrorKind::kConfig,
              "neighborhood must be full or logn, got '" + std::string(text) + "'");
}

const char* TimingModeName(TimingMode mode) {
  return mode == TimingMode::kMeasured ? "measured" : "fixed";
}

TimingMode ParseTimingMode(std::string_view text) {
  if (text == "measured") return TimingMode::kMeasured;
  if (text == "fixed") return TimingMode::kFixed;
  throw Error(ErrorKind::kConfig,
              "timing must be measured or fixed, got '" + std::string(text) + "'");
}

NeighborGraph::NeighborGraph(size_t n, NeighborhoodMode mode)
    : mode_(mode), adjacency_(n) {
  if (n == 0) throw Error(ErrorKind::kConfig, "neighbor graph needs n >= 1");
  std::vector<std::set<uint32_t>> sets(n);
  if (mode == NeighborhoodMode::kFull) {
    offset_ = n - 1;
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j = i + 1; j < n; ++j) {
        sets[i].insert(j + 1);
        sets[j].insert(i + 1);
      }
    }
  } else {
    offset_ = n <= 1 ? 0 : static_cast<size_t>(std::bit_width(n - 1));  // ceil(log2 n)
    for (size_t i = 0; i < n; ++i) {
      for (size_t step = 1; step <= offset_; ++step) {
        const size_t j = (i + step) % n;
        if (j == i) continue;
        sets[i].insert(static_cast<uint32_t>(j + 1));
        sets[j].insert(static_cast<uint32_t>(i + 1));
      }
    }
  }
  for (size_t i = 0; i < n; ++i) adjacency_[i].assign(sets[i].begin(), sets[i].end());
}

const std::vector<uint32_t>& NeighborGraph::neighbors(uint32_t client) const {
  if (client == 0 || client > adjacency_.size()) {
    throw Error(ErrorKind::kProtocol, "unknown client " + std::to_string(client));
  }
  return adjacency_[client - 1];
}

bool NeighborGraph::adjacent(uint32_t a, uint32_t b) const {
  const auto& list = neighbors(a);
  return std::binary_search(list.begin(), list.end(), b);
}

size_t NeighborGraph::edge_count() const {
  size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

bool NeighborGraph::connected() const {
  std::vector<bool> seen(adjacency_.size(), false);
  std::vector<uint32_t> stack{1};
  seen[0] = true;
  size_t count = 1;
  while (!stack.empty()) {
    const uint32_t c = stack.back();
    stack.pop_back();
    for (uint32_t j : adjacency_[c - 1]) {
      if (!seen[j - 1]) {
        seen[j - 1] = true;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == adjacency_.size();
}

void ValidateProtocolConfig(const ProtocolConfig& config, const Dataset& train) {
  if (config.clients == 0) throw Error(ErrorKind::kConfig, "need at least one client");
  if (config.iterations == 0) {
    throw Error(ErrorKind::kConfig, "need at least one protocol iteration");
  }
  ValidateTrainConfig(config.train);
  if (!(config.epsilon > 0.0)) {
    throw Error(ErrorKind::kConfig,
                "epsilon must be > 0 (use no-noise to disable), got " +
                    std::to_string(config.epsilon));
  }
  if (std::isfinite(config.epsilon) && !(config.train.alpha_reg > 0.0)) {
    throw Error(ErrorKind::kConfig, "alpha_reg must be > 0 when noise is enabled");
  }
  if (!(config.weight_bound > 0.0)) {
    throw Error(ErrorKind::kConfig, "weight bound must be > 0");
  }
  if (config.latency_min < 0 || config.latency_max < config.latency_min ||
      config.jitter_max < 0) {
    throw Error(ErrorKind::kConfig, "invalid latency range");
  }
  if (train.empty()) throw Error(ErrorKind::kConfig, "empty training partition");
  ValidateGroup(config.group);
  LocalSampleSize(train, config.sample);
}

ProtocolResult RunProtocol(const ProtocolConfig& config, const Dataset& train) {
  ValidateProtocolConfig(config, train);
  const size_t n = config.clients;

  ProtocolResult result;
  result.local_sample_size = LocalSampleSize(train, config.sample);

  PrivacyConfig privacy{config.epsilon, n, result.local_sample_size,
                        config.train.alpha_reg};
  result.noise_scale = privacy.noise_enabled() ? NoiseScale(privacy) : 0.0;

  RunContext ctx{config,  train, FixedPointCodec(config.fractional_bits),
                 NeighborGraph(n, config.neighborhood), privacy, train.cols,
                 result};
  CheckAggregationBound(ctx.codec, n, config.weight_bound, result.noise_scale);
  result.pairwise_chains = ctx.graph.edge_count();

  TimingLedger& timing = result.timing;
  timing.client_dh_setup.assign(n, 0);
  timing.client_training.assign(n, std::vector<SimTime>(config.iterations, 0));
  timing.client_encrypt.assign(n, std::vector<SimTime>(config.iterations, 0));
  if (config.audit) result.clients.resize(n);

  Kernel kernel(LatencyModel::RandomPairwise(n + 1, config.latency_min,
                                             config.latency_max,
                                             config.jitter_max, config.seed),
                config.seed,
                KernelOptions{config.max_events, config.keep_trace});
  ServerAgent server(ctx);
  kernel.Register(server);
  std::vector<std::unique_ptr<ClientAgent>> clients;
  clients.reserve(n);
  for (uint32_t i = 1; i <= n; ++i) {
    clients.push_back(std::make_unique<ClientAgent>(i, ctx));
    kernel.Register(*clients.back());
  }

  const RunStats stats = kernel.Run();
  result.events = stats.events;

  for (const auto& client : clients) {
    if (client->phase() == ClientAgent::Phase::kSetup2) {
      std::string missing;
      for (uint32_t j : client->MissingKeys()) missing += " " + std::to_string(j);
      throw Error(ErrorKind::kProtocol,
                  "setup aborted: client " + std::to_string(client->id()) +
                      " never received keys from" + missing);
    }
    if (client->phase() != ClientAgent::Phase::kDone) {
      throw Error(ErrorKind::kProtocol,
                  "client " + std::to_string(client->id()) +
                      " did not reach the terminal marker");
    }
  }
  if (server.completed() != config.iterations) {
    throw Error(ErrorKind::kProtocol, "server completed only " +
                                          std::to_string(server.completed()) +
                                          " iterations");
  }

  for (AgentId a = 0; a <= n; ++a) timing.total = std::max(timing.total, kernel.Now(a));
  result.trace_hash = kernel.TraceHash();
  if (config.keep_trace) result.trace = kernel.trace();
  return result;
}

Bytes SerializePublicKey(const PublicKeyMsg& msg) {
  Bytes out;
  out.reserve(12 + msg.element.size());
  PutU32(out, msg.from);
  PutU32(out, msg.to);
  PutU32(out, static_cast<uint32_t>(msg.element.size()));
  out.insert(out.end(), msg.element.begin(), msg.element.end());
  return out;
}

PublicKeyMsg ParsePublicKey(std::span<const uint8_t> bytes) {
  PublicKeyMsg msg;
  msg.from = static_cast<uint32_t>(GetLE(bytes, 0, 4));
  msg.to = static_cast<uint32_t>(GetLE(bytes, 4, 4));
  const auto len = static_cast<size_t>(GetLE(bytes, 8, 4));
  if (bytes.size() != 12 + len) {
    throw Error(ErrorKind::kProtocol, "public key payload length mismatch");
  }
  msg.element.assign(bytes.begin() + 12, bytes.end());
  return msg;
}

Bytes SerializeModel(const ModelMsg& msg) {
  Bytes out;
  out.reserve(8 + 8 * msg.weights.size());
  PutU32(out, msg.iteration);
  PutU32(out, static_cast<uint32_t>(msg.weights.size()));
  for (double w : msg.weights) PutU64(out, std::bit_cast<uint64_t>(w));
  return out;
}

ModelMsg ParseModel(std::span<const uint8_t> bytes) {
  ModelMsg msg;
  msg.iteration = static_cast<uint32_t>(GetLE(bytes, 0, 4));
  const auto count = static_cast<size_t>(GetLE(bytes, 4, 4));
  if (bytes.size() != 8 + 8 * count) {
    throw Error(ErrorKind::kProtocol, "model payload length mismatch");
  }
  msg.weights.resize(count);
  for (size_t k = 0; k < count; ++k) {
    msg.weights[k] = std::bit_cast<double>(GetLE(bytes, 8 + 8 * k, 8));
  }
  return msg;
}

Bytes SerializeTerminal(uint32_t completed_iterations) {
  Bytes out;
  PutU32(out, completed_iterations);
  return out;
}

uint32_t ParseTerminal(std::span<const uint8_t> bytes) {
  if (bytes.size() != 4) throw Error(ErrorKind::kProtocol, "bad terminal payload");
  return static_cast<uint32_t>(GetLE(bytes, 0, 4));
}

std::vector<uint64_t> PairMaskAt(const SharedKey& key, uint32_t iteration,
                                 size_t count) {
  MaskChainState state = MaskChainState::FromSharedKey(key);
  Bytes r;
  for (uint32_t t = 0; t <= iteration; ++t) {
    PrgStep step = PrgAdvance(state);
    state = std::move(step.state);
    r = std::move(step.r);
  }
  return ExpandMasks(r, count);
}

}  // namespace ppfl
