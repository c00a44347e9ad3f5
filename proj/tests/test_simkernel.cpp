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

#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "ppfl/error.hpp"
#include "ppfl/simkernel.hpp"

namespace ppfl {
namespace {

struct Delivery {
  AgentId to;
  AgentId from;
  SimTime at;
  SimTime clock;
};

// Bounces a counter back to its sender until `limit` messages were sent.
class PingPong : public Agent {
 public:
  PingPong(AgentId self, AgentId peer, bool starts, int limit,
           std::vector<Delivery>& log, SimTime charge = 0)
      : self_(self), peer_(peer), starts_(starts), limit_(limit), log_(log),
        charge_(charge) {}

  void OnStart(Kernel& kernel) override {
    if (starts_) Serve(kernel, 1);
  }
  void OnMessage(Kernel& kernel, const Message& msg) override {
    log_.push_back({self_, msg.sender, msg.deliver_at, kernel.Now(self_)});
    Serve(kernel, msg.payload.bytes.at(0) + 1);
  }

 private:
  void Serve(Kernel& kernel, int count) {
    if (count > limit_) return;
    kernel.ChargeComputation(self_, charge_);
    kernel.Send(self_, peer_, Payload{MessageKind::kOther, {static_cast<uint8_t>(count)}});
  }

  AgentId self_, peer_;
  bool starts_;
  int limit_;
  std::vector<Delivery>& log_;
  SimTime charge_;
};

TEST(JitterTest, CubicFormula) {
  EXPECT_EQ(LatencyModel::Jitter(1000, 0.0), 0);
  EXPECT_EQ(LatencyModel::Jitter(1000, 0.5), 125);
  EXPECT_LE(LatencyModel::Jitter(1000, 0.999999), 1000);
  EXPECT_EQ(1'000'000 + LatencyModel::Jitter(1000, 0.5), 1'000'125);
}

TEST(JitterTest, MeanIsQuarterOfMaximum) {
  Rng rng(DeriveSeed(4, Stream::kTest));
  const SimTime jmax = 1'000'000;
  double sum = 0.0;
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) sum += LatencyModel::Jitter(jmax, rng.Uniform01());
  EXPECT_NEAR(sum / draws, jmax / 4.0, 0.05 * jmax / 4.0);
}

TEST(LatencyModelTest, PairwiseBasesAreSymmetricAndInRange) {
  const LatencyModel m = LatencyModel::RandomPairwise(20, 200'000, 2'000'000, 0, 3);
  for (AgentId a = 0; a < 20; ++a) {
    for (AgentId b = 0; b < 20; ++b) {
      EXPECT_EQ(m.base(a, b), m.base(b, a));
      if (a != b) {
        EXPECT_GE(m.base(a, b), 200'000);
        EXPECT_LE(m.base(a, b), 2'000'000);
      }
    }
  }
}

TEST(KernelTest, ZeroJitterDeliversAfterBaseLatency) {
  Kernel kernel(LatencyModel(2, 1'000'000, 0), 1);
  std::vector<Delivery> log;
  PingPong a(0, 1, true, 1, log), b(1, 0, false, 1, log);
  kernel.Register(a);
  kernel.Register(b);
  kernel.Run();
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].at, 1'000'000);
}

TEST(KernelTest, PingPongAlternatesAndRespectsCharges) {
  Kernel kernel(LatencyModel(2, 1'000'000, 0), 1);
  std::vector<Delivery> log;
  PingPong a(0, 1, true, 20, log, 5'000'000), b(1, 0, false, 20, log, 5'000'000);
  kernel.Register(a);
  kernel.Register(b);
  const RunStats stats = kernel.Run();
  EXPECT_EQ(stats.events, 20u);
  ASSERT_EQ(log.size(), 20u);
  for (size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(log[i].to, i % 2 == 0 ? 1u : 0u);
    // Each hop: 5 ms of computation, then 1 ms on the wire.
    EXPECT_EQ(log[i].at, static_cast<SimTime>(i + 1) * 6'000'000);
    EXPECT_GE(log[i].clock, log[i].at);
  }
}

TEST(KernelTest, ClocksNeverRunBackwards) {
  Kernel kernel(LatencyModel(3, 100, 0), 1);
  std::vector<Delivery> log;
  PingPong a(0, 1, true, 3, log);
  PingPong b(1, 0, false, 3, log);
  kernel.Register(a);
  kernel.Register(b);
  kernel.ChargeComputation(1, 10'000);
  kernel.Run();
  // Agent 1 was busy until 10 us, so it handles the first ping then.
  EXPECT_EQ(log[0].clock, 10'000);
  EXPECT_THROW(kernel.Send(1, 0, Payload{}, 0), Error);
}

TEST(KernelTest, UnknownAgentsAndEventCeiling) {
  Kernel kernel(LatencyModel(2, 10, 0), 1, KernelOptions{5, false});
  std::vector<Delivery> log;
  PingPong a(0, 1, true, 100, log), b(1, 0, false, 100, log);
  kernel.Register(a);
  kernel.Register(b);
  try {
    kernel.Send(0, 7, Payload{});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kKernel);
  }
  try {
    kernel.Run();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kKernel);
  }
}

TEST(KernelTest, EqualTimestampsAreFifo) {
  // Three senders, one recipient, identical latency and departure time.
  class Sink : public Agent {
   public:
    std::vector<AgentId> order;
    void OnMessage(Kernel&, const Message& m) override { order.push_back(m.sender); }
  };
  class Source : public Agent {
   public:
    explicit Source(AgentId id) : id_(id) {}
    void OnStart(Kernel& k) override { k.Send(id_, 0, Payload{}); }
    void OnMessage(Kernel&, const Message&) override {}

   private:
    AgentId id_;
  };
  Kernel kernel(LatencyModel(4, 50, 0), 1);
  Sink sink;
  Source s1(1), s2(2), s3(3);
  kernel.Register(sink);
  kernel.Register(s1);
  kernel.Register(s2);
  kernel.Register(s3);
  kernel.Run();
  EXPECT_EQ(sink.order, (std::vector<AgentId>{1, 2, 3}));
}

TEST(KernelTest, HorizonStopsEarly) {
  Kernel kernel(LatencyModel(2, 1'000, 0), 1);
  std::vector<Delivery> log;
  PingPong a(0, 1, true, 10, log), b(1, 0, false, 10, log);
  kernel.Register(a);
  kernel.Register(b);
  const RunStats s = kernel.Run(3'500);
  EXPECT_TRUE(s.reached_horizon);
  EXPECT_EQ(log.size(), 3u);
  kernel.Run();
  EXPECT_EQ(log.size(), 10u);
}

std::string RunAndHash(uint64_t seed, std::string* csv) {
  Kernel kernel(LatencyModel::RandomPairwise(2, 1000, 5000, 700, seed), seed,
                KernelOptions{1000, true});
  std::vector<Delivery> log;
  PingPong a(0, 1, true, 10, log), b(1, 0, false, 10, log);
  kernel.Register(a);
  kernel.Register(b);
  kernel.Run();
  if (csv != nullptr) {
    std::ostringstream out;
    kernel.WriteTraceCsv(out);
    *csv = out.str();
  }
  return kernel.TraceHash();
}

TEST(KernelTest, TraceHashIsSeedDeterministic) {
  std::string csv1, csv2;
  EXPECT_EQ(RunAndHash(5, &csv1), RunAndHash(5, &csv2));
  EXPECT_EQ(csv1, csv2);
  EXPECT_NE(RunAndHash(5, nullptr), RunAndHash(6, nullptr));
  EXPECT_EQ(csv1.substr(0, csv1.find('\n')), "time_ns,sender,recipient,kind,seq,bytes");
  EXPECT_EQ(std::count(csv1.begin(), csv1.end(), '\n'), 11);
}

}  // namespace
}  // namespace ppfl
