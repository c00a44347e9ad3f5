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

// Evaluation metrics, timing summaries and the two adversarial-recovery
// experiments: a server reading single masked vectors, and clients colluding
// against one honest party.

#ifndef PPFL_ANALYSIS_HPP_
#define PPFL_ANALYSIS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ppfl/data.hpp"
#include "ppfl/learner.hpp"
#include "ppfl/protocol.hpp"
#include "ppfl/secure_agg.hpp"

namespace ppfl {

// Fraud (+1) is the positive class.
struct ConfusionMatrix {
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t tn = 0;
  uint64_t fn = 0;

  uint64_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix Tally(std::span<const bool> predicted,
                      std::span<const bool> actual);

// Matthews correlation; 0 when any marginal is empty.
double Mcc(const ConfusionMatrix& cm);

struct Evaluation {
  double loss = 0.0;  // mean log-loss, unregularized
  ConfusionMatrix confusion;
  double mcc = 0.0;
};

// Probability >= kDecisionThreshold counts as fraud. Throws kEvaluation for
// an empty test set or a weight/feature length mismatch.
Evaluation Evaluate(std::span<const double> w, const Dataset& test);

// Milliseconds.
struct TimingReport {
  size_t clients = 0;
  size_t iterations = 0;
  double total = 0.0;
  double server_per_iteration = 0.0;
  double dh_setup = 0.0;  // per user
  double training = 0.0;  // per user per iteration
  double encrypt = 0.0;   // per user per iteration
};

TimingReport MakeTimingReport(const TimingLedger& ledger);

// What the server learns by decoding one client's masked vector on its own.
struct SnoopingResult {
  uint32_t target = 0;
  uint32_t iteration = 0;
  std::vector<double> estimate;
  std::vector<double> truth;  // the client's trained weights
  std::vector<double> abs_error;
  double mean_abs_error = 0.0;
  double mean_abs_truth = 0.0;
  // Estimate within codec rounding of the truth: the masking hid nothing.
  bool exact_recovery = false;
};

// Needs a result produced with config.audit.
SnoopingResult SnoopingServer(const ProtocolResult& result,
                              const FixedPointCodec& codec, uint32_t target,
                              uint32_t iteration);

struct RecoveryResult {
  uint32_t target = 0;
  uint32_t iteration = 0;
  std::vector<uint32_t> colluders;
  bool full_collusion = false;
  std::vector<double> recovered;
  std::vector<double> truth;        // W_h, trained weights
  std::vector<double> noisy_truth;  // W_h + P_h, what the target released
  std::vector<double> error_vs_noisy;
  std::vector<double> error_vs_truth;
  double max_error_vs_noisy = 0.0;
  double mean_error_vs_truth = 0.0;
};

// With every other client colluding, subtracts their contributions from n
// times the broadcast model. With fewer colluders, strips the pairwise masks
// the colluders share with the target from its masked vector instead; the
// masks shared with honest parties remain. Needs an audited result.
RecoveryResult CollidingClients(const ProtocolResult& result,
                                const FixedPointCodec& codec, size_t clients,
                                uint32_t target, uint32_t iteration,
                                std::span<const uint32_t> colluders);

// Every client except the target.
std::vector<uint32_t> AllOthers(size_t clients, uint32_t target);

struct ChiSquareResult {
  double statistic = 0.0;
  size_t degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Bins words by their top `bin_bits` bits and tests against uniform counts.
ChiSquareResult WordUniformity(std::span<const uint64_t> words,
                               unsigned bin_bits = 4);

}  // namespace ppfl

#endif  // PPFL_ANALYSIS_HPP_
