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

#include "ppfl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "ppfl/error.hpp"

namespace ppfl {
namespace {

double MeanMs(std::span<const SimTime> values) {
  if (values.empty()) return 0.0;
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return sum / static_cast<double>(values.size()) / kNanosPerMilli;
}

const ClientAudit& AuditOf(const ProtocolResult& result, uint32_t client,
                           uint32_t iteration) {
  if (client == 0 || client > result.clients.size()) {
    throw Error(ErrorKind::kEvaluation,
                "no audit record for client " + std::to_string(client) +
                    " (was the run audited?)");
  }
  const ClientAudit& audit = result.clients[client - 1];
  if (iteration >= audit.trained.size() || iteration >= audit.noise.size()) {
    throw Error(ErrorKind::kEvaluation,
                "no audit record for iteration " + std::to_string(iteration));
  }
  return audit;
}

const MaskedVector& InboxEntry(const ProtocolResult& result, uint32_t client,
                               uint32_t iteration) {
  if (iteration >= result.server.inbox.size()) {
    throw Error(ErrorKind::kEvaluation, "server inbox has no iteration " +
                                            std::to_string(iteration));
  }
  for (const MaskedVector& v : result.server.inbox[iteration]) {
    if (v.client_id == client) return v;
  }
  throw Error(ErrorKind::kEvaluation,
              "server inbox lacks client " + std::to_string(client));
}

std::vector<double> Added(const std::vector<double>& a,
                          const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

// The words a client contributes before masking.
std::vector<uint64_t> Contribution(const FixedPointCodec& codec,
                                   const ClientAudit& audit,
                                   uint32_t iteration) {
  std::vector<uint64_t> words = codec.Encode(audit.trained[iteration]);
  const std::vector<uint64_t> noise = codec.Encode(audit.noise[iteration]);
  for (size_t k = 0; k < words.size(); ++k) words[k] += noise[k];
  return words;
}

}  // namespace

ConfusionMatrix Tally(std::span<const bool> predicted,
                      std::span<const bool> actual) {
  if (predicted.size() != actual.size()) {
    throw Error(ErrorKind::kEvaluation, "prediction and label counts differ");
  }
  ConfusionMatrix cm;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) {
      ++(actual[i] ? cm.tp : cm.fp);
    } else {
      ++(actual[i] ? cm.fn : cm.tn);
    }
  }
  return cm;
}

double Mcc(const ConfusionMatrix& cm) {
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double tn = static_cast<double>(cm.tn);
  const double fn = static_cast<double>(cm.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

Evaluation Evaluate(std::span<const double> w, const Dataset& test) {
  if (test.empty()) throw Error(ErrorKind::kEvaluation, "empty test set");
  if (w.size() != test.cols) {
    throw Error(ErrorKind::kEvaluation,
                "model has " + std::to_string(w.size()) + " weights for " +
                    std::to_string(test.cols) + " features");
  }
  Evaluation ev;
  double loss = 0.0;
  for (size_t r = 0; r < test.rows; ++r) {
    const auto x = test.row(r);
    const double z = std::inner_product(w.begin(), w.end(), x.begin(), 0.0);
    const bool fraud = test.labels[r] > 0.0;
    if (Sigmoid(z) >= kDecisionThreshold) {
      ++(fraud ? ev.confusion.tp : ev.confusion.fp);
    } else {
      ++(fraud ? ev.confusion.fn : ev.confusion.tn);
    }
    loss += Log1pExp(-test.labels[r] * z);
  }
  ev.loss = loss / static_cast<double>(test.rows);
  ev.mcc = Mcc(ev.confusion);
  return ev;
}

TimingReport MakeTimingReport(const TimingLedger& ledger) {
  TimingReport report;
  report.clients = ledger.client_dh_setup.size();
  report.iterations = ledger.server_iteration.size();
  report.total = static_cast<double>(ledger.total) / kNanosPerMilli;
  report.server_per_iteration = MeanMs(ledger.server_iteration);
  report.dh_setup = MeanMs(ledger.client_dh_setup);
  std::vector<SimTime> training;
  std::vector<SimTime> encrypt;
  for (const auto& row : ledger.client_training) {
    training.insert(training.end(), row.begin(), row.end());
  }
  for (const auto& row : ledger.client_encrypt) {
    encrypt.insert(encrypt.end(), row.begin(), row.end());
  }
  report.training = MeanMs(training);
  report.encrypt = MeanMs(encrypt);
  return report;
}

SnoopingResult SnoopingServer(const ProtocolResult& result,
                              const FixedPointCodec& codec, uint32_t target,
                              uint32_t iteration) {
  const ClientAudit& audit = AuditOf(result, target, iteration);
  const MaskedVector& seen = InboxEntry(result, target, iteration);
  SnoopingResult out;
  out.target = target;
  out.iteration = iteration;
  out.truth = audit.trained[iteration];
  const size_t m = out.truth.size();
  out.estimate.resize(m);
  out.abs_error.resize(m);
  double max_error = 0.0;
  for (size_t k = 0; k < m; ++k) {
    out.estimate[k] = codec.Decode(seen.words[k]);
    out.abs_error[k] = std::abs(out.estimate[k] - out.truth[k]);
    out.mean_abs_error += out.abs_error[k];
    out.mean_abs_truth += std::abs(out.truth[k]);
    max_error = std::max(max_error, out.abs_error[k]);
  }
  if (m > 0) {
    out.mean_abs_error /= static_cast<double>(m);
    out.mean_abs_truth /= static_cast<double>(m);
  }
  out.exact_recovery = max_error <= codec.resolution();
  return out;
}

std::vector<uint32_t> AllOthers(size_t clients, uint32_t target) {
  std::vector<uint32_t> out;
  for (uint32_t c = 1; c <= clients; ++c) {
    if (c != target) out.push_back(c);
  }
  return out;
}

RecoveryResult CollidingClients(const ProtocolResult& result,
                                const FixedPointCodec& codec, size_t clients,
                                uint32_t target, uint32_t iteration,
                                std::span<const uint32_t> colluders) {
  const ClientAudit& honest = AuditOf(result, target, iteration);
  const std::set<uint32_t> group(colluders.begin(), colluders.end());
  if (group.count(target) || group.size() != colluders.size()) {
    throw Error(ErrorKind::kEvaluation,
                "colluders must be distinct and exclude the target");
  }
  for (uint32_t c : group) {
    if (c == 0 || c > clients) {
      throw Error(ErrorKind::kEvaluation,
                  "colluder " + std::to_string(c) + " is not a client");
    }
  }
  if (iteration >= result.models.size()) {
    throw Error(ErrorKind::kEvaluation, "no broadcast model for iteration " +
                                            std::to_string(iteration));
  }

  RecoveryResult out;
  out.target = target;
  out.iteration = iteration;
  out.colluders.assign(group.begin(), group.end());
  out.full_collusion = group.size() + 1 == clients;
  out.truth = honest.trained[iteration];
  out.noisy_truth = Added(honest.trained[iteration], honest.noise[iteration]);
  const size_t m = out.truth.size();

  std::vector<uint64_t> words(m);
  if (out.full_collusion) {
    // n * W rescaled is the modular total the server decoded.
    const std::vector<double>& shared = result.models[iteration];
    for (size_t k = 0; k < m; ++k) {
      const double total = shared[k] * static_cast<double>(clients) * codec.scale();
      words[k] = static_cast<uint64_t>(std::llround(total));
    }
    for (uint32_t c : group) {
      const std::vector<uint64_t> own =
          Contribution(codec, AuditOf(result, c, iteration), iteration);
      for (size_t k = 0; k < m; ++k) words[k] -= own[k];
    }
  } else {
    words = InboxEntry(result, target, iteration).words;
    for (uint32_t c : group) {
      const ClientAudit& audit = AuditOf(result, c, iteration);
      const auto key = audit.shared_keys.find(target);
      if (key == audit.shared_keys.end()) continue;  // not neighbors
      const std::vector<uint64_t> mask = PairMaskAt(key->second, iteration, m);
      // The target added the mask when it holds the lower index.
      for (size_t k = 0; k < m; ++k) {
        words[k] = target < c ? words[k] - mask[k] : words[k] + mask[k];
      }
    }
  }

  out.recovered.resize(m);
  out.error_vs_noisy.resize(m);
  out.error_vs_truth.resize(m);
  for (size_t k = 0; k < m; ++k) {
    out.recovered[k] = codec.Decode(words[k]);
    out.error_vs_noisy[k] = std::abs(out.recovered[k] - out.noisy_truth[k]);
    out.error_vs_truth[k] = std::abs(out.recovered[k] - out.truth[k]);
    out.max_error_vs_noisy = std::max(out.max_error_vs_noisy, out.error_vs_noisy[k]);
    out.mean_error_vs_truth += out.error_vs_truth[k];
  }
  if (m > 0) out.mean_error_vs_truth /= static_cast<double>(m);
  return out;
}

ChiSquareResult WordUniformity(std::span<const uint64_t> words,
                               unsigned bin_bits) {
  if (bin_bits == 0 || bin_bits > 16) {
    throw Error(ErrorKind::kParameter, "bin_bits must lie in [1, 16]");
  }
  if (words.empty()) throw Error(ErrorKind::kEvaluation, "no words to test");
  const size_t bins = size_t{1} << bin_bits;
  std::vector<uint64_t> counts(bins, 0);
  for (uint64_t w : words) ++counts[w >> (64 - bin_bits)];
  const double expected = static_cast<double>(words.size()) / bins;
  ChiSquareResult out;
  for (uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    out.statistic += d * d / expected;
  }
  out.degrees_of_freedom = bins - 1;
  out.p_value = boost::math::gamma_q(out.degrees_of_freedom / 2.0,
                                     out.statistic / 2.0);
  return out;
}

}  // namespace ppfl
