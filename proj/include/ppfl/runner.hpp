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

// Experiment runner: a flat key=value configuration surface, single runs that
// write a manifest plus metric and timing CSVs, and sweeps over client count,
// epsilon and neighborhood mode.

#ifndef PPFL_RUNNER_HPP_
#define PPFL_RUNNER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppfl/analysis.hpp"
#include "ppfl/data.hpp"
#include "ppfl/protocol.hpp"

namespace ppfl {

enum class GroupChoice { kToy, kModp };

struct RunConfig {
  size_t clients = 100;
  size_t iterations = 30;
  double epsilon = std::numeric_limits<double>::infinity();  // inf: no noise
  TrainConfig train;
  NeighborhoodMode neighborhood = NeighborhoodMode::kFull;
  TimingMode timing = TimingMode::kFixed;
  FixedCosts fixed_costs;
  SimTime latency_min = 200'000;
  SimTime latency_max = 2'000'000;
  SimTime jitter_max = 100'000;
  unsigned fractional_bits = kDefaultFractionalBits;
  double weight_bound = 1e6;
  GroupChoice group = GroupChoice::kModp;
  unsigned lambda = 2048;

  // Data: the CSV when `data` names an existing file, synthetic data when
  // `data` is empty or (with `synth` set) the file is missing.
  std::string data;
  bool synth = false;
  size_t synth_rows = 50'000;
  double synth_fraud_rate = 0.002;
  size_t synth_features = 29;
  double synth_separation = 2.0;
  bool standardize_amount = false;
  double train_fraction = 0.75;
  size_t sample_size = kDefaultLocalSampleSize;
  bool allow_small = false;

  uint64_t seed = 0;
  std::optional<uint64_t> split_seed;  // defaults to seed
  std::optional<uint64_t> synth_seed;  // defaults to seed
  uint64_t max_events = 200'000'000;
  bool trace = false;
  std::string out;

  // Throws kConfig naming the key for unknown keys or unparseable values.
  void Set(std::string_view key, std::string_view value);
  // Every key with its canonical text; Set over these reproduces the config.
  std::vector<std::pair<std::string, std::string>> Entries() const;

  uint64_t resolved_split_seed() const { return split_seed.value_or(seed); }
  uint64_t resolved_synth_seed() const { return synth_seed.value_or(seed); }
};

// Lines of `key = value`; '#' starts a comment. Accepts a JSON manifest
// written by WriteRunArtifacts as well (its "config" object is applied).
void ApplyConfigText(RunConfig& config, std::istream& in);
void ApplyConfigFile(RunConfig& config, const std::filesystem::path& path);

// Checks that do not need the data; ValidateProtocolConfig covers the rest.
void ValidateRunConfig(const RunConfig& config);

ProtocolConfig MakeProtocolConfig(const RunConfig& config);

struct PreparedData {
  std::string source;  // "csv" or "synth"
  Dataset full;
  DataSplit split;
};

PreparedData PrepareData(const RunConfig& config);

struct RunOutcome {
  RunConfig config;
  std::string data_source;
  size_t train_rows = 0;
  size_t test_rows = 0;
  size_t features = 0;
  std::string group_name;
  ProtocolResult protocol;
  std::vector<Evaluation> metrics;  // per iteration, on the test partition
  TimingReport timing;
};

// Runs the protocol and evaluates every broadcast model. No file output.
RunOutcome ExecuteRun(const RunConfig& config, const PreparedData& data,
                      bool audit = false);

// metrics: iteration,loss,mcc,tp,fp,tn,fn
void WriteMetricsCsv(const RunOutcome& outcome, std::ostream& out);
// clients,iterations,neighborhood,timing,total_ms,server_ms_per_iteration,
// dh_setup_ms,training_ms,encrypt_ms
void WriteTimingCsv(const RunOutcome& outcome, std::ostream& out);
// Config entries plus resolved seeds, data shape and run digests.
std::string ManifestJson(const RunOutcome& outcome);
// manifest.json, metrics.csv, timing.csv and, when config.trace, trace.csv.
void WriteRunArtifacts(const RunOutcome& outcome,
                       const std::filesystem::path& dir);

// Validates, prepares data, executes and writes artifacts when config.out is
// set.
RunOutcome RunSingle(const RunConfig& config);

struct SweepGrid {
  std::vector<size_t> clients;
  std::vector<double> epsilons;
  std::vector<NeighborhoodMode> modes;

  // All axes empty: nothing to run.
  bool empty() const {
    return clients.empty() && epsilons.empty() && modes.empty();
  }
};

struct SweepCell {
  size_t clients = 0;
  double epsilon = 0.0;
  NeighborhoodMode mode = NeighborhoodMode::kFull;
  bool ok = false;
  std::string error;
  size_t iterations = 0;
  Evaluation final;
  TimingReport timing;
};

// An empty axis takes the base value. Data is prepared once; a failing cell
// is recorded and the sweep moves on.
std::vector<SweepCell> RunSweep(const RunConfig& base, const SweepGrid& grid);

// n,epsilon,neighborhood,timing,iterations,loss,mcc,tp,fp,tn,fn,total_ms,
// server_ms_per_iteration,dh_setup_ms,training_ms,encrypt_ms,status,error
void WriteSweepCsv(std::span<const SweepCell> cells, TimingMode timing,
                   std::ostream& out);

// Canonical text for an epsilon: "off" for infinity, else shortest round-trip.
std::string FormatEpsilon(double epsilon);

}  // namespace ppfl

#endif  // PPFL_RUNNER_HPP_
