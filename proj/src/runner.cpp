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

#include "ppfl/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ppfl/error.hpp"

namespace ppfl {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value,
                           std::string_view expected) {
  throw Error(ErrorKind::kConfig, "config key '" + std::string(key) +
                                      "': cannot read '" + std::string(value) +
                                      "' as " + std::string(expected));
}

template <typename T>
T ParseInteger(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    BadValue(key, value, "an integer");
  }
  return out;
}

double ParseReal(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    BadValue(key, value, "a number");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  BadValue(key, value, "true or false");
}

std::string FormatReal(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                  std::chars_format::general);
  return std::string(buf, res.ptr);
}

std::string FormatBool(bool v) { return v ? "true" : "false"; }

void WriteEvaluationColumns(std::ostream& out, const Evaluation& ev) {
  out << FormatReal(ev.loss) << ',' << FormatReal(ev.mcc) << ','
      << ev.confusion.tp << ',' << ev.confusion.fp << ',' << ev.confusion.tn
      << ',' << ev.confusion.fn;
}

void WriteTimingColumns(std::ostream& out, const TimingReport& t) {
  out << FormatReal(t.total) << ',' << FormatReal(t.server_per_iteration) << ','
      << FormatReal(t.dh_setup) << ',' << FormatReal(t.training) << ','
      << FormatReal(t.encrypt);
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kConfig, "cannot write " + path.string());
  }
  return out;
}

}  // namespace

std::string FormatEpsilon(double epsilon) {
  return std::isinf(epsilon) && epsilon > 0 ? "off" : FormatReal(epsilon);
}

void RunConfig::Set(std::string_view key, std::string_view raw) {
  const std::string_view value = Trim(raw);
  auto ns = [&] { return ParseInteger<SimTime>(key, value); };
  if (key == "clients") {
    clients = ParseInteger<size_t>(key, value);
  } else if (key == "iterations") {
    iterations = ParseInteger<size_t>(key, value);
  } else if (key == "epsilon") {
    if (value == "off" || value == "none" || value == "inf") {
      epsilon = std::numeric_limits<double>::infinity();
    } else {
      epsilon = ParseReal(key, value);
    }
  } else if (key == "local_iters") {
    train.local_iterations = ParseInteger<size_t>(key, value);
  } else if (key == "learning_rate") {
    train.learning_rate = ParseReal(key, value);
  } else if (key == "alpha_reg") {
    train.alpha_reg = ParseReal(key, value);
  } else if (key == "neighborhood") {
    neighborhood = ParseNeighborhoodMode(value);
  } else if (key == "timing") {
    timing = ParseTimingMode(value);
  } else if (key == "latency_min_ns") {
    latency_min = ns();
  } else if (key == "latency_max_ns") {
    latency_max = ns();
  } else if (key == "jitter_max_ns") {
    jitter_max = ns();
  } else if (key == "fixed_dh_setup_ns") {
    fixed_costs.dh_setup = ns();
  } else if (key == "fixed_training_ns") {
    fixed_costs.training = ns();
  } else if (key == "fixed_encrypt_ns") {
    fixed_costs.encrypt = ns();
  } else if (key == "fixed_server_store_ns") {
    fixed_costs.server_store = ns();
  } else if (key == "fixed_server_aggregate_ns") {
    fixed_costs.server_aggregate = ns();
  } else if (key == "fixed_server_relay_ns") {
    fixed_costs.server_relay = ns();
  } else if (key == "fractional_bits") {
    fractional_bits = ParseInteger<unsigned>(key, value);
  } else if (key == "weight_bound") {
    weight_bound = ParseReal(key, value);
  } else if (key == "group") {
    if (value == "toy") {
      group = GroupChoice::kToy;
    } else if (value == "modp") {
      group = GroupChoice::kModp;
    } else {
      BadValue(key, value, "toy or modp");
    }
  } else if (key == "lambda") {
    lambda = ParseInteger<unsigned>(key, value);
  } else if (key == "data") {
    data = std::string(value);
  } else if (key == "synth") {
    synth = ParseBool(key, value);
  } else if (key == "synth_rows") {
    synth_rows = ParseInteger<size_t>(key, value);
  } else if (key == "synth_fraud_rate") {
    synth_fraud_rate = ParseReal(key, value);
  } else if (key == "synth_features") {
    synth_features = ParseInteger<size_t>(key, value);
  } else if (key == "synth_separation") {
    synth_separation = ParseReal(key, value);
  } else if (key == "standardize_amount") {
    standardize_amount = ParseBool(key, value);
  } else if (key == "train_fraction") {
    train_fraction = ParseReal(key, value);
  } else if (key == "sample_size") {
    sample_size = ParseInteger<size_t>(key, value);
  } else if (key == "allow_small") {
    allow_small = ParseBool(key, value);
  } else if (key == "seed") {
    seed = ParseInteger<uint64_t>(key, value);
  } else if (key == "split_seed") {
    split_seed = ParseInteger<uint64_t>(key, value);
  } else if (key == "synth_seed") {
    synth_seed = ParseInteger<uint64_t>(key, value);
  } else if (key == "max_events") {
    max_events = ParseInteger<uint64_t>(key, value);
  } else if (key == "trace") {
    trace = ParseBool(key, value);
  } else if (key == "out") {
    out = std::string(value);
  } else {
    throw Error(ErrorKind::kConfig, "unknown config key '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::Entries() const {
  auto n = [](auto v) { return std::to_string(v); };
  return {
      {"clients", n(clients)},
      {"iterations", n(iterations)},
      {"epsilon", FormatEpsilon(epsilon)},
      {"local_iters", n(train.local_iterations)},
      {"learning_rate", FormatReal(train.learning_rate)},
      {"alpha_reg", FormatReal(train.alpha_reg)},
      {"neighborhood", NeighborhoodModeName(neighborhood)},
      {"timing", TimingModeName(timing)},
      {"latency_min_ns", n(latency_min)},
      {"latency_max_ns", n(latency_max)},
      {"jitter_max_ns", n(jitter_max)},
      {"fixed_dh_setup_ns", n(fixed_costs.dh_setup)},
      {"fixed_training_ns", n(fixed_costs.training)},
      {"fixed_encrypt_ns", n(fixed_costs.encrypt)},
      {"fixed_server_store_ns", n(fixed_costs.server_store)},
      {"fixed_server_aggregate_ns", n(fixed_costs.server_aggregate)},
      {"fixed_server_relay_ns", n(fixed_costs.server_relay)},
      {"fractional_bits", n(fractional_bits)},
      {"weight_bound", FormatReal(weight_bound)},
      {"group", group == GroupChoice::kToy ? "toy" : "modp"},
      {"lambda", n(lambda)},
      {"data", data},
      {"synth", FormatBool(synth)},
      {"synth_rows", n(synth_rows)},
      {"synth_fraud_rate", FormatReal(synth_fraud_rate)},
      {"synth_features", n(synth_features)},
      {"synth_separation", FormatReal(synth_separation)},
      {"standardize_amount", FormatBool(standardize_amount)},
      {"train_fraction", FormatReal(train_fraction)},
      {"sample_size", n(sample_size)},
      {"allow_small", FormatBool(allow_small)},
      {"seed", n(seed)},
      {"split_seed", n(resolved_split_seed())},
      {"synth_seed", n(resolved_synth_seed())},
      {"max_events", n(max_events)},
      {"trace", FormatBool(trace)},
      {"out", out},
  };
}

void ApplyConfigText(RunConfig& config, std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (Trim(text).starts_with("{")) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kConfig, std::string("malformed JSON config: ") + e.what());
    }
    const nlohmann::json& entries = doc.contains("config") ? doc["config"] : doc;
    if (!entries.is_object()) {
      throw Error(ErrorKind::kConfig, "JSON config must be an object");
    }
    for (const auto& [key, value] : entries.items()) {
      config.Set(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    return;
  }
  std::istringstream lines(text);
  std::string line;
  size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    std::string_view view(line);
    view = Trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kConfig,
                  "config line " + std::to_string(number) + ": expected key = value");
    }
    config.Set(Trim(view.substr(0, eq)), view.substr(eq + 1));
  }
}

void ApplyConfigFile(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config " + path.string());
  ApplyConfigText(config, in);
}

void ValidateRunConfig(const RunConfig& config) {
  if (config.clients == 0) throw Error(ErrorKind::kConfig, "clients must be >= 1");
  if (config.iterations == 0) throw Error(ErrorKind::kConfig, "iterations must be >= 1");
  if (std::isnan(config.epsilon) || config.epsilon <= 0.0) {
    throw Error(ErrorKind::kConfig,
                "epsilon must be > 0; use 'off' (or --no-noise) to disable noise");
  }
  ValidateTrainConfig(config.train);
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "train_fraction must lie in (0, 1)");
  }
  if (config.sample_size == 0) throw Error(ErrorKind::kConfig, "sample_size must be >= 1");
  if (config.data.empty() || config.synth) {
    if (config.synth_rows < 2) throw Error(ErrorKind::kConfig, "synth_rows must be >= 2");
    if (!(config.synth_fraud_rate > 0.0 && config.synth_fraud_rate < 1.0)) {
      throw Error(ErrorKind::kConfig, "synth_fraud_rate must lie in (0, 1)");
    }
    if (config.synth_features == 0) {
      throw Error(ErrorKind::kConfig, "synth_features must be >= 1");
    }
    if (!std::isfinite(config.synth_separation)) {
      throw Error(ErrorKind::kConfig, "synth_separation must be finite");
    }
  }
  // Group parameters are checked by building them.
  GenerateGroup(config.lambda, config.group == GroupChoice::kToy);
  // Codec range.
  FixedPointCodec codec(config.fractional_bits);
  (void)codec;
}

ProtocolConfig MakeProtocolConfig(const RunConfig& config) {
  ProtocolConfig pc;
  pc.clients = config.clients;
  pc.iterations = config.iterations;
  pc.train = config.train;
  pc.epsilon = config.epsilon;
  pc.neighborhood = config.neighborhood;
  pc.fractional_bits = config.fractional_bits;
  pc.weight_bound = config.weight_bound;
  pc.group = GenerateGroup(config.lambda, config.group == GroupChoice::kToy);
  pc.timing = config.timing;
  pc.fixed_costs = config.fixed_costs;
  pc.latency_min = config.latency_min;
  pc.latency_max = config.latency_max;
  pc.jitter_max = config.jitter_max;
  pc.sample = SampleOptions{config.sample_size, config.allow_small};
  pc.seed = config.seed;
  pc.keep_trace = config.trace;
  pc.max_events = config.max_events;
  return pc;
}

PreparedData PrepareData(const RunConfig& config) {
  PreparedData out;
  const bool have_file = !config.data.empty() && std::filesystem::exists(config.data);
  if (have_file) {
    out.source = "csv";
    out.full = LoadCsv(config.data, CsvOptions{config.standardize_amount});
  } else if (config.data.empty() || config.synth) {
    out.source = "synth";
    out.full = Synth(config.synth_rows, config.synth_fraud_rate, config.synth_features,
                     config.resolved_synth_seed(), config.synth_separation);
  } else {
    throw Error(ErrorKind::kIngestion,
                "data file " + config.data +
                    " not found; download the credit card fraud CSV or pass --synth");
  }
  out.split = SplitDataset(
      out.full, SplitConfig{config.train_fraction, config.resolved_split_seed()});
  return out;
}

RunOutcome ExecuteRun(const RunConfig& config, const PreparedData& data, bool audit) {
  ValidateRunConfig(config);
  RunOutcome outcome;
  outcome.config = config;
  outcome.data_source = data.source;
  outcome.train_rows = data.split.train.rows;
  outcome.test_rows = data.split.test.rows;
  outcome.features = data.split.train.cols;
  ProtocolConfig pc = MakeProtocolConfig(config);
  pc.audit = audit;
  outcome.group_name = pc.group.name;
  outcome.protocol = RunProtocol(pc, data.split.train);
  outcome.metrics.reserve(outcome.protocol.models.size());
  for (const ModelWeights& w : outcome.protocol.models) {
    outcome.metrics.push_back(Evaluate(w, data.split.test));
  }
  outcome.timing = MakeTimingReport(outcome.protocol.timing);
  return outcome;
}

void WriteMetricsCsv(const RunOutcome& outcome, std::ostream& out) {
  out << "iteration,loss,mcc,tp,fp,tn,fn\n";
  for (size_t t = 0; t < outcome.metrics.size(); ++t) {
    out << t << ',';
    WriteEvaluationColumns(out, outcome.metrics[t]);
    out << '\n';
  }
}

void WriteTimingCsv(const RunOutcome& outcome, std::ostream& out) {
  out << "clients,iterations,neighborhood,timing,total_ms,server_ms_per_iteration,"
         "dh_setup_ms,training_ms,encrypt_ms\n";
  out << outcome.timing.clients << ',' << outcome.timing.iterations << ','
      << NeighborhoodModeName(outcome.config.neighborhood) << ','
      << TimingModeName(outcome.config.timing) << ',';
  WriteTimingColumns(out, outcome.timing);
  out << '\n';
}

std::string ManifestJson(const RunOutcome& outcome) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : outcome.config.Entries()) config[key] = value;
  doc["config"] = std::move(config);
  const ProtocolResult& r = outcome.protocol;
  doc["resolved"] = {
      {"data_source", outcome.data_source},
      {"train_rows", outcome.train_rows},
      {"test_rows", outcome.test_rows},
      {"weights", outcome.features},
      {"group", outcome.group_name},
      {"noise_scale", r.noise_scale},
      {"local_sample_size", r.local_sample_size},
      {"pairwise_chains", r.pairwise_chains},
      {"events", r.events},
      {"trace_hash", r.trace_hash},
  };
  if (!outcome.metrics.empty()) {
    const Evaluation& last = outcome.metrics.back();
    doc["final"] = {{"loss", last.loss}, {"mcc", last.mcc}};
  }
  if (!r.models.empty()) doc["final_weights"] = r.models.back();
  return doc.dump(2) + "\n";
}

void WriteRunArtifacts(const RunOutcome& outcome, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kConfig, "cannot create " + dir.string() + ": " + ec.message());
  }
  {
    auto out = OpenOutput(dir / "manifest.json");
    out << ManifestJson(outcome);
  }
  {
    auto out = OpenOutput(dir / "metrics.csv");
    WriteMetricsCsv(outcome, out);
  }
  {
    auto out = OpenOutput(dir / "timing.csv");
    WriteTimingCsv(outcome, out);
  }
  if (outcome.config.trace) {
    auto out = OpenOutput(dir / "trace.csv");
    out << "time_ns,sender,recipient,kind,seq,bytes\n";
    for (const TraceRecord& t : outcome.protocol.trace) {
      out << t.time << ',' << t.sender << ',' << t.recipient << ','
          << MessageKindName(t.kind) << ',' << t.seq << ',' << t.bytes << '\n';
    }
  }
}

RunOutcome RunSingle(const RunConfig& config) {
  ValidateRunConfig(config);
  const PreparedData data = PrepareData(config);
  RunOutcome outcome = ExecuteRun(config, data);
  if (!config.out.empty()) WriteRunArtifacts(outcome, config.out);
  return outcome;
}

std::vector<SweepCell> RunSweep(const RunConfig& base, const SweepGrid& grid) {
  std::vector<SweepCell> cells;
  if (grid.empty()) return cells;
  ValidateRunConfig(base);
  const std::vector<size_t> clients =
      grid.clients.empty() ? std::vector<size_t>{base.clients} : grid.clients;
  const std::vector<double> epsilons =
      grid.epsilons.empty() ? std::vector<double>{base.epsilon} : grid.epsilons;
  const std::vector<NeighborhoodMode> modes =
      grid.modes.empty() ? std::vector<NeighborhoodMode>{base.neighborhood} : grid.modes;
  const PreparedData data = PrepareData(base);
  for (NeighborhoodMode mode : modes) {
    for (double eps : epsilons) {
      for (size_t n : clients) {
        SweepCell cell;
        cell.clients = n;
        cell.epsilon = eps;
        cell.mode = mode;
        RunConfig cfg = base;
        cfg.clients = n;
        cfg.epsilon = eps;
        cfg.neighborhood = mode;
        try {
          const RunOutcome outcome = ExecuteRun(cfg, data);
          cell.iterations = outcome.metrics.size();
          if (!outcome.metrics.empty()) cell.final = outcome.metrics.back();
          cell.timing = outcome.timing;
          cell.ok = true;
        } catch (const Error& e) {
          cell.error = std::string(ErrorKindName(e.kind())) + ": " + e.what();
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

void WriteSweepCsv(std::span<const SweepCell> cells, TimingMode timing,
                   std::ostream& out) {
  out << "n,epsilon,neighborhood,timing,iterations,loss,mcc,tp,fp,tn,fn,total_ms,"
         "server_ms_per_iteration,dh_setup_ms,training_ms,encrypt_ms,status,error\n";
  for (const SweepCell& c : cells) {
    out << c.clients << ',' << FormatEpsilon(c.epsilon) << ','
        << NeighborhoodModeName(c.mode) << ',' << TimingModeName(timing) << ','
        << c.iterations << ',';
    WriteEvaluationColumns(out, c.final);
    out << ',';
    WriteTimingColumns(out, c.timing);
    std::string error = c.error;
    std::replace(error.begin(), error.end(), '"', '\'');
    out << ',' << (c.ok ? "ok" : "failed") << ",\"" << error << "\"\n";
  }
}

}  // namespace ppfl
