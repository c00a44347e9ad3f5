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

// Command-line runner for the federated learning simulator. Everything goes
// through the C API; flags override values read from --config.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ppfl/ppfl.h"

namespace {

struct Options {
  std::string config_file;
  std::vector<std::string> sets;  // key=value overrides
  std::vector<std::pair<std::string, std::string>> flags;
  std::vector<std::string> synth;  // N RATE
  bool no_noise = false;
  // Sweep axes.
  std::vector<size_t> grid_clients;
  std::vector<std::string> grid_epsilons;
  std::vector<std::string> grid_modes;
  std::string csv;
};

class ConfigHandle {
 public:
  ConfigHandle() {
    if (ppfl_config_create(&handle_) != PPFL_OK) std::abort();
  }
  ~ConfigHandle() { ppfl_config_destroy(handle_); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
  ppfl_config* get() const { return handle_; }

 private:
  ppfl_config* handle_ = nullptr;
};

int Report(ppfl_status status, const std::string& context) {
  std::cerr << "ppfl-sim: " << context << ": " << ppfl_status_name(status)
            << " error: " << ppfl_last_error() << "\n";
  return ppfl_exit_code(status);
}

std::string Get(const ppfl_config* cfg, const char* key) {
  size_t needed = 0;
  ppfl_config_get(cfg, key, nullptr, 0, &needed);
  std::string out(needed, '\0');
  if (ppfl_config_get(cfg, key, out.data(), out.size(), &needed) != PPFL_OK) {
    return {};
  }
  out.resize(needed - 1);
  return out;
}

// Applies --config, then --set, then dedicated flags.
ppfl_status Configure(const Options& opt, ppfl_config* cfg, std::string& where) {
  ppfl_status st = PPFL_OK;
  if (!opt.config_file.empty()) {
    where = "loading " + opt.config_file;
    if ((st = ppfl_config_load_file(cfg, opt.config_file.c_str())) != PPFL_OK) return st;
  }
  for (const std::string& kv : opt.sets) {
    const auto eq = kv.find('=');
    where = "--set " + kv;
    if (eq == std::string::npos) {
      return ppfl_config_set(cfg, kv.c_str(), "");  // reports the bad value
    }
    const std::string key = kv.substr(0, eq);
    if ((st = ppfl_config_set(cfg, key.c_str(), kv.c_str() + eq + 1)) != PPFL_OK) {
      return st;
    }
  }
  for (const auto& [key, value] : opt.flags) {
    where = "--" + key;
    if ((st = ppfl_config_set(cfg, key.c_str(), value.c_str())) != PPFL_OK) return st;
  }
  if (opt.synth.size() == 2) {
    where = "--synth";
    if ((st = ppfl_config_set(cfg, "synth", "true")) != PPFL_OK) return st;
    if ((st = ppfl_config_set(cfg, "synth_rows", opt.synth[0].c_str())) != PPFL_OK) return st;
    if ((st = ppfl_config_set(cfg, "synth_fraud_rate", opt.synth[1].c_str())) != PPFL_OK) {
      return st;
    }
  }
  if (opt.no_noise) {
    where = "--no-noise";
    if ((st = ppfl_config_set(cfg, "epsilon", "off")) != PPFL_OK) return st;
  }
  where = "validation";
  return ppfl_config_validate(cfg);
}

void PrintSummary(const ppfl_result* result, const ppfl_config* cfg) {
  const size_t iterations = ppfl_result_iterations(result);
  ppfl_metrics last{};
  if (iterations > 0) ppfl_result_metrics(result, iterations - 1, &last);
  ppfl_timing timing{};
  ppfl_result_timing(result, &timing);
  std::printf("clients        %zu (%s, %s timing)\n", timing.clients,
              Get(cfg, "neighborhood").c_str(), Get(cfg, "timing").c_str());
  std::printf("epsilon        %s (noise scale %.6g)\n", Get(cfg, "epsilon").c_str(),
              ppfl_result_noise_scale(result));
  std::printf("iterations     %zu\n", iterations);
  std::printf("final loss     %.6f\n", last.loss);
  std::printf("final MCC      %.4f  (TP %llu FP %llu TN %llu FN %llu)\n", last.mcc,
              static_cast<unsigned long long>(last.tp),
              static_cast<unsigned long long>(last.fp),
              static_cast<unsigned long long>(last.tn),
              static_cast<unsigned long long>(last.fn));
  std::printf("total time     %.3f ms\n", timing.total_ms);
  std::printf("server/iter    %.3f ms\n", timing.server_ms_per_iteration);
  std::printf("DH setup/user  %.3f ms\n", timing.dh_setup_ms);
  std::printf("training/user  %.3f ms\n", timing.training_ms);
  std::printf("encrypt/user   %.3f ms\n", timing.encrypt_ms);
  std::printf("trace hash     %s\n", ppfl_result_trace_hash(result));
}

int RunOne(const Options& opt) {
  ConfigHandle cfg;
  std::string where;
  if (ppfl_status st = Configure(opt, cfg.get(), where); st != PPFL_OK) {
    return Report(st, where);
  }
  ppfl_result* result = nullptr;
  if (ppfl_status st = ppfl_run(cfg.get(), &result); st != PPFL_OK) {
    return Report(st, "run");
  }
  PrintSummary(result, cfg.get());
  const std::string out = Get(cfg.get(), "out");
  if (!out.empty()) std::printf("artifacts      %s\n", out.c_str());
  ppfl_result_destroy(result);
  return 0;
}

int RunSweep(const Options& opt) {
  ConfigHandle cfg;
  std::string where;
  if (ppfl_status st = Configure(opt, cfg.get(), where); st != PPFL_OK) {
    return Report(st, where);
  }
  std::vector<double> epsilons;
  for (const std::string& e : opt.grid_epsilons) {
    if (e == "off" || e == "inf") {
      epsilons.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    // Route through the config parser for consistent validation messages.
    if (ppfl_status st = ppfl_config_set(cfg.get(), "epsilon", e.c_str()); st != PPFL_OK) {
      return Report(st, "--grid-epsilon " + e);
    }
    epsilons.push_back(std::strtod(e.c_str(), nullptr));
  }
  std::vector<const char*> modes;
  for (const std::string& m : opt.grid_modes) modes.push_back(m.c_str());
  std::string csv = opt.csv;
  if (csv.empty()) {
    const std::string out = Get(cfg.get(), "out");
    csv = (out.empty() ? std::string(".") : out) + "/sweep.csv";
  }
  size_t run = 0;
  size_t failed = 0;
  const ppfl_status st =
      ppfl_sweep(cfg.get(), opt.grid_clients.data(), opt.grid_clients.size(),
                 epsilons.data(), epsilons.size(), modes.data(), modes.size(),
                 csv.c_str(), &run, &failed);
  if (st != PPFL_OK) return Report(st, "sweep");
  if (run == 0) {
    std::printf("empty grid, nothing to run\n");
    return 0;
  }
  std::printf("%zu cells, %zu failed, results in %s\n", run, failed, csv.c_str());
  return 0;
}

void AddRunFlags(CLI::App& app, Options& opt) {
  auto flag = [&](const std::string& name, const std::string& key,
                  const std::string& help) {
    app.add_option_function<std::string>(
        "--" + name,
        [&opt, key](const std::string& v) { opt.flags.emplace_back(key, v); }, help);
  };
  app.add_option("--config", opt.config_file,
                 "key = value file or an earlier manifest.json")
      ->check(CLI::ExistingFile);
  app.add_option("--set", opt.sets, "Override any config key (key=value)");
  flag("clients", "clients", "Number of clients n");
  flag("epsilon", "epsilon", "Privacy budget per weight (or 'off')");
  app.add_flag("--no-noise", opt.no_noise, "Disable the Laplace noise");
  flag("iterations", "iterations", "Protocol iterations T");
  flag("local-iters", "local_iters", "Gradient steps per local training");
  flag("neighborhood", "neighborhood", "Peer graph: full or logn");
  flag("timing", "timing", "measured or fixed");
  flag("data", "data", "Credit card fraud CSV");
  app.add_option("--synth", opt.synth, "Synthetic data: ROWS FRAUD_RATE")
      ->expected(2);
  flag("seed", "seed", "Global seed");
  flag("out", "out", "Output directory");
  flag("group", "group", "toy or modp");
  flag("lambda", "lambda", "Security parameter in bits");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private secure federated logistic regression "
               "simulator"};
  app.set_version_flag("--version", std::string(ppfl_version()));
  Options run_opt;
  Options sweep_opt;
  CLI::App* run = app.add_subcommand("run", "Run one simulation (default)");
  CLI::App* sweep = app.add_subcommand("sweep", "Run a grid of simulations");
  AddRunFlags(app, run_opt);
  AddRunFlags(*run, run_opt);
  AddRunFlags(*sweep, sweep_opt);
  sweep->add_option("--grid-clients", sweep_opt.grid_clients, "Client counts")
      ->delimiter(',');
  sweep->add_option("--grid-epsilon", sweep_opt.grid_epsilons, "Epsilons ('off' allowed)")
      ->delimiter(',');
  sweep->add_option("--grid-modes", sweep_opt.grid_modes, "Neighborhood modes")
      ->delimiter(',');
  sweep->add_option("--csv", sweep_opt.csv, "Combined CSV path (default OUT/sweep.csv)");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (*sweep) return RunSweep(sweep_opt);
  return RunOne(run_opt);
}
