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

#include "ppfl/ppfl.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "ppfl/error.hpp"
#include "ppfl/runner.hpp"

struct ppfl_config {
  ppfl::RunConfig config;
};

struct ppfl_result {
  ppfl::RunOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

ppfl_status StatusOf(ppfl::ErrorKind kind) {
  switch (kind) {
    case ppfl::ErrorKind::kParameter: return PPFL_ERR_PARAMETER;
    case ppfl::ErrorKind::kConfig: return PPFL_ERR_CONFIG;
    case ppfl::ErrorKind::kProtocol: return PPFL_ERR_PROTOCOL;
    case ppfl::ErrorKind::kEncoding: return PPFL_ERR_ENCODING;
    case ppfl::ErrorKind::kIngestion: return PPFL_ERR_INGESTION;
    case ppfl::ErrorKind::kTraining: return PPFL_ERR_TRAINING;
    case ppfl::ErrorKind::kEvaluation: return PPFL_ERR_EVALUATION;
    case ppfl::ErrorKind::kKernel: return PPFL_ERR_KERNEL;
  }
  return PPFL_ERR_INTERNAL;
}

ppfl_status Fail(ppfl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ppfl_status Guard(F&& body) {
  try {
    return body();
  } catch (const ppfl::Error& e) {
    return Fail(StatusOf(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(PPFL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PPFL_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(PPFL_ERR_INTERNAL, "unknown failure");
  }
}

ppfl_status NullArgument(const char* what) {
  return Fail(PPFL_ERR_INVALID_ARGUMENT, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* ppfl_version(void) { return PPFL_VERSION_STRING; }

const char* ppfl_last_error(void) { return g_last_error.c_str(); }

const char* ppfl_status_name(ppfl_status status) {
  switch (status) {
    case PPFL_OK: return "ok";
    case PPFL_ERR_PARAMETER: return "parameter";
    case PPFL_ERR_CONFIG: return "config";
    case PPFL_ERR_PROTOCOL: return "protocol";
    case PPFL_ERR_ENCODING: return "encoding";
    case PPFL_ERR_INGESTION: return "ingestion";
    case PPFL_ERR_TRAINING: return "training";
    case PPFL_ERR_EVALUATION: return "evaluation";
    case PPFL_ERR_KERNEL: return "kernel";
    case PPFL_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case PPFL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int ppfl_exit_code(ppfl_status status) {
  switch (status) {
    case PPFL_OK:
      return 0;
    case PPFL_ERR_PROTOCOL:
    case PPFL_ERR_ENCODING:
    case PPFL_ERR_TRAINING:
    case PPFL_ERR_KERNEL:
    case PPFL_ERR_INTERNAL:
      return 2;
    default:
      return 1;
  }
}

ppfl_status ppfl_config_create(ppfl_config** out) {
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new ppfl_config{};
    return PPFL_OK;
  });
}

void ppfl_config_destroy(ppfl_config* config) { delete config; }

ppfl_status ppfl_config_set(ppfl_config* config, const char* key,
                            const char* value) {
  if (config == nullptr) return NullArgument("config");
  if (key == nullptr || value == nullptr) return NullArgument("key or value");
  return Guard([&] {
    // Apply to a copy so a rejected value leaves the config untouched.
    ppfl::RunConfig next = config->config;
    next.Set(key, value);
    config->config = std::move(next);
    return PPFL_OK;
  });
}

ppfl_status ppfl_config_get(const ppfl_config* config, const char* key,
                            char* buffer, size_t capacity, size_t* needed) {
  if (config == nullptr) return NullArgument("config");
  if (key == nullptr) return NullArgument("key");
  return Guard([&] {
    for (const auto& [k, v] : config->config.Entries()) {
      if (k != key) continue;
      if (needed != nullptr) *needed = v.size() + 1;
      if (buffer == nullptr || capacity < v.size() + 1) {
        return Fail(PPFL_ERR_INVALID_ARGUMENT, "buffer too small for " + k);
      }
      std::memcpy(buffer, v.c_str(), v.size() + 1);
      return PPFL_OK;
    }
    return Fail(PPFL_ERR_CONFIG, std::string("unknown config key '") + key + "'");
  });
}

ppfl_status ppfl_config_load_file(ppfl_config* config, const char* path) {
  if (config == nullptr) return NullArgument("config");
  if (path == nullptr) return NullArgument("path");
  return Guard([&] {
    ppfl::RunConfig next = config->config;
    ppfl::ApplyConfigFile(next, path);
    config->config = std::move(next);
    return PPFL_OK;
  });
}

ppfl_status ppfl_config_validate(const ppfl_config* config) {
  if (config == nullptr) return NullArgument("config");
  return Guard([&] {
    ppfl::ValidateRunConfig(config->config);
    return PPFL_OK;
  });
}

ppfl_status ppfl_run(const ppfl_config* config, ppfl_result** out) {
  if (config == nullptr) return NullArgument("config");
  if (out == nullptr) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    auto* result = new ppfl_result{ppfl::RunSingle(config->config)};
    *out = result;
    return PPFL_OK;
  });
}

void ppfl_result_destroy(ppfl_result* result) { delete result; }

size_t ppfl_result_iterations(const ppfl_result* result) {
  return result == nullptr ? 0 : result->outcome.protocol.models.size();
}

size_t ppfl_result_weight_count(const ppfl_result* result) {
  return result == nullptr ? 0 : result->outcome.features;
}

ppfl_status ppfl_result_weights(const ppfl_result* result, size_t iteration,
                                double* out, size_t capacity) {
  if (result == nullptr) return NullArgument("result");
  if (out == nullptr) return NullArgument("out");
  const auto& models = result->outcome.protocol.models;
  if (iteration >= models.size()) {
    return Fail(PPFL_ERR_INVALID_ARGUMENT,
                "iteration " + std::to_string(iteration) + " out of range");
  }
  const std::vector<double>& w = models[iteration];
  if (capacity < w.size()) {
    return Fail(PPFL_ERR_INVALID_ARGUMENT,
                "need room for " + std::to_string(w.size()) + " weights");
  }
  std::memcpy(out, w.data(), w.size() * sizeof(double));
  return PPFL_OK;
}

ppfl_status ppfl_result_metrics(const ppfl_result* result, size_t iteration,
                                ppfl_metrics* out) {
  if (result == nullptr) return NullArgument("result");
  if (out == nullptr) return NullArgument("out");
  const auto& metrics = result->outcome.metrics;
  if (iteration >= metrics.size()) {
    return Fail(PPFL_ERR_INVALID_ARGUMENT,
                "iteration " + std::to_string(iteration) + " out of range");
  }
  const ppfl::Evaluation& ev = metrics[iteration];
  *out = ppfl_metrics{ev.loss,         ev.mcc,         ev.confusion.tp,
                      ev.confusion.fp, ev.confusion.tn, ev.confusion.fn};
  return PPFL_OK;
}

ppfl_status ppfl_result_timing(const ppfl_result* result, ppfl_timing* out) {
  if (result == nullptr) return NullArgument("result");
  if (out == nullptr) return NullArgument("out");
  const ppfl::TimingReport& t = result->outcome.timing;
  *out = ppfl_timing{t.clients,  t.iterations, t.total,  t.server_per_iteration,
                     t.dh_setup, t.training,   t.encrypt};
  return PPFL_OK;
}

const char* ppfl_result_trace_hash(const ppfl_result* result) {
  return result == nullptr ? "" : result->outcome.protocol.trace_hash.c_str();
}

double ppfl_result_noise_scale(const ppfl_result* result) {
  return result == nullptr ? 0.0 : result->outcome.protocol.noise_scale;
}

ppfl_status ppfl_result_write(const ppfl_result* result, const char* directory) {
  if (result == nullptr) return NullArgument("result");
  if (directory == nullptr) return NullArgument("directory");
  return Guard([&] {
    ppfl::WriteRunArtifacts(result->outcome, directory);
    return PPFL_OK;
  });
}

ppfl_status ppfl_sweep(const ppfl_config* base, const size_t* clients,
                       size_t clients_count, const double* epsilons,
                       size_t epsilons_count, const char* const* modes,
                       size_t modes_count, const char* csv_path,
                       size_t* cells_run, size_t* cells_failed) {
  if (base == nullptr) return NullArgument("base");
  if ((clients_count > 0 && clients == nullptr) ||
      (epsilons_count > 0 && epsilons == nullptr) ||
      (modes_count > 0 && modes == nullptr)) {
    return NullArgument("grid axis");
  }
  return Guard([&] {
    ppfl::SweepGrid grid;
    grid.clients.assign(clients, clients + clients_count);
    grid.epsilons.assign(epsilons, epsilons + epsilons_count);
    for (size_t i = 0; i < modes_count; ++i) {
      if (modes[i] == nullptr) return NullArgument("mode");
      grid.modes.push_back(ppfl::ParseNeighborhoodMode(modes[i]));
    }
    const std::vector<ppfl::SweepCell> cells = ppfl::RunSweep(base->config, grid);
    size_t failed = 0;
    for (const auto& c : cells) failed += c.ok ? 0 : 1;
    if (cells_run != nullptr) *cells_run = cells.size();
    if (cells_failed != nullptr) *cells_failed = failed;
    if (csv_path != nullptr && !cells.empty()) {
      std::ofstream out(csv_path, std::ios::binary);
      if (!out) return Fail(PPFL_ERR_CONFIG, std::string("cannot write ") + csv_path);
      ppfl::WriteSweepCsv(cells, base->config.timing, out);
    }
    return PPFL_OK;
  });
}

}  // extern "C"
