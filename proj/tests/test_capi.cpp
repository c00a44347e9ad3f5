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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "ppfl/ppfl.h"

namespace {

class Config {
 public:
  Config() { EXPECT_EQ(ppfl_config_create(&cfg_), PPFL_OK); }
  ~Config() { ppfl_config_destroy(cfg_); }
  ppfl_config* get() { return cfg_; }
  void Set(const char* k, const char* v) { ASSERT_EQ(ppfl_config_set(cfg_, k, v), PPFL_OK); }

 private:
  ppfl_config* cfg_ = nullptr;
};

void Quick(Config& c) {
  c.Set("clients", "3");
  c.Set("iterations", "2");
  c.Set("local_iters", "5");
  c.Set("group", "toy");
  c.Set("lambda", "128");
  c.Set("synth_rows", "3000");
  c.Set("synth_fraud_rate", "0.02");
  c.Set("synth_features", "4");
  c.Set("sample_size", "100");
}

TEST(CApiTest, StatusNamesAndExitCodes) {
  EXPECT_STREQ(ppfl_status_name(PPFL_OK), "ok");
  EXPECT_STREQ(ppfl_status_name(PPFL_ERR_CONFIG), "config");
  EXPECT_EQ(ppfl_exit_code(PPFL_OK), 0);
  EXPECT_EQ(ppfl_exit_code(PPFL_ERR_CONFIG), 1);
  EXPECT_EQ(ppfl_exit_code(PPFL_ERR_PARAMETER), 1);
  EXPECT_EQ(ppfl_exit_code(PPFL_ERR_PROTOCOL), 2);
  EXPECT_NE(std::string(ppfl_version()), "");
}

TEST(CApiTest, NullArgumentsAreRejected) {
  EXPECT_EQ(ppfl_config_create(nullptr), PPFL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ppfl_config_set(nullptr, "clients", "1"), PPFL_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(ppfl_last_error()).find("null"), std::string::npos);
  ppfl_result* r = nullptr;
  EXPECT_EQ(ppfl_run(nullptr, &r), PPFL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ppfl_result_iterations(nullptr), 0u);
  ppfl_config_destroy(nullptr);
  ppfl_result_destroy(nullptr);
}

TEST(CApiTest, SetGetAndErrors) {
  Config c;
  c.Set("clients", "42");
  char buf[8];
  size_t needed = 0;
  ASSERT_EQ(ppfl_config_get(c.get(), "clients", buf, sizeof(buf), &needed), PPFL_OK);
  EXPECT_STREQ(buf, "42");
  EXPECT_EQ(needed, 3u);
  EXPECT_EQ(ppfl_config_get(c.get(), "out", nullptr, 0, &needed), PPFL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(needed, 1u);
  EXPECT_EQ(ppfl_config_set(c.get(), "clients", "many"), PPFL_ERR_CONFIG);
  EXPECT_NE(std::string(ppfl_last_error()).find("clients"), std::string::npos);
  // The rejected value left the old one in place.
  ppfl_config_get(c.get(), "clients", buf, sizeof(buf), &needed);
  EXPECT_STREQ(buf, "42");
  EXPECT_EQ(ppfl_config_set(c.get(), "nope", "1"), PPFL_ERR_CONFIG);
  EXPECT_EQ(ppfl_config_load_file(c.get(), "/nonexistent.cfg"), PPFL_ERR_CONFIG);
}

TEST(CApiTest, ValidationReportsEpsilon) {
  Config c;
  Quick(c);
  EXPECT_EQ(ppfl_config_validate(c.get()), PPFL_OK);
  c.Set("epsilon", "-1");
  EXPECT_EQ(ppfl_config_validate(c.get()), PPFL_ERR_CONFIG);
  EXPECT_NE(std::string(ppfl_last_error()).find("epsilon"), std::string::npos);
  ppfl_result* r = nullptr;
  EXPECT_EQ(ppfl_run(c.get(), &r), PPFL_ERR_CONFIG);
  EXPECT_EQ(r, nullptr);
}

TEST(CApiTest, RunAndInspect) {
  Config c;
  Quick(c);
  c.Set("epsilon", "0.01");
  ppfl_result* r = nullptr;
  ASSERT_EQ(ppfl_run(c.get(), &r), PPFL_OK) << ppfl_last_error();
  EXPECT_EQ(ppfl_result_iterations(r), 2u);
  const size_t m = ppfl_result_weight_count(r);
  EXPECT_EQ(m, 5u);
  std::vector<double> w(m);
  EXPECT_EQ(ppfl_result_weights(r, 1, w.data(), w.size()), PPFL_OK);
  for (double x : w) EXPECT_TRUE(std::isfinite(x));
  EXPECT_EQ(ppfl_result_weights(r, 2, w.data(), w.size()), PPFL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ppfl_result_weights(r, 0, w.data(), 1), PPFL_ERR_INVALID_ARGUMENT);
  ppfl_metrics metrics{};
  EXPECT_EQ(ppfl_result_metrics(r, 1, &metrics), PPFL_OK);
  EXPECT_GT(metrics.tp + metrics.fp + metrics.tn + metrics.fn, 0u);
  ppfl_timing timing{};
  EXPECT_EQ(ppfl_result_timing(r, &timing), PPFL_OK);
  EXPECT_EQ(timing.clients, 3u);
  EXPECT_DOUBLE_EQ(timing.training_ms, 1.0);
  EXPECT_EQ(std::string(ppfl_result_trace_hash(r)).size(), 64u);
  EXPECT_NEAR(ppfl_result_noise_scale(r), 2.0 / (3 * 100 * 1.0 * 0.01), 1e-12);
  const auto dir = std::filesystem::temp_directory_path() / "ppfl_capi_out";
  std::filesystem::remove_all(dir);
  EXPECT_EQ(ppfl_result_write(r, dir.c_str()), PPFL_OK);
  EXPECT_TRUE(std::filesystem::exists(dir / "metrics.csv"));
  ppfl_result_destroy(r);
}

TEST(CApiTest, ProtocolAbortMapsToExitTwo) {
  Config c;
  Quick(c);
  c.Set("weight_bound", "1e-12");
  ppfl_result* r = nullptr;
  const ppfl_status st = ppfl_run(c.get(), &r);
  EXPECT_EQ(st, PPFL_ERR_ENCODING) << ppfl_last_error();
  EXPECT_EQ(ppfl_exit_code(st), 2);
}

TEST(CApiTest, SweepCountsCells) {
  Config c;
  Quick(c);
  c.Set("iterations", "1");
  size_t run = 99, failed = 99;
  EXPECT_EQ(ppfl_sweep(c.get(), nullptr, 0, nullptr, 0, nullptr, 0, nullptr, &run, &failed),
            PPFL_OK);
  EXPECT_EQ(run, 0u);
  const size_t clients[] = {2, 3};
  const double eps[] = {INFINITY, 0.0};
  const char* modes[] = {"logn"};
  const auto csv = std::filesystem::temp_directory_path() / "ppfl_capi_sweep.csv";
  EXPECT_EQ(ppfl_sweep(c.get(), clients, 2, eps, 2, modes, 1, csv.c_str(), &run, &failed),
            PPFL_OK);
  EXPECT_EQ(run, 4u);
  EXPECT_EQ(failed, 2u);
  EXPECT_TRUE(std::filesystem::exists(csv));
  const char* bad_modes[] = {"ring"};
  EXPECT_EQ(ppfl_sweep(c.get(), clients, 1, nullptr, 0, bad_modes, 1, nullptr, &run, &failed),
            PPFL_ERR_CONFIG);
}

}  // namespace
