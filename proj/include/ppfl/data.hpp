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

#ifndef PPFL_DATA_HPP_
#define PPFL_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace ppfl {

inline constexpr size_t kDefaultLocalSampleSize = 1000;

// Row-major feature matrix with a trailing all-ones intercept column and
// labels in {-1, +1} (+1 = fraud).
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<double> features;
  std::vector<double> labels;
  size_t rows = 0;
  size_t cols = 0;

  std::span<const double> row(size_t r) const {
    return {features.data() + r * cols, cols};
  }
  size_t positives() const;
  bool empty() const { return rows == 0; }
};

// Copies the given rows (by index into `source`) into a new dataset.
Dataset SelectRows(const Dataset& source, std::span<const size_t> indices);

struct CsvOptions {
  // z-score the Amount column (ablation only; the default keeps raw values).
  bool standardize_amount = false;
};

// Reads a header-first RFC 4180 CSV with Time, V*, Amount and Class columns.
// Time is dropped, V-columns and Amount are kept in file order, an intercept
// column is appended and Class {0,1} maps to {-1,+1}. Throws kIngestion with
// the 1-based line number on malformed input.
Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset ParseCsv(std::istream& in, const CsvOptions& options = {});

struct SplitConfig {
  double train_fraction = 0.75;
  uint64_t seed = 0;
};

// Disjoint, exhaustive partition. `train_rows` / `test_rows` hold the
// original row indices.
struct DataSplit {
  Dataset train;
  Dataset test;
  std::vector<size_t> train_rows;
  std::vector<size_t> test_rows;
};

DataSplit SplitDataset(const Dataset& ds, const SplitConfig& config);

// One client's training rows for one protocol iteration.
struct LocalDataset {
  Dataset data;
  std::vector<size_t> indices;  // into the train partition
  uint32_t client = 0;
  uint32_t iteration = 0;
};

struct SampleOptions {
  size_t sample_size = kDefaultLocalSampleSize;
  // Use the full partition when it is smaller than sample_size.
  bool allow_small = false;
};

// Draws sample_size distinct rows seeded by (run_seed, client, iteration).
LocalDataset SampleLocal(const Dataset& train, uint32_t client,
                         uint32_t iteration, uint64_t run_seed,
                         const SampleOptions& options = {});

// Effective per-client dataset size, the k of the sensitivity bound.
size_t LocalSampleSize(const Dataset& train, const SampleOptions& options);

// Two class-conditional unit-variance Gaussians whose means differ by
// `separation` in every feature; fraud prevalence `fraud_rate`; m features
// plus intercept.
Dataset Synth(size_t rows, double fraud_rate, size_t m, uint64_t seed,
              double separation = 2.0);

}  // namespace ppfl

#endif  // PPFL_DATA_HPP_
