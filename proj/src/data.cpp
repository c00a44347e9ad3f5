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

#include "ppfl/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "ppfl/error.hpp"
#include "ppfl/rng.hpp"

namespace ppfl {
namespace {

[[noreturn]] void Fail(size_t line, const std::string& what) {
  throw Error(ErrorKind::kIngestion,
              "line " + std::to_string(line) + ": " + what);
}

// Splits one RFC 4180 record. Quoted fields may contain commas and doubled
// quotes; embedded newlines are not supported.
std::vector<std::string> SplitRecord(std::string_view line, size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) Fail(line_no, "unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

std::optional<double> ParseDouble(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

bool IsPrincipalComponent(const std::string& name) {
  return name.size() > 1 && name[0] == 'V' &&
         std::all_of(name.begin() + 1, name.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

size_t Dataset::positives() const {
  return static_cast<size_t>(
      std::count_if(labels.begin(), labels.end(), [](double y) { return y > 0; }));
}

Dataset SelectRows(const Dataset& source, std::span<const size_t> indices) {
  Dataset out;
  out.feature_names = source.feature_names;
  out.cols = source.cols;
  out.rows = indices.size();
  out.features.resize(out.rows * out.cols);
  out.labels.resize(out.rows);
  for (size_t r = 0; r < indices.size(); ++r) {
    const auto src = source.row(indices[r]);
    std::copy(src.begin(), src.end(), out.features.begin() + r * out.cols);
    out.labels[r] = source.labels[indices[r]];
  }
  return out;
}

Dataset ParseCsv(std::istream& in, const CsvOptions& options) {
  std::string line;
  size_t line_no = 1;
  if (!std::getline(in, line)) Fail(line_no, "missing header");
  const std::vector<std::string> header = SplitRecord(line, line_no);

  std::vector<size_t> keep;  // source column per output feature
  std::optional<size_t> class_col;
  std::optional<size_t> amount_col;
  bool has_time = false;
  Dataset ds;
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "Class") {
      class_col = c;
    } else if (name == "Time") {
      has_time = true;
    } else if (name == "Amount" || IsPrincipalComponent(name)) {
      if (name == "Amount") amount_col = keep.size();
      keep.push_back(c);
      ds.feature_names.push_back(name);
    }
  }
  if (!class_col) Fail(line_no, "missing Class column");
  if (!amount_col) Fail(line_no, "missing Amount column");
  if (!has_time) Fail(line_no, "missing Time column");
  if (keep.size() < 2) Fail(line_no, "no V-columns found");
  ds.feature_names.push_back("intercept");
  ds.cols = keep.size() + 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = SplitRecord(line, line_no);
    if (fields.size() != header.size()) {
      Fail(line_no, "expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(fields.size()));
    }
    for (size_t c : keep) {
      const auto v = ParseDouble(fields[c]);
      if (!v) Fail(line_no, "unparseable value '" + fields[c] + "' in column " + header[c]);
      ds.features.push_back(*v);
    }
    ds.features.push_back(1.0);
    const auto label = ParseDouble(fields[*class_col]);
    if (!label || (*label != 0.0 && *label != 1.0)) {
      Fail(line_no, "Class must be 0 or 1, got '" + fields[*class_col] + "'");
    }
    ds.labels.push_back(*label == 1.0 ? 1.0 : -1.0);
    ++ds.rows;
  }

  if (options.standardize_amount && ds.rows > 1) {
    const size_t col = *amount_col;
    double mean = 0.0;
    for (size_t r = 0; r < ds.rows; ++r) mean += ds.features[r * ds.cols + col];
    mean /= static_cast<double>(ds.rows);
    double var = 0.0;
    for (size_t r = 0; r < ds.rows; ++r) {
      const double d = ds.features[r * ds.cols + col] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(ds.rows - 1));
    if (sd > 0.0) {
      for (size_t r = 0; r < ds.rows; ++r) {
        double& x = ds.features[r * ds.cols + col];
        x = (x - mean) / sd;
      }
    }
  }
  return ds;
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIngestion, "cannot open " + path.string());
  }
  return ParseCsv(in, options);
}

DataSplit SplitDataset(const Dataset& ds, const SplitConfig& config) {
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "train fraction must be in (0, 1)");
  }
  if (ds.empty()) throw Error(ErrorKind::kConfig, "cannot split empty dataset");
  std::vector<size_t> order(ds.rows);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(DeriveSeed(config.seed, Stream::kSplit));
  // Fisher-Yates with the portable bounded draw.
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  const auto train_count = static_cast<size_t>(
      std::floor(config.train_fraction * static_cast<double>(ds.rows)));
  DataSplit split;
  split.train_rows.assign(order.begin(), order.begin() + train_count);
  split.test_rows.assign(order.begin() + train_count, order.end());
  std::sort(split.train_rows.begin(), split.train_rows.end());
  std::sort(split.test_rows.begin(), split.test_rows.end());
  split.train = SelectRows(ds, split.train_rows);
  split.test = SelectRows(ds, split.test_rows);
  return split;
}

size_t LocalSampleSize(const Dataset& train, const SampleOptions& options) {
  if (train.rows >= options.sample_size) return options.sample_size;
  if (!options.allow_small) {
    throw Error(ErrorKind::kConfig,
                "train partition has " + std::to_string(train.rows) +
                    " rows, fewer than the local sample size " +
                    std::to_string(options.sample_size));
  }
  return train.rows;
}

LocalDataset SampleLocal(const Dataset& train, uint32_t client,
                         uint32_t iteration, uint64_t run_seed,
                         const SampleOptions& options) {
  const size_t size = LocalSampleSize(train, options);
  LocalDataset local;
  local.client = client;
  local.iteration = iteration;
  if (size == train.rows) {
    local.indices.resize(train.rows);
    std::iota(local.indices.begin(), local.indices.end(), size_t{0});
  } else {
    // Partial Fisher-Yates over a virtual identity permutation; the swaps
    // are kept in a small map so the cost is O(size), not O(rows).
    Rng rng(DeriveSeed(run_seed, Stream::kSample, {client, iteration}));
    std::unordered_map<size_t, size_t> swapped;
    auto at = [&](size_t i) {
      const auto it = swapped.find(i);
      return it == swapped.end() ? i : it->second;
    };
    local.indices.reserve(size);
    for (size_t i = 0; i < size; ++i) {
      const size_t j = i + rng.Below(train.rows - i);
      const size_t vi = at(i);
      const size_t vj = at(j);
      swapped[j] = vi;
      swapped[i] = vj;
      local.indices.push_back(vj);
    }
  }
  local.data = SelectRows(train, local.indices);
  return local;
}

Dataset Synth(size_t rows, double fraud_rate, size_t m, uint64_t seed,
              double separation) {
  if (!(fraud_rate > 0.0 && fraud_rate < 1.0)) {
    throw Error(ErrorKind::kConfig, "fraud rate must be in (0, 1)");
  }
  if (m == 0) throw Error(ErrorKind::kConfig, "synthetic data needs m >= 1");
  Rng rng(DeriveSeed(seed, Stream::kSynth));
  Dataset ds;
  for (size_t j = 0; j < m; ++j) ds.feature_names.push_back("X" + std::to_string(j + 1));
  ds.feature_names.push_back("intercept");
  ds.rows = rows;
  ds.cols = m + 1;
  ds.features.reserve(rows * ds.cols);
  ds.labels.reserve(rows);
  for (size_t r = 0; r < rows; ++r) {
    const bool fraud = rng.Uniform01() < fraud_rate;
    for (size_t j = 0; j < m; ++j) {
      ds.features.push_back(rng.Normal() + (fraud ? separation : 0.0));
    }
    ds.features.push_back(1.0);
    ds.labels.push_back(fraud ? 1.0 : -1.0);
  }
  return ds;
}

}  // namespace ppfl
