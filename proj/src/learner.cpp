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

#include "ppfl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppfl/error.hpp"

namespace ppfl {
namespace {

void CheckShape(std::span<const double> w, const Dataset& data) {
  if (data.empty()) throw Error(ErrorKind::kEvaluation, "empty dataset");
  if (w.size() != data.cols) {
    throw Error(ErrorKind::kEvaluation,
                "weight length " + std::to_string(w.size()) +
                    " != feature width " + std::to_string(data.cols));
  }
}

double Dot(std::span<const double> a, const double* b) {
  double s = 0.0;
  for (size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Gradient without argument checks; `out` has the weight length.
void GradientInto(std::span<const double> w, const Dataset& data,
                  double alpha_reg, std::vector<double>& out) {
  const size_t cols = data.cols;
  std::fill(out.begin(), out.end(), 0.0);
  const double* x = data.features.data();
  for (size_t r = 0; r < data.rows; ++r, x += cols) {
    const double y = data.labels[r];
    const double coef = -y * Sigmoid(-y * Dot(w, x));
    for (size_t j = 0; j < cols; ++j) out[j] += coef * x[j];
  }
  const double inv_t = 1.0 / static_cast<double>(data.rows);
  for (size_t j = 0; j < cols; ++j) out[j] = out[j] * inv_t + alpha_reg * w[j];
}

}  // namespace

void ValidateTrainConfig(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw Error(ErrorKind::kConfig, "learning rate must be > 0");
  }
  if (config.local_iterations == 0) {
    throw Error(ErrorKind::kConfig, "local iterations must be >= 1");
  }
  if (!(config.alpha_reg >= 0.0) || !std::isfinite(config.alpha_reg)) {
    throw Error(ErrorKind::kConfig, "alpha_reg must be >= 0");
  }
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Log1pExp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double Loss(std::span<const double> w, const Dataset& data, double alpha_reg) {
  CheckShape(w, data);
  double total = 0.0;
  for (size_t r = 0; r < data.rows; ++r) {
    total += Log1pExp(-data.labels[r] * Dot(w, data.row(r).data()));
  }
  double sq = 0.0;
  for (double v : w) sq += v * v;
  return total / static_cast<double>(data.rows) + 0.5 * alpha_reg * sq;
}

std::vector<double> Gradient(std::span<const double> w, const Dataset& data,
                             double alpha_reg) {
  CheckShape(w, data);
  std::vector<double> g(w.size());
  GradientInto(w, data, alpha_reg, g);
  return g;
}

ModelWeights Train(ModelWeights start, const Dataset& data,
                   const TrainConfig& config) {
  if (config.local_iterations == 0) return start;
  ValidateTrainConfig(config);
  CheckShape(start, data);
  std::vector<double> g(start.size());
  for (size_t step = 0; step < config.local_iterations; ++step) {
    GradientInto(start, data, config.alpha_reg, g);
    bool finite = true;
    for (size_t j = 0; j < start.size(); ++j) {
      start[j] -= config.learning_rate * g[j];
      finite = finite && std::isfinite(start[j]);
    }
    if (!finite) {
      throw Error(ErrorKind::kTraining,
                  "non-finite weight at local step " + std::to_string(step + 1));
    }
  }
  return start;
}

double Predict(std::span<const double> w, std::span<const double> features) {
  if (w.size() != features.size()) {
    throw Error(ErrorKind::kEvaluation,
                "weight length " + std::to_string(w.size()) +
                    " != feature length " + std::to_string(features.size()));
  }
  return Sigmoid(Dot(w, features.data()));
}

}  // namespace ppfl
