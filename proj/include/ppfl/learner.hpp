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

// L2-regularized logistic regression trained by full-batch gradient descent.
//
//   L(w) = (1/t) sum_k log(1 + exp(-y_k w.x_k)) + (alpha_reg / 2) |w|^2

#ifndef PPFL_LEARNER_HPP_
#define PPFL_LEARNER_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ppfl/data.hpp"

namespace ppfl {

// Features followed by the intercept weight.
using ModelWeights = std::vector<double>;

struct TrainConfig {
  double learning_rate = 0.01;
  size_t local_iterations = 250;
  double alpha_reg = 1.0;
};

void ValidateTrainConfig(const TrainConfig& config);

// Logistic function, evaluated without overflow for any finite z.
double Sigmoid(double z);
// log(1 + exp(z)), stable for large |z|.
double Log1pExp(double z);

double Loss(std::span<const double> w, const Dataset& data, double alpha_reg);
std::vector<double> Gradient(std::span<const double> w, const Dataset& data,
                             double alpha_reg);

// Exactly config.local_iterations descent steps from `start`. Throws
// kTraining naming the step at which a weight became non-finite.
ModelWeights Train(ModelWeights start, const Dataset& data,
                   const TrainConfig& config);

// sigmoid(w.x); lengths must match (kEvaluation otherwise).
double Predict(std::span<const double> w, std::span<const double> features);

inline constexpr double kDecisionThreshold = 0.5;

}  // namespace ppfl

#endif  // PPFL_LEARNER_HPP_
