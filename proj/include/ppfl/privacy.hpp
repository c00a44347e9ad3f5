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

// Multi-party sensitivity and per-weight Laplace output perturbation.

#ifndef PPFL_PRIVACY_HPP_
#define PPFL_PRIVACY_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ppfl/rng.hpp"

namespace ppfl {

// An infinite epsilon means "noise disabled" (scale zero).
struct PrivacyConfig {
  double epsilon = 0.0;
  size_t n = 0;          // party count
  size_t k = 0;          // smallest local dataset size
  double alpha_reg = 0.0;

  bool noise_enabled() const;
};

// Throws kConfig unless every field is strictly positive.
void ValidatePrivacyConfig(const PrivacyConfig& config);

// Delta = 2 / (n k alpha_reg).
double Sensitivity(const PrivacyConfig& config);

// b = Delta / epsilon; zero when noise is disabled.
double NoiseScale(const PrivacyConfig& config);

// Inverse CDF of Laplace(0, scale) at u in (0, 1).
double LaplaceFromUniform(double scale, double u);

double LaplaceSample(double scale, Rng& rng);

struct NoiseVector {
  std::vector<double> values;
  uint32_t client_id = 0;
  uint32_t iteration = 0;
};

NoiseVector MakeNoise(const PrivacyConfig& config, size_t weight_count,
                      Rng& rng, uint32_t client_id = 0, uint32_t iteration = 0);

}  // namespace ppfl

#endif  // PPFL_PRIVACY_HPP_
