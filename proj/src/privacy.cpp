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

#include "ppfl/privacy.hpp"

#include <cmath>
#include <string>

#include "ppfl/error.hpp"

namespace ppfl {

bool PrivacyConfig::noise_enabled() const { return std::isfinite(epsilon); }

void ValidatePrivacyConfig(const PrivacyConfig& config) {
  if (!(config.epsilon > 0.0)) {
    throw Error(ErrorKind::kConfig,
                "epsilon must be > 0, got " + std::to_string(config.epsilon));
  }
  if (config.n == 0) throw Error(ErrorKind::kConfig, "party count must be > 0");
  if (config.k == 0) {
    throw Error(ErrorKind::kConfig, "local dataset size must be > 0");
  }
  if (!(config.alpha_reg > 0.0) || !std::isfinite(config.alpha_reg)) {
    throw Error(ErrorKind::kConfig,
                "alpha_reg must be > 0, got " + std::to_string(config.alpha_reg));
  }
}

double Sensitivity(const PrivacyConfig& config) {
  ValidatePrivacyConfig(config);
  return 2.0 / (static_cast<double>(config.n) * static_cast<double>(config.k) *
                config.alpha_reg);
}

double NoiseScale(const PrivacyConfig& config) {
  const double delta = Sensitivity(config);
  if (!config.noise_enabled()) return 0.0;
  return delta / config.epsilon;
}

double LaplaceFromUniform(double scale, double u) {
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -scale * sign * std::log1p(-2.0 * std::fabs(centered));
}

double LaplaceSample(double scale, Rng& rng) {
  double u;
  do {
    u = rng.Uniform01();
  } while (u == 0.0);  // log(0) at the lower edge
  return LaplaceFromUniform(scale, u);
}

NoiseVector MakeNoise(const PrivacyConfig& config, size_t weight_count,
                      Rng& rng, uint32_t client_id, uint32_t iteration) {
  const double scale = NoiseScale(config);
  NoiseVector noise;
  noise.client_id = client_id;
  noise.iteration = iteration;
  noise.values.assign(weight_count, 0.0);
  if (scale > 0.0) {
    for (double& v : noise.values) v = LaplaceSample(scale, rng);
  }
  return noise;
}

}  // namespace ppfl
