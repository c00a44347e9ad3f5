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

#include "ppfl/rng.hpp"

#include <cmath>
#include <numbers>

#include "ppfl/error.hpp"

namespace ppfl {

uint64_t Rng::Below(uint64_t bound) {
  if (bound == 0) return engine_();
  // Reject the low residue class that would bias x % bound.
  const uint64_t threshold = (0 - bound) % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x < threshold);
  return x % bound;
}

double Rng::Normal() {
  double u1;
  do {
    u1 = Uniform01();
  } while (u1 == 0.0);
  const double u2 = Uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kProtocol: return "protocol error";
    case ErrorKind::kEncoding: return "encoding error";
    case ErrorKind::kIngestion: return "ingestion error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kEvaluation: return "evaluation error";
    case ErrorKind::kKernel: return "kernel error";
  }
  return "error";
}

}  // namespace ppfl
