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

#ifndef PPFL_ERROR_HPP_
#define PPFL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ppfl {

// Broad failure categories. The C API maps each onto a status code and the
// CLI onto an exit code.
enum class ErrorKind {
  kParameter,   // bad group / codec / privacy parameters
  kConfig,      // run configuration failed validation
  kProtocol,    // protocol invariant violated at runtime
  kEncoding,    // fixed-point magnitude overflow
  kIngestion,   // CSV could not be parsed
  kTraining,    // non-finite weights during gradient descent
  kEvaluation,  // metric preconditions violated
  kKernel,      // simulation kernel misuse or livelock
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ppfl

#endif  // PPFL_ERROR_HPP_
