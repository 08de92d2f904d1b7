// Copyright 2026 The mresynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MRESYNTH_ERRORS_HPP_
#define MRESYNTH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mresynth {

// Exit codes used by the CLI; library errors carry the class they map to.
enum class ErrorClass : int {
  kConfig = 2,
  kData = 3,
  kBudget = 4,
  kInternal = 5,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ErrorClass error_class() const { return ErrorClass::kInternal; }
};

// Invalid schema, parameters, thresholds, or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const override { return ErrorClass::kConfig; }
};

// Malformed or out-of-domain input data (CSV rows, labels, indices).
class DataError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const override { return ErrorClass::kData; }
};

// Privacy budget violation; aborts the pipeline.
class BudgetError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const override { return ErrorClass::kBudget; }
};

}  // namespace mresynth

#endif  // MRESYNTH_ERRORS_HPP_
