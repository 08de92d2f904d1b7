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

#include "mresynth/projection.hpp"

#include <cmath>

#include "mresynth/errors.hpp"

namespace mresynth {

namespace {

void check_input(std::span<const double> noisy) {
  if (noisy.empty()) throw DataError("projection input is empty");
  for (double v : noisy) {
    if (!std::isfinite(v)) {
      throw DataError("projection input contains a non-finite entry");
    }
  }
}

}  // namespace

ProjectedAnswer project_full(std::span<const double> noisy) {
  check_input(noisy);
  ProjectedAnswer out;
  out.mode = CoverageMode::kFull;
  out.values.resize(noisy.size());
  double negative_mass = 0.0;
  double positive_sum = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (noisy[i] > 0.0) {
      out.values[i] = noisy[i];
      positive_sum += noisy[i];
    } else {
      negative_mass += -noisy[i];
    }
  }
  if (positive_sum > 0.0) {
    for (double& v : out.values) v /= positive_sum;
  } else {
    const double uniform = 1.0 / static_cast<double>(noisy.size());
    for (double& v : out.values) v = uniform;
  }
  out.distance = negative_mass + std::abs(1.0 - positive_sum);
  return out;
}

ProjectedAnswer project_partial(std::span<const double> noisy) {
  check_input(noisy);
  ProjectedAnswer out;
  out.mode = CoverageMode::kPartial;
  out.values.resize(noisy.size());
  double negative_mass = 0.0;
  double positive_sum = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (noisy[i] > 0.0) {
      out.values[i] = noisy[i];
      positive_sum += noisy[i];
    } else {
      negative_mass += -noisy[i];
    }
  }
  if (positive_sum > 1.0) {
    for (double& v : out.values) v /= positive_sum;
  }
  out.distance = negative_mass + std::max(0.0, positive_sum - 1.0);
  return out;
}

}  // namespace mresynth
