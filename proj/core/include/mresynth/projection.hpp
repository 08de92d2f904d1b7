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

#ifndef MRESYNTH_PROJECTION_HPP_
#define MRESYNTH_PROJECTION_HPP_

#include <span>
#include <vector>

namespace mresynth {

enum class CoverageMode {
  kFull,     // constraint: sum(y) = 1, y >= 0
  kPartial,  // constraint: sum(y) <= 1, y >= 0
};

struct ProjectedAnswer {
  std::vector<double> values;
  double distance = 0.0;  // achieved L1 distance to the input
  CoverageMode mode = CoverageMode::kFull;
};

// L1-closest feasible answer under sum(y) = 1, y >= 0. Negatives are
// clipped, the positive part rescaled proportionally; an all-nonpositive
// input falls back to uniform. The achieved distance attains the LP
// optimum sum(|neg|) + |1 - sum(pos)|; ties are broken by the proportional
// rescale, which preserves the input's shape.
ProjectedAnswer project_full(std::span<const double> noisy);

// L1-closest feasible answer under sum(y) <= 1, y >= 0. Negatives are
// clipped; the clipped vector is rescaled only when its sum exceeds 1.
// Achieved distance: sum(|neg|) + max(0, sum(pos) - 1).
ProjectedAnswer project_partial(std::span<const double> noisy);

}  // namespace mresynth

#endif  // MRESYNTH_PROJECTION_HPP_
