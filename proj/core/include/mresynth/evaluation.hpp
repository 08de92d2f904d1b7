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

#ifndef MRESYNTH_EVALUATION_HPP_
#define MRESYNTH_EVALUATION_HPP_

#include <cstdint>
#include <vector>

#include "mresynth/synthesis.hpp"

namespace mresynth {

struct EvalOptions {
  std::uint32_t repetitions = 50;
  // A group whose synthetic row count deviates from truth by more than
  // this gets the maximal error of 2.
  double bias_threshold = 250.0;
  unsigned threads = 0;
};

struct GroupEval {
  GroupKey key;
  double error = 0.0;  // in [0, 2]
  bool penalized = false;
  std::uint64_t synthetic_count = 0;
  std::uint64_t truth_count = 0;
};

struct EvalReport {
  std::vector<GroupEval> groups;  // sorted by group key
  double overall = 0.0;           // mean of group errors
  std::uint32_t repetitions = 0;
  std::uint64_t seed = 0;
};

// Contest error: per group, the average over `repetitions` random
// unordered attribute pairs of the L1 distance between the two sides'
// empirical 2-way marginal distributions (each side normalized by its own
// group count; an empty side contributes the all-zero vector). Pairs are
// drawn once per group from a stream derived from the seed and applied to
// both sides. Groups missing on either side count as empty histograms.
EvalReport contest_error(const GroupedData& synthetic,
                         const GroupedData& truth, const EvalOptions& options,
                         std::uint64_t seed);

}  // namespace mresynth

#endif  // MRESYNTH_EVALUATION_HPP_
