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

#ifndef MRESYNTH_ESTIMATION_HPP_
#define MRESYNTH_ESTIMATION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mresynth/histogram.hpp"
#include "mresynth/projection.hpp"
#include "mresynth/rng.hpp"
#include "mresynth/workload.hpp"

namespace mresynth {

struct UpdateSchedule {
  enum class Mode {
    kRoundRobin,    // deterministic cycle over the workload
    kSeededRandom,  // uniform query choice from a seeded stream
  };

  Mode mode = Mode::kRoundRobin;
  std::uint32_t iterations = 1;  // T >= 1
};

struct UpdateOptions {
  // When true, mass that the update rule would place outside the prior's
  // original support is redistributed within it (and the result
  // renormalized); estimation then never grows the support.
  bool support_restriction = true;
  // In unrestricted mode the equal-split cases may create new support
  // cells; growing past this cap is an error.
  std::uint64_t max_support_cells = 5'000'000;
  // Masses below this threshold are pruned after each update.
  double prune_threshold = 1e-15;
  bool record_trace = true;
};

struct IterationRecord {
  std::size_t query_index = 0;
  double pre_update_loss = 0.0;  // global L1 loss ||W q - y~||_1 before the step
  double post_update_kl = 0.0;   // KL(q || original prior) after the step
};

using EstimationTrace = std::vector<IterationRecord>;

// Minimum-relative-entropy update of `prior` to satisfy the query's target
// marginal exactly. For each marginal row: positive prior row mass is
// rescaled to the target (case 1); a zero-mass row splits its target
// equally over the row's cells (case 2). `restrict_support`, when given,
// confines equal-split mass to that distribution's support. Target must be
// nonnegative and sum to 1.
DensityDistribution update_distribution(
    const DensityDistribution& prior, const MarginalQuery& query,
    std::span<const double> target, const UpdateOptions& options = {},
    const DensityDistribution* restrict_support = nullptr);

// Partial-coverage variant: only `rows` (marginal cells of `query`, sorted
// ascending) are constrained, with one target entry per row and total at
// most 1. Uncovered cells keep the prior's shape scaled to the residual
// mass (case 3) or split it equally when the prior has none there (case 4).
DensityDistribution update_distribution(
    const DensityDistribution& prior, const MarginalQuery& query,
    std::span<const std::uint64_t> rows, std::span<const double> row_targets,
    const UpdateOptions& options = {},
    const DensityDistribution* restrict_support = nullptr);

struct IdeResult {
  DensityDistribution distribution;
  EstimationTrace trace;
};

// Iterative distribution estimation: starting from the prior, repeatedly
// pick a query per the schedule, project its noisy answer onto the
// feasible set, and apply the update, treating the result as the next
// prior. All iterations stay on the prior's support when restriction is
// on. `schedule_rng` is required for the seeded-random mode.
IdeResult ide(const Workload& workload,
              const std::vector<MarginalVector>& noisy_answers,
              const DensityDistribution& prior, const UpdateSchedule& schedule,
              const UpdateOptions& options = {},
              RngStream* schedule_rng = nullptr);

// Sum over queries of ||evaluate_marginal(q) - y~||_1.
double workload_l1_loss(const DensityDistribution& dist,
                        const Workload& workload,
                        const std::vector<MarginalVector>& noisy_answers);

}  // namespace mresynth

#endif  // MRESYNTH_ESTIMATION_HPP_
