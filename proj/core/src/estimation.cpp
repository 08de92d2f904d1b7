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

#include "mresynth/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mresynth/errors.hpp"

namespace mresynth {

namespace {

constexpr double kFeasibilityTolerance = 1e-9;

struct RowView {
  // Maps a marginal cell to its position in the target vector, or npos when
  // the cell's row is not part of the partial workload.
  static constexpr std::size_t kNotCovered = static_cast<std::size_t>(-1);

  bool full_coverage = false;
  std::span<const std::uint64_t> rows;  // sorted, used when not full

  std::size_t position(std::uint64_t marginal_cell) const {
    if (full_coverage) return static_cast<std::size_t>(marginal_cell);
    auto it = std::lower_bound(rows.begin(), rows.end(), marginal_cell);
    if (it == rows.end() || *it != marginal_cell) return kNotCovered;
    return static_cast<std::size_t>(it - rows.begin());
  }
};

std::vector<double> validate_targets(std::span<const double> targets,
                                     bool full_coverage) {
  std::vector<double> clean(targets.begin(), targets.end());
  double sum = 0.0;
  for (double& t : clean) {
    if (!std::isfinite(t) || t < -kFeasibilityTolerance) {
      throw DataError("update target must be nonnegative and finite");
    }
    if (t < 0.0) t = 0.0;
    sum += t;
  }
  if (full_coverage) {
    if (std::abs(sum - 1.0) > kFeasibilityTolerance) {
      throw DataError("full-coverage update target must sum to 1");
    }
  } else if (sum > 1.0 + kFeasibilityTolerance) {
    throw DataError("partial-coverage update target must sum to at most 1");
  }
  return clean;
}

DensityDistribution apply_update(const DensityDistribution& prior,
                                 const MarginalQuery& query,
                                 const RowView& rows,
                                 std::span<const double> raw_targets,
                                 const UpdateOptions& options,
                                 const DensityDistribution* restrict_support) {
  if (!same_schema(prior.schema(), query.schema())) {
    throw DataError("update query does not match the distribution's schema");
  }
  const std::vector<double> targets =
      validate_targets(raw_targets, rows.full_coverage);
  double target_sum = 0.0;
  for (double t : targets) target_sum += t;
  const double residual = std::max(0.0, 1.0 - target_sum);

  // Pass 1: prior mass per constrained row, plus the uncovered remainder.
  std::vector<double> row_mass(targets.size(), 0.0);
  double uncovered_mass = 0.0;
  for (const auto& [cell, mass] : prior.entries()) {
    const std::size_t pos = rows.position(query.marginal_index(cell));
    if (pos == RowView::kNotCovered) {
      uncovered_mass += mass;
    } else {
      row_mass[pos] += mass;
    }
  }

  // Pass 2: rescale covered rows (case 1) and the uncovered remainder
  // (case 3) in one sweep over the sorted support.
  std::vector<DensityDistribution::Entry> out;
  out.reserve(prior.support_size());
  const double residual_scale =
      uncovered_mass > 0.0 ? residual / uncovered_mass : 0.0;
  for (const auto& [cell, mass] : prior.entries()) {
    const std::size_t pos = rows.position(query.marginal_index(cell));
    double updated;
    if (pos == RowView::kNotCovered) {
      updated = mass * residual_scale;
    } else {
      updated = mass * (targets[pos] / row_mass[pos]);
    }
    if (updated > 0.0) out.emplace_back(cell, updated);
  }

  // Equal-split cases place mass on rows (case 2) or the uncovered region
  // (case 4) where the prior has none.
  std::vector<std::size_t> zero_rows;
  for (std::size_t pos = 0; pos < targets.size(); ++pos) {
    if (row_mass[pos] == 0.0 && targets[pos] > 0.0) zero_rows.push_back(pos);
  }
  const bool need_case4 =
      !rows.full_coverage && residual > 0.0 && uncovered_mass == 0.0;

  bool mass_dropped = false;
  if (!zero_rows.empty() || need_case4) {
    if (restrict_support != nullptr) {
      // Bucket the restriction support's cells by the row that would
      // receive equal-split mass.
      std::unordered_map<std::size_t, std::vector<CellIndex>> row_cells;
      std::vector<CellIndex> uncovered_cells;
      for (const auto& [cell, mass] : restrict_support->entries()) {
        const std::size_t pos = rows.position(query.marginal_index(cell));
        if (pos == RowView::kNotCovered) {
          if (need_case4) uncovered_cells.push_back(cell);
        } else if (row_mass[pos] == 0.0 && targets[pos] > 0.0) {
          row_cells[pos].push_back(cell);
        }
      }
      for (std::size_t pos : zero_rows) {
        auto it = row_cells.find(pos);
        if (it == row_cells.end() || it->second.empty()) {
          mass_dropped = true;
          continue;
        }
        const double share =
            targets[pos] / static_cast<double>(it->second.size());
        for (CellIndex cell : it->second) out.emplace_back(cell, share);
      }
      if (need_case4) {
        if (uncovered_cells.empty()) {
          mass_dropped = true;
        } else {
          const double share =
              residual / static_cast<double>(uncovered_cells.size());
          for (CellIndex cell : uncovered_cells) out.emplace_back(cell, share);
        }
      }
    } else {
      const std::uint64_t block = query.block_size();
      std::uint64_t new_cells =
          static_cast<std::uint64_t>(zero_rows.size()) * block;
      const std::uint64_t uncovered_rows =
          query.marginal_size() -
          (rows.full_coverage ? query.marginal_size() : rows.rows.size());
      if (need_case4) new_cells += uncovered_rows * block;
      if (out.size() + new_cells > options.max_support_cells) {
        throw Error(
            "unrestricted update would exceed the support cap; enable "
            "support restriction or raise max_support_cells");
      }
      for (std::size_t pos : zero_rows) {
        const std::uint64_t marginal_cell =
            rows.full_coverage ? pos : rows.rows[pos];
        const double share = targets[pos] / static_cast<double>(block);
        query.for_each_block_cell(marginal_cell, [&](CellIndex cell) {
          out.emplace_back(cell, share);
        });
      }
      if (need_case4) {
        const double share =
            residual / static_cast<double>(uncovered_rows * block);
        std::size_t next_row = 0;
        for (std::uint64_t mc = 0; mc < query.marginal_size(); ++mc) {
          if (next_row < rows.rows.size() && rows.rows[next_row] == mc) {
            ++next_row;
            continue;
          }
          query.for_each_block_cell(mc, [&](CellIndex cell) {
            out.emplace_back(cell, share);
          });
        }
      }
    }
  }

  std::sort(out.begin(), out.end());

  bool pruned = false;
  if (options.prune_threshold > 0.0) {
    const std::size_t before = out.size();
    std::erase_if(out, [&](const DensityDistribution::Entry& e) {
      return e.second < options.prune_threshold;
    });
    pruned = out.size() != before;
  }

  double sum = 0.0;
  for (const auto& [cell, mass] : out) sum += mass;
  if (!(sum > 0.0)) {
    throw Error("distribution update produced an empty distribution");
  }
  if (pruned || mass_dropped || std::abs(sum - 1.0) > 1e-12) {
    for (auto& [cell, mass] : out) mass /= sum;
  }
  return DensityDistribution::from_mass(prior.schema(), std::move(out));
}

}  // namespace

DensityDistribution update_distribution(
    const DensityDistribution& prior, const MarginalQuery& query,
    std::span<const double> target, const UpdateOptions& options,
    const DensityDistribution* restrict_support) {
  if (target.size() != query.marginal_size()) {
    throw DataError("update target length does not match the marginal size");
  }
  RowView rows;
  rows.full_coverage = true;
  return apply_update(prior, query, rows, target, options, restrict_support);
}

DensityDistribution update_distribution(
    const DensityDistribution& prior, const MarginalQuery& query,
    std::span<const std::uint64_t> rows, std::span<const double> row_targets,
    const UpdateOptions& options,
    const DensityDistribution* restrict_support) {
  if (rows.empty()) throw DataError("partial update requires at least one row");
  if (rows.size() != row_targets.size()) {
    throw DataError("row/target length mismatch");
  }
  if (!std::is_sorted(rows.begin(), rows.end()) ||
      std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
    throw DataError("partial update rows must be sorted and unique");
  }
  if (rows.back() >= query.marginal_size()) {
    throw DataError("partial update row out of range");
  }
  RowView view;
  view.full_coverage = rows.size() == query.marginal_size();
  view.rows = rows;
  return apply_update(prior, query, view, row_targets, options,
                      restrict_support);
}

IdeResult ide(const Workload& workload,
              const std::vector<MarginalVector>& noisy_answers,
              const DensityDistribution& prior, const UpdateSchedule& schedule,
              const UpdateOptions& options, RngStream* schedule_rng) {
  if (schedule.iterations < 1) {
    throw ConfigError("iteration budget must be at least 1");
  }
  if (noisy_answers.size() != workload.size()) {
    throw DataError("noisy answers are not aligned with the workload");
  }
  for (std::size_t i = 0; i < workload.size(); ++i) {
    if (!(noisy_answers[i].query == workload[i]) ||
        noisy_answers[i].values.size() != workload[i].marginal_size()) {
      throw DataError("noisy answer " + std::to_string(i) +
                      " does not match its query");
    }
  }
  if (schedule.mode == UpdateSchedule::Mode::kSeededRandom &&
      schedule_rng == nullptr) {
    throw ConfigError("seeded-random schedule requires an rng stream");
  }

  IdeResult result{prior, {}};
  const DensityDistribution* restrict =
      options.support_restriction ? &prior : nullptr;
  for (std::uint32_t t = 0; t < schedule.iterations; ++t) {
    const std::size_t idx =
        schedule.mode == UpdateSchedule::Mode::kRoundRobin
            ? t % workload.size()
            : static_cast<std::size_t>(schedule_rng->next_below(workload.size()));
    IterationRecord record;
    record.query_index = idx;
    if (options.record_trace) {
      record.pre_update_loss =
          workload_l1_loss(result.distribution, workload, noisy_answers);
    }
    const ProjectedAnswer projected = project_full(noisy_answers[idx].values);
    result.distribution =
        update_distribution(result.distribution, workload[idx],
                            projected.values, options, restrict);
    if (options.record_trace) {
      record.post_update_kl = kl_divergence(result.distribution, prior);
      result.trace.push_back(record);
    }
  }
  return result;
}

double workload_l1_loss(const DensityDistribution& dist,
                        const Workload& workload,
                        const std::vector<MarginalVector>& noisy_answers) {
  if (noisy_answers.size() != workload.size()) {
    throw DataError("noisy answers are not aligned with the workload");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < workload.size(); ++i) {
    const MarginalVector marginal = evaluate_marginal(dist, workload[i]);
    if (marginal.values.size() != noisy_answers[i].values.size()) {
      throw DataError("noisy answer " + std::to_string(i) +
                      " has the wrong length");
    }
    for (std::size_t j = 0; j < marginal.values.size(); ++j) {
      loss += std::abs(marginal.values[j] - noisy_answers[i].values[j]);
    }
  }
  return loss;
}

}  // namespace mresynth
