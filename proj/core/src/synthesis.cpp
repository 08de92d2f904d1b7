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

#include "mresynth/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "mresynth/errors.hpp"
#include "mresynth/parallel.hpp"

namespace mresynth {

Histogram GroupedData::pooled() const {
  Histogram pool = Histogram::empty(schema);
  for (const auto& [key, hist] : groups) pool += hist;
  return pool;
}

StateMap StateMap::from_prefixes(
    std::map<std::string, std::string> prefixes) {
  if (prefixes.empty()) {
    throw ConfigError("state map must define at least one PUMA prefix");
  }
  for (const auto& [prefix, state] : prefixes) {
    if (prefix.empty() || state.empty()) {
      throw ConfigError("state map entries must be nonempty");
    }
  }
  StateMap map;
  map.prefixes_ = std::move(prefixes);
  return map;
}

const std::string& StateMap::state_of(const std::string& puma) const {
  const std::string* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& [prefix, state] : prefixes_) {
    if (puma.size() >= prefix.size() &&
        puma.compare(0, prefix.size(), prefix) == 0 &&
        prefix.size() >= best_len) {
      best = &state;
      best_len = prefix.size();
    }
  }
  if (best == nullptr) {
    throw ConfigError("no state mapping for PUMA '" + puma + "'");
  }
  return *best;
}

std::unique_ptr<NoiseSource> NoiseFactory::make(
    const std::string& label) const {
  if (zero_) return std::make_unique<ZeroNoise>();
  return std::make_unique<StreamNoise>(RngStream(seed_, label));
}

namespace {

std::uint32_t effective_iterations(const SynthesisOptions& options,
                                   const Workload& workload) {
  if (options.iterations > 0) return options.iterations;
  return static_cast<std::uint32_t>(2 * workload.size());
}

}  // namespace

PriorUpdateResult prior_update(const Workload& workload,
                               const Histogram& histogram,
                               const DensityDistribution& prior,
                               std::uint32_t iterations,
                               const PrivacyParams& params, double epsilon0,
                               const NoiseFactory& noise,
                               PrivacyLedger& ledger, const std::string& scope,
                               const SynthesisOptions& options) {
  auto count_noise = noise.make(scope + "/count");
  const std::uint64_t noisy_total =
      noisy_count(histogram, params, epsilon0, *count_noise, ledger, scope);

  auto answer_noise = noise.make(scope + "/workload");
  const std::vector<MarginalVector> answers = noisy_workload_answer(
      workload, histogram, params, epsilon0, noisy_total, *answer_noise,
      ledger, scope);

  UpdateSchedule schedule{options.schedule_mode, iterations};
  UpdateOptions update = options.update;
  update.record_trace = options.record_traces;
  RngStream schedule_rng = noise.stream(scope + "/schedule");
  IdeResult estimate = ide(workload, answers, prior, schedule, update,
                           schedule.mode == UpdateSchedule::Mode::kSeededRandom
                               ? &schedule_rng
                               : nullptr);
  return PriorUpdateResult{std::move(estimate.distribution), noisy_total,
                           std::move(estimate.trace)};
}

std::vector<CellIndex> sample_cells(const DensityDistribution& dist,
                                    std::uint64_t count, RngStream& rng) {
  std::vector<CellIndex> cells;
  if (count == 0) return cells;
  if (dist.support_size() == 0) {
    throw DataError("cannot sample from an empty distribution");
  }
  std::vector<double> cumulative;
  cumulative.reserve(dist.support_size());
  double acc = 0.0;
  for (const auto& [cell, mass] : dist.entries()) {
    acc += mass;
    cumulative.push_back(acc);
  }
  cells.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double u = rng.next_unit_open() * acc;
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin());
    cells.push_back(
        dist.entries()[std::min(idx, dist.support_size() - 1)].first);
  }
  return cells;
}

std::vector<std::vector<std::string>> sample_records(
    const DensityDistribution& dist, std::uint64_t count, RngStream& rng) {
  std::vector<std::vector<std::string>> records;
  records.reserve(count);
  for (CellIndex cell : sample_cells(dist, count, rng)) {
    records.push_back(dist.schema()->decode(cell));
  }
  return records;
}

SynthesisResult synthesize(const GroupedData& data, const StateMap& states,
                           const DensityDistribution& prior,
                           const Workload& state_workload,
                           const Workload& group_workload,
                           const PrivacyParams& params,
                           const SynthesisOptions& options,
                           PrivacyLedger& ledger, std::uint64_t master_seed) {
  if (data.groups.empty()) throw DataError("no groups to synthesize");
  if (!same_schema(data.schema, prior.schema())) {
    throw DataError("prior schema does not match the data schema");
  }
  const double epsilon0 = params.epsilon0();
  const NoiseFactory noise(master_seed, options.zero_noise);

  // Re-group by state. Keys are iterated in sorted order so indices are
  // stable regardless of threading.
  std::map<std::string, std::vector<const GroupKey*>> by_state;
  std::map<std::string, Histogram> state_pools;
  for (const auto& [key, hist] : data.groups) {
    const std::string& state = states.state_of(key.puma);
    by_state[state].push_back(&key);
    auto [it, inserted] = state_pools.try_emplace(state, Histogram::empty(data.schema));
    it->second += hist;
  }

  // Phase 1: one Prior_Update per state on the pooled histogram. The
  // state-level noisy count is charged but otherwise unused downstream.
  std::vector<std::string> state_names;
  state_names.reserve(by_state.size());
  for (const auto& [state, keys] : by_state) state_names.push_back(state);

  std::vector<DensityDistribution> state_priors(state_names.size(), prior);
  const std::uint32_t state_iterations =
      effective_iterations(options, state_workload);
  parallel_for(state_names.size(), options.threads, [&](std::size_t i) {
    const std::string& state = state_names[i];
    const std::string scope = "state/" + state;
    PriorUpdateResult updated = prior_update(
        state_workload, state_pools.at(state), prior, state_iterations, params,
        epsilon0, noise, ledger, scope, options);
    state_priors[i] = std::move(updated.posterior);
  });

  // Phase 2: one Prior_Update plus sampling per (puma, year) group.
  struct GroupTask {
    const GroupKey* key;
    std::size_t state_index;
  };
  std::vector<GroupTask> tasks;
  for (std::size_t s = 0; s < state_names.size(); ++s) {
    for (const GroupKey* key : by_state.at(state_names[s])) {
      tasks.push_back({key, s});
    }
  }

  const std::uint32_t group_iterations =
      effective_iterations(options, group_workload);
  std::vector<GroupSynthesis> results(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    const GroupKey& key = *tasks[i].key;
    const std::string& state = state_names[tasks[i].state_index];
    const std::string scope =
        "state/" + state + "/group/" + key.to_string();
    PriorUpdateResult updated = prior_update(
        group_workload, data.groups.at(key), state_priors[tasks[i].state_index],
        group_iterations, params, epsilon0, noise, ledger, scope, options);

    GroupSynthesis out;
    out.key = key;
    out.state = state;
    out.noisy_count = updated.noisy_total;
    RngStream sampler = noise.stream(scope + "/sample");
    out.cells = sample_cells(updated.posterior, updated.noisy_total, sampler);
    if (options.record_traces) out.trace = std::move(updated.trace);
    results[i] = std::move(out);
  });

  std::sort(results.begin(), results.end(),
            [](const GroupSynthesis& a, const GroupSynthesis& b) {
              return a.key < b.key;
            });

  SynthesisResult result;
  result.synthetic.schema = data.schema;
  for (auto& group : results) {
    std::vector<Histogram::Entry> counts;
    counts.reserve(group.cells.size());
    for (CellIndex cell : group.cells) counts.emplace_back(cell, 1);
    result.synthetic.groups.emplace(
        group.key, Histogram::from_counts(data.schema, std::move(counts)));
  }
  result.groups = std::move(results);

  // Theorem-2 accounting: every leaf sums to 4 * epsilon0 = epsilon.
  const double total = ledger.total();
  if (std::abs(total - params.epsilon) > 1e-12) {
    throw BudgetError("ledger total " + std::to_string(total) +
                      " does not equal epsilon " +
                      std::to_string(params.epsilon));
  }
  assert_budget(ledger, params);
  return result;
}

}  // namespace mresynth
