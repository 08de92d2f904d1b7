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

#ifndef MRESYNTH_SYNTHESIS_HPP_
#define MRESYNTH_SYNTHESIS_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mresynth/estimation.hpp"
#include "mresynth/histogram.hpp"
#include "mresynth/privacy.hpp"
#include "mresynth/workload.hpp"

namespace mresynth {

struct GroupKey {
  std::string puma;
  int year = 0;

  auto operator<=>(const GroupKey&) const = default;
  std::string to_string() const { return puma + ":" + std::to_string(year); }
};

// (puma, year) -> histogram over one shared schema.
struct GroupedData {
  SchemaPtr schema;
  std::map<GroupKey, Histogram> groups;

  Histogram pooled() const;
};

// Maps a PUMA code onto its state key by longest matching prefix. The
// mapping comes from configuration; no geography is hardcoded.
class StateMap {
 public:
  static StateMap from_prefixes(std::map<std::string, std::string> prefixes);

  const std::string& state_of(const std::string& puma) const;
  const std::map<std::string, std::string>& prefixes() const {
    return prefixes_;
  }

 private:
  std::map<std::string, std::string> prefixes_;
};

// Derives per-purpose noise sources and rng streams from the master seed;
// results are independent of scheduling order.
class NoiseFactory {
 public:
  NoiseFactory(std::uint64_t master_seed, bool zero_noise)
      : seed_(master_seed), zero_(zero_noise) {}

  std::unique_ptr<NoiseSource> make(const std::string& label) const;
  RngStream stream(const std::string& label) const {
    return RngStream(seed_, label);
  }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  bool zero_;
};

struct SynthesisOptions {
  UpdateOptions update;
  // 0 selects the default of two times the workload's query count.
  std::uint32_t iterations = 0;
  UpdateSchedule::Mode schedule_mode = UpdateSchedule::Mode::kRoundRobin;
  bool zero_noise = false;  // diagnostic mode; not differentially private
  bool record_traces = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct PriorUpdateResult {
  DensityDistribution posterior;
  std::uint64_t noisy_total = 0;
  EstimationTrace trace;
};

// One Prior_Update call: noisy count, noisy workload answer, then IDE with
// the given prior. Charges exactly 2 * epsilon0 to `scope`, which also
// prefixes the derived noise stream labels.
PriorUpdateResult prior_update(const Workload& workload,
                               const Histogram& histogram,
                               const DensityDistribution& prior,
                               std::uint32_t iterations,
                               const PrivacyParams& params, double epsilon0,
                               const NoiseFactory& noise,
                               PrivacyLedger& ledger, const std::string& scope,
                               const SynthesisOptions& options);

struct GroupSynthesis {
  GroupKey key;
  std::string state;
  std::uint64_t noisy_count = 0;
  std::vector<CellIndex> cells;  // sampled rows in draw order
  EstimationTrace trace;
};

struct SynthesisResult {
  GroupedData synthetic;
  std::vector<GroupSynthesis> groups;  // sorted by group key
};

// Algorithm flow: pool each state's histograms and update the global prior
// on the state workload, then update each group's state prior on the group
// workload and sample the group's noisy count of tuples. Charges 4 *
// epsilon0 = epsilon along every leaf scope and verifies the ledger total
// equals epsilon.
SynthesisResult synthesize(const GroupedData& data, const StateMap& states,
                           const DensityDistribution& prior,
                           const Workload& state_workload,
                           const Workload& group_workload,
                           const PrivacyParams& params,
                           const SynthesisOptions& options,
                           PrivacyLedger& ledger, std::uint64_t master_seed);

// `count` i.i.d. draws by inverse CDF over the support's cumulative mass
// (support ordered by cell index). Errors when count > 0 on an empty
// distribution.
std::vector<CellIndex> sample_cells(const DensityDistribution& dist,
                                    std::uint64_t count, RngStream& rng);

// Same draws, decoded to value tuples.
std::vector<std::vector<std::string>> sample_records(
    const DensityDistribution& dist, std::uint64_t count, RngStream& rng);

}  // namespace mresynth

#endif  // MRESYNTH_SYNTHESIS_HPP_
