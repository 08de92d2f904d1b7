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

#ifndef MRESYNTH_CONFIG_HPP_
#define MRESYNTH_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "mresynth/estimation.hpp"
#include "mresynth/privacy.hpp"
#include "mresynth/schema.hpp"
#include "mresynth/selection.hpp"
#include "mresynth/workload.hpp"

namespace mresynth {

// Everything a run needs, loaded from one versioned JSON document. Paths
// are defaults that CLI flags may override.
struct RunConfig {
  int config_version = 1;
  SchemaPtr schema;
  std::map<std::string, std::string> state_prefixes;

  PrivacyParams privacy{1.0, 1};

  std::uint32_t iterations = 0;  // 0 = two times the workload's query count
  UpdateSchedule::Mode schedule_mode = UpdateSchedule::Mode::kRoundRobin;
  bool support_restriction = true;
  std::uint64_t max_support_cells = 5'000'000;

  SelectionOptions selection;

  std::uint32_t eval_repetitions = 50;
  double bias_threshold = 250.0;

  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool strict_ingest = true;

  struct Paths {
    std::string public_csv;
    std::string private_csv;
    std::string workload_state;
    std::string workload_group;
    std::string output_dir;
  } paths;
};

RunConfig load_run_config(const std::string& path);

// Digest of the semantically relevant configuration (schema, state map,
// privacy, estimation, selection, evaluation, seed). Paths and thread
// count are excluded so identical runs report identical hashes.
std::string config_hash(const RunConfig& config);

// Workload files hold a list of attribute-name arrays, one marginal per
// entry.
Workload load_workload(const std::string& path, SchemaPtr schema);
void save_workload(const std::string& path, const Workload& workload);

}  // namespace mresynth

#endif  // MRESYNTH_CONFIG_HPP_
