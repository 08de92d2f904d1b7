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

#ifndef MRESYNTH_SELECTION_HPP_
#define MRESYNTH_SELECTION_HPP_

#include <cstdint>
#include <vector>

#include "mresynth/histogram.hpp"
#include "mresynth/workload.hpp"

namespace mresynth {

struct SelectionOptions {
  double tau_edge = 0.1;    // nats; MI at or above this adds a graph edge
  double tau_indep = 0.05;  // nats; pairs below this count as independent
  std::uint64_t max_marginal_cells = 1'000'000;
};

// Plug-in mutual information (nats) of two attributes under the empirical
// 2-way marginal; zero-mass terms contribute 0 and tiny negative rounding
// is clamped to 0.
double mutual_information(const Histogram& data, std::size_t attr_a,
                          std::size_t attr_b);

// Symmetric pairwise-MI matrix; the diagonal is unused.
class MiGraph {
 public:
  static MiGraph compute(const Histogram& data);

  std::size_t attribute_count() const { return m_; }
  double at(std::size_t a, std::size_t b) const { return mi_[a * m_ + b]; }

  // Maximal cliques of the thresholded graph (isolated attributes appear
  // as singletons), each sorted ascending.
  std::vector<std::vector<std::size_t>> maximal_cliques(double tau_edge) const;

 private:
  std::size_t m_ = 0;
  std::vector<double> mi_;
};

// State-level workload: maximal MI-graph cliques in descending total edge
// weight, each becoming one marginal query if its domain fits
// max_marginal_cells, otherwise its best-fitting highest-MI pair; singleton
// marginals are appended so every attribute is covered.
Workload select_state_workload(const Histogram& public_data,
                               const SelectionOptions& options = {});

// Group-level workload: one-way marginals over a greedily built attribute
// subset in which all pairs have MI below tau_indep. Seeded with attribute
// 0; candidates join in ascending max-MI-to-selected order, ties broken by
// the lower index.
Workload select_group_workload(const Histogram& public_data,
                               const SelectionOptions& options = {});

}  // namespace mresynth

#endif  // MRESYNTH_SELECTION_HPP_
