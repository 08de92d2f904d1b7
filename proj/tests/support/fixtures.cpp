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

#include "fixtures.hpp"

#include <set>

namespace mresynth::testsupport {

SchemaPtr make_schema(
    const std::vector<std::pair<std::string, std::size_t>>& attrs) {
  std::vector<Attribute> attributes;
  for (const auto& [name, size] : attrs) {
    Attribute attr;
    attr.name = name;
    for (std::size_t i = 0; i < size; ++i) {
      attr.labels.push_back(name + std::to_string(i));
    }
    attributes.push_back(std::move(attr));
  }
  return std::make_shared<const Schema>(
      Schema::from_attributes(std::move(attributes)));
}

DensityDistribution random_full_distribution(const SchemaPtr& schema,
                                             RngStream& rng) {
  std::vector<DensityDistribution::Entry> weights;
  const std::uint64_t n = schema->domain_size();
  weights.reserve(n);
  for (std::uint64_t cell = 0; cell < n; ++cell) {
    weights.emplace_back(cell, 0.05 + rng.next_unit_open());
  }
  return DensityDistribution::from_weights(schema, std::move(weights));
}

DensityDistribution random_sparse_distribution(const SchemaPtr& schema,
                                               std::size_t support,
                                               RngStream& rng) {
  std::set<CellIndex> cells;
  const std::uint64_t n = schema->domain_size();
  while (cells.size() < support && cells.size() < n) {
    cells.insert(rng.next_below(n));
  }
  std::vector<DensityDistribution::Entry> weights;
  for (CellIndex cell : cells) {
    weights.emplace_back(cell, 0.05 + rng.next_unit_open());
  }
  return DensityDistribution::from_weights(schema, std::move(weights));
}

std::vector<double> random_point_on_simplex(std::size_t length, double total,
                                            RngStream& rng) {
  std::vector<double> out(length);
  double sum = 0.0;
  for (double& v : out) {
    v = rng.next_unit_open();
    sum += v;
  }
  for (double& v : out) v *= total / sum;
  return out;
}

}  // namespace mresynth::testsupport
