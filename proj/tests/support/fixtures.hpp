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

#ifndef MRESYNTH_TESTS_FIXTURES_HPP_
#define MRESYNTH_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mresynth/histogram.hpp"
#include "mresynth/rng.hpp"
#include "mresynth/schema.hpp"

namespace mresynth::testsupport {

// Schema with labels "<name>0", "<name>1", ... per attribute.
SchemaPtr make_schema(
    const std::vector<std::pair<std::string, std::size_t>>& attrs);

// Strictly positive distribution over the whole (small) domain.
DensityDistribution random_full_distribution(const SchemaPtr& schema,
                                             RngStream& rng);

// Sparse distribution over roughly `support` random cells.
DensityDistribution random_sparse_distribution(const SchemaPtr& schema,
                                               std::size_t support,
                                               RngStream& rng);

// Nonnegative vector of the given length summing to `total`.
std::vector<double> random_point_on_simplex(std::size_t length, double total,
                                            RngStream& rng);

}  // namespace mresynth::testsupport

#endif  // MRESYNTH_TESTS_FIXTURES_HPP_
