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

#ifndef MRESYNTH_HISTOGRAM_HPP_
#define MRESYNTH_HISTOGRAM_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mresynth/schema.hpp"

namespace mresynth {

// Sparse cell->count map over a schema's product domain. Entries are kept
// sorted by cell index, zero counts are never stored, and absence means a
// count of zero; the full domain is never materialized.
class Histogram {
 public:
  using Entry = std::pair<CellIndex, std::uint64_t>;

  static Histogram empty(SchemaPtr schema);

  // Builds from (cell, count) pairs in any order; duplicates accumulate and
  // zero counts are dropped.
  static Histogram from_counts(SchemaPtr schema, std::vector<Entry> counts);

  const SchemaPtr& schema() const { return schema_; }
  std::uint64_t total() const { return total_; }
  std::size_t support_size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }

  std::uint64_t count_at(CellIndex cell) const;

  // Pools two histograms over the same schema.
  Histogram& operator+=(const Histogram& other);

 private:
  Histogram() = default;

  SchemaPtr schema_;
  std::vector<Entry> entries_;
  std::uint64_t total_ = 0;
};

// Counts the multiset of records (tuples of labels). A record that fails to
// encode aborts with a DataError naming its 1-based position.
Histogram histogram_from_records(
    SchemaPtr schema, std::span<const std::vector<std::string>> records);

// Sparse probability distribution over the domain. All stored masses are
// strictly positive and sum to 1 within 1e-9; absent cells have probability
// exactly zero. Immutable after construction.
class DensityDistribution {
 public:
  using Entry = std::pair<CellIndex, double>;

  // Requires positive masses summing to 1 within 1e-9.
  static DensityDistribution from_mass(SchemaPtr schema,
                                       std::vector<Entry> mass);

  // Normalizes arbitrary nonnegative weights with a positive sum; zero
  // weights are dropped.
  static DensityDistribution from_weights(SchemaPtr schema,
                                          std::vector<Entry> weights);

  // Uniform distribution over the full domain; guarded by a cell cap since
  // it materializes every cell.
  static DensityDistribution uniform(SchemaPtr schema,
                                     std::uint64_t max_cells = 10'000'000);

  const SchemaPtr& schema() const { return schema_; }
  std::size_t support_size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }

  double mass_at(CellIndex cell) const;
  bool in_support(CellIndex cell) const;
  double total_mass() const;

 private:
  DensityDistribution() = default;
  friend DensityDistribution normalize(const Histogram&);

  SchemaPtr schema_;
  std::vector<Entry> entries_;
};

// x_i = h_i / n. Errors on an empty histogram.
DensityDistribution normalize(const Histogram& histogram);

// KL divergence (relative entropy), natural log, with the 0*ln(0/.) = 0
// convention. Returns +infinity when q places mass outside p's support.
double kl_divergence(const DensityDistribution& q,
                     const DensityDistribution& p);

}  // namespace mresynth

#endif  // MRESYNTH_HISTOGRAM_HPP_
