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

#ifndef MRESYNTH_WORKLOAD_HPP_
#define MRESYNTH_WORKLOAD_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mresynth/histogram.hpp"
#include "mresynth/schema.hpp"

namespace mresynth {

// A k-way marginal query over a subset of attributes, kept implicit: as a
// 0/1 matrix its rows (one per marginal cell) have pairwise disjoint
// supports and together cover every domain cell exactly once, so the max
// column sum is 1 and coverage is full.
class MarginalQuery {
 public:
  static MarginalQuery over(SchemaPtr schema,
                            std::vector<std::size_t> attribute_indices);
  static MarginalQuery over_names(SchemaPtr schema,
                                  std::span<const std::string> names);

  const SchemaPtr& schema() const { return schema_; }
  const std::vector<std::size_t>& attributes() const { return attributes_; }
  std::uint64_t marginal_size() const { return marginal_size_; }
  // Number of domain cells in each marginal row (product of the sizes of
  // the attributes outside the query).
  std::uint64_t block_size() const;

  // Projects a domain cell onto its marginal cell (the row covering it).
  std::uint64_t marginal_index(CellIndex cell) const;

  // Enumerates the domain cells of one marginal row in ascending order.
  void for_each_block_cell(std::uint64_t marginal_cell,
                           const std::function<void(CellIndex)>& fn) const;

  std::string describe() const;

  bool operator==(const MarginalQuery& other) const {
    return attributes_ == other.attributes_;
  }

 private:
  MarginalQuery() = default;

  SchemaPtr schema_;
  std::vector<std::size_t> attributes_;    // sorted, unique
  std::vector<std::uint64_t> attr_sizes_;  // |Sigma_i| per query attribute
  std::vector<std::uint64_t> cell_strides_;
  std::vector<std::uint64_t> marginal_strides_;
  std::uint64_t marginal_size_ = 1;
};

// Ordered list of marginal queries; duplicate attribute sets are rejected.
class Workload {
 public:
  static Workload of(std::vector<MarginalQuery> queries);

  std::size_t size() const { return queries_.size(); }
  const MarginalQuery& operator[](std::size_t i) const { return queries_[i]; }
  const std::vector<MarginalQuery>& queries() const { return queries_; }

 private:
  Workload() = default;
  std::vector<MarginalQuery> queries_;
};

// Dense real vector over one query's marginal domain, indexed by the
// query's mixed-radix encoding.
struct MarginalVector {
  MarginalQuery query;
  std::vector<double> values;

  double l1_norm() const;
};

MarginalVector evaluate_marginal(const DensityDistribution& dist,
                                 const MarginalQuery& query);
MarginalVector evaluate_marginal(const Histogram& histogram,
                                 const MarginalQuery& query);

// Max number of workload rows covering any one domain cell. Every query is
// a full marginal covering each cell exactly once, so this equals the
// query count; the explicit-matrix oracle in the tests checks that.
std::uint32_t workload_sensitivity(const Workload& workload);

struct PartialWorkloadReport {
  bool ok = false;
  std::string detail;
};

// A valid partial workload has max column sum 1: no domain cell covered by
// more than one row across the subset. Full marginals each cover every
// cell, so any multi-query subset overlaps and only singleton subsets pass.
PartialWorkloadReport validate_partial_workload(
    std::span<const MarginalQuery> subset);

}  // namespace mresynth

#endif  // MRESYNTH_WORKLOAD_HPP_
