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

#include "mresynth/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mresynth/errors.hpp"

namespace mresynth {

MarginalQuery MarginalQuery::over(SchemaPtr schema,
                                  std::vector<std::size_t> attribute_indices) {
  if (!schema) throw ConfigError("marginal query requires a schema");
  if (attribute_indices.empty()) {
    throw ConfigError("marginal query must name at least one attribute");
  }
  std::sort(attribute_indices.begin(), attribute_indices.end());
  if (std::adjacent_find(attribute_indices.begin(), attribute_indices.end()) !=
      attribute_indices.end()) {
    throw ConfigError("marginal query repeats an attribute");
  }
  if (attribute_indices.back() >= schema->attribute_count()) {
    throw ConfigError("marginal query attribute index out of range");
  }

  MarginalQuery q;
  q.attributes_ = std::move(attribute_indices);
  const std::size_t k = q.attributes_.size();
  q.attr_sizes_.resize(k);
  q.cell_strides_.resize(k);
  q.marginal_strides_.assign(k, 1);
  for (std::size_t i = 0; i < k; ++i) {
    q.attr_sizes_[i] = schema->attribute_size(q.attributes_[i]);
    q.cell_strides_[i] = schema->stride(q.attributes_[i]);
  }
  for (std::size_t i = k; i-- > 0;) {
    if (i + 1 < k) {
      q.marginal_strides_[i] = q.marginal_strides_[i + 1] * q.attr_sizes_[i + 1];
    }
  }
  q.marginal_size_ = q.marginal_strides_[0] * q.attr_sizes_[0];
  q.schema_ = std::move(schema);
  return q;
}

MarginalQuery MarginalQuery::over_names(SchemaPtr schema,
                                        std::span<const std::string> names) {
  if (!schema) throw ConfigError("marginal query requires a schema");
  std::vector<std::size_t> indices;
  indices.reserve(names.size());
  for (const auto& name : names) {
    auto idx = schema->attribute_index(name);
    if (!idx) throw ConfigError("unknown attribute in workload: " + name);
    indices.push_back(*idx);
  }
  return over(std::move(schema), std::move(indices));
}

std::uint64_t MarginalQuery::block_size() const {
  return schema_->domain_size() / marginal_size_;
}

std::uint64_t MarginalQuery::marginal_index(CellIndex cell) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    index += ((cell / cell_strides_[i]) % attr_sizes_[i]) *
             marginal_strides_[i];
  }
  return index;
}

void MarginalQuery::for_each_block_cell(
    std::uint64_t marginal_cell,
    const std::function<void(CellIndex)>& fn) const {
  if (marginal_cell >= marginal_size_) {
    throw DataError("marginal cell out of range");
  }
  // Base index from the fixed query-attribute values.
  CellIndex base = 0;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    base += ((marginal_cell / marginal_strides_[i]) % attr_sizes_[i]) *
            cell_strides_[i];
  }
  // Mixed-radix walk over the complement attributes.
  std::vector<std::size_t> comp;
  for (std::size_t a = 0; a < schema_->attribute_count(); ++a) {
    if (!std::binary_search(attributes_.begin(), attributes_.end(), a)) {
      comp.push_back(a);
    }
  }
  if (comp.empty()) {
    fn(base);
    return;
  }
  std::vector<std::uint64_t> digits(comp.size(), 0);
  for (;;) {
    CellIndex cell = base;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      cell += digits[i] * schema_->stride(comp[i]);
    }
    fn(cell);
    std::size_t i = comp.size();
    while (i-- > 0) {
      if (++digits[i] < schema_->attribute_size(comp[i])) break;
      digits[i] = 0;
      if (i == 0) return;
    }
  }
}

std::string MarginalQuery::describe() const {
  std::string out = "{";
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (i) out += ",";
    out += schema_->attribute(attributes_[i]).name;
  }
  return out + "}";
}

Workload Workload::of(std::vector<MarginalQuery> queries) {
  if (queries.empty()) {
    throw ConfigError("workload must contain at least one marginal query");
  }
  std::set<std::vector<std::size_t>> seen;
  for (const auto& q : queries) {
    if (!seen.insert(q.attributes()).second) {
      throw ConfigError("workload repeats marginal " + q.describe());
    }
    if (!same_schema(q.schema(), queries.front().schema())) {
      throw ConfigError("workload queries must share one schema");
    }
  }
  Workload w;
  w.queries_ = std::move(queries);
  return w;
}

double MarginalVector::l1_norm() const {
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  return sum;
}

namespace {

template <typename Entries>
MarginalVector evaluate_entries(const SchemaPtr& schema,
                                const Entries& entries,
                                const MarginalQuery& query) {
  if (!same_schema(schema, query.schema())) {
    throw DataError("marginal query evaluated against a different schema");
  }
  MarginalVector out{query, std::vector<double>(query.marginal_size(), 0.0)};
  for (const auto& [cell, value] : entries) {
    out.values[query.marginal_index(cell)] += static_cast<double>(value);
  }
  return out;
}

}  // namespace

MarginalVector evaluate_marginal(const DensityDistribution& dist,
                                 const MarginalQuery& query) {
  return evaluate_entries(dist.schema(), dist.entries(), query);
}

MarginalVector evaluate_marginal(const Histogram& histogram,
                                 const MarginalQuery& query) {
  return evaluate_entries(histogram.schema(), histogram.entries(), query);
}

std::uint32_t workload_sensitivity(const Workload& workload) {
  return static_cast<std::uint32_t>(workload.size());
}

PartialWorkloadReport validate_partial_workload(
    std::span<const MarginalQuery> subset) {
  if (subset.empty()) {
    return {false, "partial workload is empty"};
  }
  if (subset.size() > 1) {
    // Each full marginal covers every domain cell once, so two or more
    // queries cover every cell at least twice.
    return {false, "queries " + subset[0].describe() + " and " +
                       subset[1].describe() +
                       " overlap: every domain cell is covered by both"};
  }
  return {true, ""};
}

}  // namespace mresynth
