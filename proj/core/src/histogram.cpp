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

#include "mresynth/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mresynth/errors.hpp"

namespace mresynth {

namespace {

constexpr double kMassTolerance = 1e-9;

template <typename Entry>
void sort_and_merge(std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries.size();) {
    Entry merged = entries[i];
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].first == merged.first) {
      merged.second += entries[j].second;
      ++j;
    }
    entries[out++] = merged;
    i = j;
  }
  entries.resize(out);
}

}  // namespace

Histogram Histogram::empty(SchemaPtr schema) {
  if (!schema) throw ConfigError("histogram requires a schema");
  Histogram h;
  h.schema_ = std::move(schema);
  return h;
}

Histogram Histogram::from_counts(SchemaPtr schema, std::vector<Entry> counts) {
  if (!schema) throw ConfigError("histogram requires a schema");
  for (const auto& [cell, count] : counts) {
    if (cell >= schema->domain_size()) {
      throw DataError("histogram cell " + std::to_string(cell) +
                      " out of range");
    }
  }
  sort_and_merge(counts);
  std::erase_if(counts, [](const Entry& e) { return e.second == 0; });
  Histogram h;
  h.schema_ = std::move(schema);
  h.entries_ = std::move(counts);
  for (const auto& [cell, count] : h.entries_) h.total_ += count;
  return h;
}

std::uint64_t Histogram::count_at(CellIndex cell) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), cell,
      [](const Entry& e, CellIndex c) { return e.first < c; });
  if (it == entries_.end() || it->first != cell) return 0;
  return it->second;
}

Histogram& Histogram::operator+=(const Histogram& other) {
  if (!same_schema(schema_, other.schema_)) {
    throw DataError("cannot pool histograms over different schemas");
  }
  entries_.insert(entries_.end(), other.entries_.begin(),
                  other.entries_.end());
  sort_and_merge(entries_);
  total_ += other.total_;
  return *this;
}

Histogram histogram_from_records(
    SchemaPtr schema, std::span<const std::vector<std::string>> records) {
  if (!schema) throw ConfigError("histogram requires a schema");
  std::vector<Histogram::Entry> counts;
  counts.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      counts.emplace_back(schema->encode(records[i]), 1);
    } catch (const DataError& e) {
      throw DataError("record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return Histogram::from_counts(std::move(schema), std::move(counts));
}

DensityDistribution DensityDistribution::from_mass(SchemaPtr schema,
                                                   std::vector<Entry> mass) {
  if (!schema) throw ConfigError("distribution requires a schema");
  sort_and_merge(mass);
  double total = 0.0;
  for (const auto& [cell, m] : mass) {
    if (cell >= schema->domain_size()) {
      throw DataError("distribution cell " + std::to_string(cell) +
                      " out of range");
    }
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw DataError("distribution mass must be positive and finite");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw DataError("distribution mass sums to " + std::to_string(total) +
                    ", expected 1");
  }
  DensityDistribution d;
  d.schema_ = std::move(schema);
  d.entries_ = std::move(mass);
  return d;
}

DensityDistribution DensityDistribution::from_weights(
    SchemaPtr schema, std::vector<Entry> weights) {
  if (!schema) throw ConfigError("distribution requires a schema");
  sort_and_merge(weights);
  std::erase_if(weights, [](const Entry& e) { return e.second == 0.0; });
  double total = 0.0;
  for (const auto& [cell, w] : weights) {
    if (cell >= schema->domain_size()) {
      throw DataError("distribution cell " + std::to_string(cell) +
                      " out of range");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DataError("distribution weights must be nonnegative and finite");
    }
    total += w;
  }
  if (!(total > 0.0)) throw DataError("distribution weights sum to zero");
  for (auto& [cell, w] : weights) w /= total;
  DensityDistribution d;
  d.schema_ = std::move(schema);
  d.entries_ = std::move(weights);
  return d;
}

DensityDistribution DensityDistribution::uniform(SchemaPtr schema,
                                                 std::uint64_t max_cells) {
  if (!schema) throw ConfigError("distribution requires a schema");
  const std::uint64_t n = schema->domain_size();
  if (n > max_cells) {
    throw ConfigError("uniform distribution over " + std::to_string(n) +
                      " cells exceeds the cap of " + std::to_string(max_cells));
  }
  DensityDistribution d;
  d.schema_ = std::move(schema);
  d.entries_.reserve(n);
  const double mass = 1.0 / static_cast<double>(n);
  for (std::uint64_t c = 0; c < n; ++c) d.entries_.emplace_back(c, mass);
  return d;
}

double DensityDistribution::mass_at(CellIndex cell) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), cell,
      [](const Entry& e, CellIndex c) { return e.first < c; });
  if (it == entries_.end() || it->first != cell) return 0.0;
  return it->second;
}

bool DensityDistribution::in_support(CellIndex cell) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), cell,
      [](const Entry& e, CellIndex c) { return e.first < c; });
  return it != entries_.end() && it->first == cell;
}

double DensityDistribution::total_mass() const {
  double total = 0.0;
  for (const auto& [cell, m] : entries_) total += m;
  return total;
}

DensityDistribution normalize(const Histogram& histogram) {
  if (histogram.total() == 0) {
    throw DataError("cannot normalize an empty histogram");
  }
  DensityDistribution d;
  d.schema_ = histogram.schema();
  d.entries_.reserve(histogram.support_size());
  const double n = static_cast<double>(histogram.total());
  for (const auto& [cell, count] : histogram.entries()) {
    d.entries_.emplace_back(cell, static_cast<double>(count) / n);
  }
  return d;
}

double kl_divergence(const DensityDistribution& q,
                     const DensityDistribution& p) {
  if (!same_schema(q.schema(), p.schema())) {
    throw DataError("kl_divergence requires matching schemas");
  }
  double sum = 0.0;
  for (const auto& [cell, qm] : q.entries()) {
    const double pm = p.mass_at(cell);
    if (pm == 0.0) return std::numeric_limits<double>::infinity();
    sum += qm * std::log(qm / pm);
  }
  return sum;
}

}  // namespace mresynth
