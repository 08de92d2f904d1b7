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

#include "mresynth/schema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "mresynth/errors.hpp"

namespace mresynth {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
    throw ConfigError("schema domain size overflows 64 bits");
  }
  return a * b;
}

std::string format_edge(double edge) {
  std::ostringstream os;
  os << edge;
  return os.str();
}

}  // namespace

std::vector<std::string> bin_labels_from_edges(
    const std::vector<double>& edges) {
  std::vector<std::string> labels;
  labels.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string hi =
        i + 1 < edges.size() ? format_edge(edges[i + 1]) : std::string("inf");
    labels.push_back("[" + format_edge(edges[i]) + "," + hi + ")");
  }
  return labels;
}

Schema Schema::from_attributes(std::vector<Attribute> attributes) {
  if (attributes.empty()) {
    throw ConfigError("schema must declare at least one attribute");
  }
  Schema schema;
  std::unordered_set<std::string> seen_names;
  for (auto& attr : attributes) {
    if (attr.name.empty()) throw ConfigError("attribute name must be nonempty");
    if (!seen_names.insert(attr.name).second) {
      throw ConfigError("duplicate attribute name: " + attr.name);
    }
    if (attr.is_binned()) {
      if (!std::is_sorted(attr.bin_edges.begin(), attr.bin_edges.end()) ||
          std::adjacent_find(attr.bin_edges.begin(), attr.bin_edges.end()) !=
              attr.bin_edges.end()) {
        throw ConfigError("bin edges of '" + attr.name +
                          "' must be strictly ascending");
      }
      if (attr.labels.empty()) {
        attr.labels = bin_labels_from_edges(attr.bin_edges);
      } else if (attr.labels.size() != attr.bin_edges.size()) {
        throw ConfigError("attribute '" + attr.name +
                          "': label count must match bin count");
      }
    }
    if (attr.labels.empty()) {
      throw ConfigError("attribute '" + attr.name + "' has an empty domain");
    }
    std::unordered_map<std::string, std::size_t> label_map;
    for (std::size_t i = 0; i < attr.labels.size(); ++i) {
      if (attr.labels[i].empty()) {
        throw ConfigError("attribute '" + attr.name + "' has an empty label");
      }
      if (!label_map.emplace(attr.labels[i], i).second) {
        throw ConfigError("attribute '" + attr.name + "' repeats label '" +
                          attr.labels[i] + "'");
      }
    }
    schema.label_to_index_.push_back(std::move(label_map));
  }

  schema.attributes_ = std::move(attributes);
  const std::size_t m = schema.attributes_.size();
  schema.strides_.assign(m, 1);
  for (std::size_t i = m; i-- > 0;) {
    if (i + 1 < m) {
      schema.strides_[i] =
          checked_mul(schema.strides_[i + 1],
                      schema.attributes_[i + 1].labels.size());
    }
  }
  schema.domain_size_ =
      checked_mul(schema.strides_[0], schema.attributes_[0].labels.size());
  for (std::size_t i = 0; i < m; ++i) {
    schema.name_to_index_.emplace(schema.attributes_[i].name, i);
  }
  return schema;
}

std::optional<std::size_t> Schema::attribute_index(
    std::string_view name) const {
  auto it = name_to_index_.find(std::string(name));
  if (it == name_to_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Schema::label_index(std::size_t attr,
                                std::string_view label) const {
  const auto& map = label_to_index_[attr];
  auto it = map.find(std::string(label));
  if (it == map.end()) {
    throw DataError("unknown label '" + std::string(label) +
                    "' for attribute '" + attributes_[attr].name + "'");
  }
  return it->second;
}

std::size_t Schema::bin_index(std::size_t attr, double raw_value) const {
  const auto& edges = attributes_[attr].bin_edges;
  if (edges.empty()) {
    throw DataError("attribute '" + attributes_[attr].name +
                    "' has no bin edges");
  }
  if (!std::isfinite(raw_value) || raw_value < edges.front()) {
    throw DataError("value " + format_edge(raw_value) +
                    " below first bin edge of attribute '" +
                    attributes_[attr].name + "'");
  }
  auto it = std::upper_bound(edges.begin(), edges.end(), raw_value);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

CellIndex Schema::encode(std::span<const std::string> labels) const {
  if (labels.size() != attributes_.size()) {
    throw DataError("tuple arity mismatch: expected " +
                    std::to_string(attributes_.size()) + " values, got " +
                    std::to_string(labels.size()));
  }
  CellIndex cell = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    cell += static_cast<std::uint64_t>(label_index(i, labels[i])) * strides_[i];
  }
  return cell;
}

CellIndex Schema::encode_indices(
    std::span<const std::size_t> value_indices) const {
  if (value_indices.size() != attributes_.size()) {
    throw DataError("tuple arity mismatch");
  }
  CellIndex cell = 0;
  for (std::size_t i = 0; i < value_indices.size(); ++i) {
    if (value_indices[i] >= attributes_[i].labels.size()) {
      throw DataError("value index out of range for attribute '" +
                      attributes_[i].name + "'");
    }
    cell += static_cast<std::uint64_t>(value_indices[i]) * strides_[i];
  }
  return cell;
}

std::vector<std::string> Schema::decode(CellIndex cell) const {
  std::vector<std::size_t> idx(attributes_.size());
  decode_indices(cell, idx);
  std::vector<std::string> labels;
  labels.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    labels.push_back(attributes_[i].labels[idx[i]]);
  }
  return labels;
}

void Schema::decode_indices(CellIndex cell, std::span<std::size_t> out) const {
  if (cell >= domain_size_) {
    throw DataError("cell index " + std::to_string(cell) +
                    " out of range (domain size " +
                    std::to_string(domain_size_) + ")");
  }
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    out[i] = static_cast<std::size_t>(
        (cell / strides_[i]) % attributes_[i].labels.size());
  }
}

bool Schema::operator==(const Schema& other) const {
  if (attributes_.size() != other.attributes_.size()) return false;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name != other.attributes_[i].name ||
        attributes_[i].labels != other.attributes_[i].labels) {
      return false;
    }
  }
  return true;
}

bool same_schema(const SchemaPtr& a, const SchemaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace mresynth
