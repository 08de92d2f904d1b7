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

#ifndef MRESYNTH_SCHEMA_HPP_
#define MRESYNTH_SCHEMA_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mresynth {

// Flat cell index into the product domain, in [0, domain_size).
using CellIndex = std::uint64_t;

// One discrete attribute. A numeric attribute carries ascending bin edges
// e0 < e1 < ... < e(k-1); a raw value v maps to the bin i with
// e(i) <= v < e(i+1), the last bin being [e(k-1), +inf). Labels are the
// categorical domain either way; for binned attributes they default to
// half-open interval strings derived from the edges.
struct Attribute {
  std::string name;
  std::vector<std::string> labels;
  std::vector<double> bin_edges;  // empty for purely categorical attributes

  bool is_binned() const { return !bin_edges.empty(); }
};

// Generates "[lo,hi)" style labels for a list of bin edges.
std::vector<std::string> bin_labels_from_edges(
    const std::vector<double>& edges);

// Ordered attribute domains plus the mixed-radix bijection between value
// tuples and flat cell indices. The first attribute is the most significant
// digit. Immutable after construction.
class Schema {
 public:
  // Validates names, labels, and bin edges; rejects schemas whose total
  // domain size overflows 64 bits.
  static Schema from_attributes(std::vector<Attribute> attributes);

  std::size_t attribute_count() const { return attributes_.size(); }
  const Attribute& attribute(std::size_t i) const { return attributes_[i]; }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  std::optional<std::size_t> attribute_index(std::string_view name) const;

  std::uint64_t domain_size() const { return domain_size_; }
  std::uint64_t attribute_size(std::size_t i) const {
    return attributes_[i].labels.size();
  }
  // Mixed-radix stride of attribute i (product of the sizes of all less
  // significant attributes).
  std::uint64_t stride(std::size_t i) const { return strides_[i]; }

  // Label-position lookup within one attribute; throws DataError for an
  // unknown label.
  std::size_t label_index(std::size_t attr, std::string_view label) const;

  // Maps a raw numeric value onto the attribute's bin index; throws
  // DataError when the attribute is not binned or the value precedes the
  // first edge.
  std::size_t bin_index(std::size_t attr, double raw_value) const;

  CellIndex encode(std::span<const std::string> labels) const;
  CellIndex encode_indices(std::span<const std::size_t> value_indices) const;

  std::vector<std::string> decode(CellIndex cell) const;
  void decode_indices(CellIndex cell, std::span<std::size_t> out) const;

  bool operator==(const Schema& other) const;

 private:
  Schema() = default;

  std::vector<Attribute> attributes_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t domain_size_ = 0;
  std::unordered_map<std::string, std::size_t> name_to_index_;
  std::vector<std::unordered_map<std::string, std::size_t>> label_to_index_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

// Two density/histogram operands are compatible when they reference the
// same schema object or structurally equal schemas.
bool same_schema(const SchemaPtr& a, const SchemaPtr& b);

}  // namespace mresynth

#endif  // MRESYNTH_SCHEMA_HPP_
