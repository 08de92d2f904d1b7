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

#include "mresynth/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mresynth/errors.hpp"

namespace mresynth {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quoted(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int parse_year(const std::string& text) {
  int year = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, year);
  if (ec != std::errc() || ptr != end) {
    throw DataError("year is not an integer: '" + text + "'");
  }
  return year;
}

// Binned attributes accept either the exact bin label (so synthetic output
// reloads cleanly) or a raw number mapped through the edges.
std::size_t value_index(const Schema& schema, std::size_t attr,
                        const std::string& text) {
  const Attribute& spec = schema.attribute(attr);
  if (spec.is_binned()) {
    for (std::size_t i = 0; i < spec.labels.size(); ++i) {
      if (spec.labels[i] == text) return i;
    }
    double raw = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, raw);
    if (ec != std::errc() || ptr != end) {
      throw DataError("value '" + text + "' for attribute '" + spec.name +
                      "' is neither a bin label nor a number");
    }
    return schema.bin_index(attr, raw);
  }
  return schema.label_index(attr, text);
}

}  // namespace

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  const std::string content = read_file(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&]() {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&]() {
    end_field();
    if (row.size() > 1 || !row[0].empty()) rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field += c;
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field in " + path);
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

GroupedData load_grouped_csv(const std::string& path, SchemaPtr schema,
                             bool strict, IngestStats* stats) {
  const auto rows = read_csv(path);
  if (rows.empty()) throw DataError("CSV has no header: " + path);
  const auto& header = rows.front();

  auto column_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw DataError("CSV missing column '" + name + "': " + path);
  };
  const std::size_t puma_col = column_of("puma");
  const std::size_t year_col = column_of("year");
  std::vector<std::size_t> attr_cols;
  attr_cols.reserve(schema->attribute_count());
  for (const auto& attr : schema->attributes()) {
    attr_cols.push_back(column_of(attr.name));
  }

  std::map<GroupKey, std::vector<Histogram::Entry>> accumulators;
  std::vector<std::size_t> indices(schema->attribute_count());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    try {
      if (row.size() != header.size()) {
        throw DataError("expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(row.size()));
      }
      GroupKey key{row[puma_col], parse_year(row[year_col])};
      for (std::size_t a = 0; a < attr_cols.size(); ++a) {
        indices[a] = value_index(*schema, a, row[attr_cols[a]]);
      }
      accumulators[key].emplace_back(schema->encode_indices(indices), 1);
      if (stats) ++stats->rows_loaded;
    } catch (const DataError& e) {
      const std::string message =
          "line " + std::to_string(r + 1) + ": " + e.what();
      if (strict) throw DataError(path + ": " + message);
      if (stats) stats->skipped.push_back(message);
    }
  }

  GroupedData data;
  data.schema = schema;
  for (auto& [key, entries] : accumulators) {
    data.groups.emplace(key,
                        Histogram::from_counts(schema, std::move(entries)));
  }
  return data;
}

void write_synthetic_csv(const std::string& path,
                         const SynthesisResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  const SchemaPtr& schema = result.synthetic.schema;
  out << "puma,year";
  for (const auto& attr : schema->attributes()) {
    out << ',' << quoted(attr.name);
  }
  out << '\n';
  for (const auto& group : result.groups) {
    for (CellIndex cell : group.cells) {
      out << quoted(group.key.puma) << ',' << group.key.year;
      for (const auto& label : schema->decode(cell)) {
        out << ',' << quoted(label);
      }
      out << '\n';
    }
  }
}

void write_eval_csv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << "puma,year,error,penalized,synthetic_count,truth_count\n";
  std::ostringstream line;
  for (const auto& group : report.groups) {
    line.str("");
    line << quoted(group.key.puma) << ',' << group.key.year << ','
         << group.error << ',' << (group.penalized ? 1 : 0) << ','
         << group.synthetic_count << ',' << group.truth_count;
    out << line.str() << '\n';
  }
}

}  // namespace mresynth
