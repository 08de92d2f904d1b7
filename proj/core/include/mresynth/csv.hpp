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

#ifndef MRESYNTH_CSV_HPP_
#define MRESYNTH_CSV_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mresynth/evaluation.hpp"
#include "mresynth/synthesis.hpp"

namespace mresynth {

// RFC-4180-style parsing: comma separators, optional double-quoted fields
// with "" escapes, LF or CRLF line endings, UTF-8 passthrough. Returns one
// vector of fields per row, header included.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

struct IngestStats {
  std::uint64_t rows_loaded = 0;
  std::vector<std::string> skipped;  // row diagnostics in non-strict mode
};

// Loads a dataset CSV whose header names the puma and year columns plus
// every schema attribute (extra columns are ignored). Values of binned
// attributes may be raw numbers or exact bin labels. In strict mode the
// first malformed row aborts with its line number; otherwise bad rows are
// skipped and reported through `stats`.
GroupedData load_grouped_csv(const std::string& path, SchemaPtr schema,
                             bool strict, IngestStats* stats = nullptr);

// Synthetic output: header "puma,year,<attributes...>"; groups in key
// order, rows in draw order.
void write_synthetic_csv(const std::string& path,
                         const SynthesisResult& result);

// Flat evaluation table: group, error, penalized flag and counts.
void write_eval_csv(const std::string& path, const EvalReport& report);

}  // namespace mresynth

#endif  // MRESYNTH_CSV_HPP_
