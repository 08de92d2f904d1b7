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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mresynth/errors.hpp"
#include "mresynth/selection.hpp"

using namespace mresynth;
using testsupport::make_schema;

namespace {

// A=B perfectly correlated (probability 1/2 each), C uniform independent.
Histogram correlated_pair_fixture(const SchemaPtr& schema) {
  std::vector<Histogram::Entry> counts;
  for (std::uint64_t c = 0; c < 2; ++c) {
    counts.emplace_back(schema->encode_indices(std::vector<std::size_t>{0, 0, c}), 25);
    counts.emplace_back(schema->encode_indices(std::vector<std::size_t>{1, 1, c}), 25);
  }
  return Histogram::from_counts(schema, std::move(counts));
}

// MI computed straight from a dense count table, independent arithmetic.
double direct_mi(const std::vector<std::vector<std::uint64_t>>& counts) {
  double n = 0.0;
  std::vector<double> row(counts.size(), 0.0), col(counts[0].size(), 0.0);
  for (std::size_t a = 0; a < counts.size(); ++a) {
    for (std::size_t b = 0; b < counts[0].size(); ++b) {
      n += static_cast<double>(counts[a][b]);
    }
  }
  for (std::size_t a = 0; a < counts.size(); ++a) {
    for (std::size_t b = 0; b < counts[0].size(); ++b) {
      row[a] += counts[a][b] / n;
      col[b] += counts[a][b] / n;
    }
  }
  double mi = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    for (std::size_t b = 0; b < counts[0].size(); ++b) {
      const double p = counts[a][b] / n;
      if (p > 0.0) mi += p * std::log(p / (row[a] * col[b]));
    }
  }
  return mi;
}

std::vector<std::vector<std::size_t>> attribute_sets(const Workload& w) {
  std::vector<std::vector<std::size_t>> sets;
  for (const auto& q : w.queries()) sets.push_back(q.attributes());
  return sets;
}

}  // namespace

TEST_CASE("mutual information on canonical tables") {
  const SchemaPtr pair = make_schema({{"A", 2}, {"B", 2}});
  {
    // Independent uniform: all four joint counts equal.
    const Histogram h = Histogram::from_counts(
        pair, {{0, 25}, {1, 25}, {2, 25}, {3, 25}});
    CHECK(mutual_information(h, 0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  }
  {
    // Perfectly correlated A=B: MI equals the entropy ln 2.
    const Histogram h = Histogram::from_counts(pair, {{0, 50}, {3, 50}});
    CHECK(mutual_information(h, 0, 1) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(mutual_information(Histogram::empty(pair), 0, 1), DataError);
  CHECK_THROWS_AS(
      mutual_information(Histogram::from_counts(pair, {{0, 1}}), 1, 1),
      ConfigError);
}

TEST_CASE("mutual information matches the direct formula on random tables") {
  RngStream rng(606, "selection/tables");
  for (int round = 0; round < 100; ++round) {
    const std::size_t rows = 2 + rng.next_below(4);
    const std::size_t cols = 2 + rng.next_below(4);
    const SchemaPtr schema = make_schema({{"A", rows}, {"B", cols}});
    std::vector<std::vector<std::uint64_t>> table(
        rows, std::vector<std::uint64_t>(cols, 0));
    std::vector<Histogram::Entry> counts;
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        table[a][b] = rng.next_below(40);  // zeros included
        if (table[a][b] > 0) {
          counts.emplace_back(
              schema->encode_indices(std::vector<std::size_t>{a, b}),
              table[a][b]);
        }
      }
    }
    if (counts.empty()) counts.emplace_back(0, 1), table[0][0] = 1;
    const Histogram h = Histogram::from_counts(schema, std::move(counts));
    const double expected = direct_mi(table);
    CHECK(mutual_information(h, 0, 1) ==
          doctest::Approx(std::max(expected, 0.0)).epsilon(1e-12));
    // Symmetry.
    CHECK(mutual_information(h, 0, 1) ==
          doctest::Approx(mutual_information(h, 1, 0)).epsilon(1e-12));
    CHECK(mutual_information(h, 0, 1) >= 0.0);
  }
}

TEST_CASE("product tables have zero mutual information") {
  RngStream rng(607, "selection/product");
  for (int round = 0; round < 30; ++round) {
    const std::size_t rows = 2 + rng.next_below(3);
    const std::size_t cols = 2 + rng.next_below(3);
    const SchemaPtr schema = make_schema({{"A", rows}, {"B", cols}});
    std::vector<Histogram::Entry> counts;
    // Counts r_a * s_b factorize exactly, so the plug-in MI vanishes.
    std::vector<std::uint64_t> r(rows), s(cols);
    for (auto& v : r) v = 1 + rng.next_below(9);
    for (auto& v : s) v = 1 + rng.next_below(9);
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        counts.emplace_back(
            schema->encode_indices(std::vector<std::size_t>{a, b}), r[a] * s[b]);
      }
    }
    const Histogram h = Histogram::from_counts(schema, std::move(counts));
    CHECK(mutual_information(h, 0, 1) <= 1e-12);
  }
}

TEST_CASE("state workload selects cliques above the edge threshold") {
  const SchemaPtr schema = make_schema({{"A", 2}, {"B", 2}, {"C", 2}});
  const Histogram h = correlated_pair_fixture(schema);
  SelectionOptions options;
  options.tau_edge = 0.1;

  const Workload w = select_state_workload(h, options);
  CHECK(attribute_sets(w) ==
        std::vector<std::vector<std::size_t>>{{0, 1}, {2}});

  // Determinism: identical inputs give identical workloads.
  const Workload again = select_state_workload(h, options);
  CHECK(attribute_sets(again) == attribute_sets(w));
}

TEST_CASE("independent attributes yield singleton state workloads") {
  const SchemaPtr schema = make_schema({{"A", 2}, {"B", 2}, {"C", 2}});
  std::vector<Histogram::Entry> counts;
  for (CellIndex c = 0; c < schema->domain_size(); ++c) {
    counts.emplace_back(c, 10);
  }
  const Histogram h = Histogram::from_counts(schema, std::move(counts));
  const Workload w = select_state_workload(h, {});
  CHECK(attribute_sets(w) ==
        std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});
}

TEST_CASE("oversized cliques fall back to their best pair plus singletons") {
  // A=B=C perfectly correlated: one 3-clique with marginal size 8.
  const SchemaPtr schema = make_schema({{"A", 2}, {"B", 2}, {"C", 2}});
  const Histogram h = Histogram::from_counts(
      schema, {{0, 50}, {7, 50}});  // (0,0,0) and (1,1,1)
  SelectionOptions options;
  options.tau_edge = 0.1;
  options.max_marginal_cells = 7;  // excludes the full 3-way

  const Workload w = select_state_workload(h, options);
  const auto sets = attribute_sets(w);
  REQUIRE(sets.size() == 2);
  CHECK(sets[0] == std::vector<std::size_t>{0, 1});  // tie broken low-index
  CHECK(sets[1] == std::vector<std::size_t>{2});
  for (const auto& q : w.queries()) {
    CHECK(q.marginal_size() <= options.max_marginal_cells);
  }

  // A cap below pair size leaves only singletons.
  options.max_marginal_cells = 3;
  const auto singles = attribute_sets(select_state_workload(h, options));
  CHECK(singles ==
        std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});
}

TEST_CASE("group workload keeps approximately independent attributes") {
  const SchemaPtr schema = make_schema({{"A", 2}, {"B", 2}, {"C", 2}});
  const Histogram h = correlated_pair_fixture(schema);
  SelectionOptions options;
  options.tau_indep = 0.1;

  const Workload w = select_group_workload(h, options);
  CHECK(attribute_sets(w) == std::vector<std::vector<std::size_t>>{{0}, {2}});
}

TEST_CASE("group workload degenerate cases") {
  const SchemaPtr schema = make_schema({{"A", 2}, {"B", 2}});
  {
    // Fully correlated: only the greedy seed remains.
    const Histogram h = Histogram::from_counts(schema, {{0, 50}, {3, 50}});
    SelectionOptions options;
    options.tau_indep = 0.1;
    const Workload w = select_group_workload(h, options);
    CHECK(attribute_sets(w) == std::vector<std::vector<std::size_t>>{{0}});
  }
  {
    // Independent: all singletons.
    const Histogram h = Histogram::from_counts(
        schema, {{0, 25}, {1, 25}, {2, 25}, {3, 25}});
    const Workload w = select_group_workload(h, {});
    CHECK(attribute_sets(w) == std::vector<std::vector<std::size_t>>{{0}, {1}});
  }
}
