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

#include <benchmark/benchmark.h>

#include <vector>

#include "mresynth/estimation.hpp"
#include "mresynth/projection.hpp"
#include "mresynth/rng.hpp"
#include "mresynth/schema.hpp"
#include "mresynth/selection.hpp"
#include "mresynth/synthesis.hpp"

namespace {

using namespace mresynth;

SchemaPtr bench_schema() {
  std::vector<Attribute> attrs;
  for (std::size_t i = 0; i < 8; ++i) {
    Attribute attr;
    attr.name = "a" + std::to_string(i);
    const std::size_t size = 2 + (i * 3) % 9;
    for (std::size_t v = 0; v < size; ++v) {
      attr.labels.push_back("v" + std::to_string(v));
    }
    attrs.push_back(std::move(attr));
  }
  return std::make_shared<const Schema>(Schema::from_attributes(attrs));
}

DensityDistribution sparse_distribution(const SchemaPtr& schema,
                                        std::size_t support) {
  RngStream rng(99, "bench/dist");
  std::vector<DensityDistribution::Entry> weights;
  weights.reserve(support);
  for (std::size_t i = 0; i < support; ++i) {
    weights.emplace_back(rng.next_below(schema->domain_size()),
                         0.1 + rng.next_unit_open());
  }
  return DensityDistribution::from_weights(schema, std::move(weights));
}

void BM_ProjectFull(benchmark::State& state) {
  RngStream rng(1, "bench/proj");
  std::vector<double> noisy(state.range(0));
  for (double& v : noisy) v = -0.5 + 2.0 * rng.next_unit_open();
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_full(noisy));
  }
}
BENCHMARK(BM_ProjectFull)->Arg(16)->Arg(256)->Arg(4096);

void BM_EvaluateMarginal(benchmark::State& state) {
  const SchemaPtr schema = bench_schema();
  const auto dist = sparse_distribution(schema, state.range(0));
  const auto query = MarginalQuery::over(schema, {1, 4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_marginal(dist, query));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvaluateMarginal)->Range(1 << 10, 1 << 17)->Complexity();

void BM_UpdateDistribution(benchmark::State& state) {
  const SchemaPtr schema = bench_schema();
  const auto dist = sparse_distribution(schema, state.range(0));
  const auto query = MarginalQuery::over(schema, {2, 5});
  const auto target = project_full(evaluate_marginal(dist, query).values);
  for (auto _ : state) {
    benchmark::DoNotOptimize(update_distribution(dist, query, target.values));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UpdateDistribution)->Range(1 << 10, 1 << 17)->Complexity();

void BM_IdeRoundRobin(benchmark::State& state) {
  const SchemaPtr schema = bench_schema();
  const auto prior = sparse_distribution(schema, 20'000);
  const auto truth = sparse_distribution(schema, 20'000);
  std::vector<MarginalQuery> queries;
  for (std::size_t a = 0; a < 5; ++a) {
    queries.push_back(MarginalQuery::over(schema, {a}));
  }
  const auto workload = Workload::of(std::move(queries));
  std::vector<MarginalVector> answers;
  for (const auto& q : workload.queries()) {
    answers.push_back(evaluate_marginal(truth, q));
  }
  UpdateSchedule schedule{UpdateSchedule::Mode::kRoundRobin,
                          static_cast<std::uint32_t>(state.range(0))};
  UpdateOptions options;
  options.record_trace = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ide(workload, answers, prior, schedule, options));
  }
}
BENCHMARK(BM_IdeRoundRobin)->Arg(10)->Arg(40);

void BM_SampleCells(benchmark::State& state) {
  const SchemaPtr schema = bench_schema();
  const auto dist = sparse_distribution(schema, 50'000);
  for (auto _ : state) {
    RngStream rng(7, "bench/sample");
    benchmark::DoNotOptimize(sample_cells(dist, state.range(0), rng));
  }
}
BENCHMARK(BM_SampleCells)->Arg(1'000)->Arg(10'000);

void BM_MutualInformation(benchmark::State& state) {
  const SchemaPtr schema = bench_schema();
  RngStream rng(5, "bench/mi");
  std::vector<Histogram::Entry> counts;
  for (int i = 0; i < 50'000; ++i) {
    counts.emplace_back(rng.next_below(schema->domain_size()), 1);
  }
  const Histogram hist = Histogram::from_counts(schema, std::move(counts));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mutual_information(hist, 1, 6));
  }
}
BENCHMARK(BM_MutualInformation);

}  // namespace

BENCHMARK_MAIN();
