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

#include "mresynth/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mresynth/errors.hpp"
#include "mresynth/parallel.hpp"

namespace mresynth {

namespace {

// L1 distance between the two sides' empirical pair marginals, each
// normalized by its own group total; an empty side is the all-zero vector.
double pair_distance(const Histogram* synthetic, const Histogram* truth,
                     const MarginalQuery& query) {
  std::vector<double> lhs(query.marginal_size(), 0.0);
  std::vector<double> rhs(query.marginal_size(), 0.0);
  if (synthetic != nullptr && synthetic->total() > 0) {
    lhs = evaluate_marginal(*synthetic, query).values;
    const double n = static_cast<double>(synthetic->total());
    for (double& v : lhs) v /= n;
  }
  if (truth != nullptr && truth->total() > 0) {
    rhs = evaluate_marginal(*truth, query).values;
    const double n = static_cast<double>(truth->total());
    for (double& v : rhs) v /= n;
  }
  double distance = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    distance += std::abs(lhs[i] - rhs[i]);
  }
  return distance;
}

}  // namespace

EvalReport contest_error(const GroupedData& synthetic,
                         const GroupedData& truth, const EvalOptions& options,
                         std::uint64_t seed) {
  if (options.repetitions < 1) {
    throw ConfigError("evaluation repetitions must be at least 1");
  }
  if (!same_schema(synthetic.schema, truth.schema)) {
    throw DataError("evaluation requires matching schemas");
  }
  const SchemaPtr& schema = truth.schema ? truth.schema : synthetic.schema;
  const std::size_t m = schema->attribute_count();
  if (m < 2) {
    throw ConfigError("evaluation needs at least two attributes");
  }

  std::set<GroupKey> keys;
  for (const auto& [key, hist] : synthetic.groups) keys.insert(key);
  for (const auto& [key, hist] : truth.groups) keys.insert(key);
  const std::vector<GroupKey> ordered(keys.begin(), keys.end());

  EvalReport report;
  report.groups.resize(ordered.size());
  report.repetitions = options.repetitions;
  report.seed = seed;

  parallel_for(ordered.size(), options.threads, [&](std::size_t i) {
    const GroupKey& key = ordered[i];
    auto synth_it = synthetic.groups.find(key);
    auto truth_it = truth.groups.find(key);
    const Histogram* synth_hist =
        synth_it == synthetic.groups.end() ? nullptr : &synth_it->second;
    const Histogram* truth_hist =
        truth_it == truth.groups.end() ? nullptr : &truth_it->second;

    GroupEval eval;
    eval.key = key;
    eval.synthetic_count = synth_hist ? synth_hist->total() : 0;
    eval.truth_count = truth_hist ? truth_hist->total() : 0;

    const double deviation =
        std::abs(static_cast<double>(eval.synthetic_count) -
                 static_cast<double>(eval.truth_count));
    if (deviation > options.bias_threshold) {
      eval.error = 2.0;
      eval.penalized = true;
    } else {
      // One pair stream per group, applied to both sides.
      RngStream rng(seed, "eval/group/" + key.to_string());
      double sum = 0.0;
      for (std::uint32_t r = 0; r < options.repetitions; ++r) {
        const std::size_t a = static_cast<std::size_t>(rng.next_below(m));
        std::size_t b = static_cast<std::size_t>(rng.next_below(m - 1));
        if (b >= a) ++b;
        const MarginalQuery query = MarginalQuery::over(
            schema, {std::min(a, b), std::max(a, b)});
        sum += pair_distance(synth_hist, truth_hist, query);
      }
      eval.error = sum / options.repetitions;
    }
    report.groups[i] = std::move(eval);
  });

  double total = 0.0;
  for (const auto& g : report.groups) total += g.error;
  report.overall = report.groups.empty() ? 0.0 : total / report.groups.size();
  return report;
}

}  // namespace mresynth
