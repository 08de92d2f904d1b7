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

#include "mresynth/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mresynth/errors.hpp"

namespace mresynth {

double mutual_information(const Histogram& data, std::size_t attr_a,
                          std::size_t attr_b) {
  if (attr_a == attr_b) {
    throw ConfigError("mutual information requires two distinct attributes");
  }
  if (data.total() == 0) {
    throw DataError("mutual information of an empty histogram");
  }
  const SchemaPtr& schema = data.schema();
  const MarginalQuery joint =
      MarginalQuery::over(schema, {attr_a, attr_b});
  const MarginalVector counts = evaluate_marginal(data, joint);
  const std::size_t lo = std::min(attr_a, attr_b);
  const std::size_t hi = std::max(attr_a, attr_b);
  const std::uint64_t size_lo = schema->attribute_size(lo);
  const std::uint64_t size_hi = schema->attribute_size(hi);

  std::vector<double> margin_lo(size_lo, 0.0), margin_hi(size_hi, 0.0);
  const double n = static_cast<double>(data.total());
  for (std::uint64_t a = 0; a < size_lo; ++a) {
    for (std::uint64_t b = 0; b < size_hi; ++b) {
      const double p = counts.values[a * size_hi + b] / n;
      margin_lo[a] += p;
      margin_hi[b] += p;
    }
  }
  double mi = 0.0;
  for (std::uint64_t a = 0; a < size_lo; ++a) {
    for (std::uint64_t b = 0; b < size_hi; ++b) {
      const double p = counts.values[a * size_hi + b] / n;
      if (p > 0.0) mi += p * std::log(p / (margin_lo[a] * margin_hi[b]));
    }
  }
  return std::max(mi, 0.0);
}

MiGraph MiGraph::compute(const Histogram& data) {
  MiGraph g;
  g.m_ = data.schema()->attribute_count();
  g.mi_.assign(g.m_ * g.m_, 0.0);
  for (std::size_t a = 0; a < g.m_; ++a) {
    for (std::size_t b = a + 1; b < g.m_; ++b) {
      const double mi = mutual_information(data, a, b);
      g.mi_[a * g.m_ + b] = mi;
      g.mi_[b * g.m_ + a] = mi;
    }
  }
  return g;
}

namespace {

void bron_kerbosch(const std::vector<std::vector<bool>>& adj,
                   std::vector<std::size_t>& current,
                   std::vector<std::size_t> candidates,
                   std::vector<std::size_t> excluded,
                   std::vector<std::vector<std::size_t>>& cliques) {
  if (candidates.empty() && excluded.empty()) {
    cliques.push_back(current);
    return;
  }
  // Iterate over a copy since candidates shrinks as we recurse.
  const std::vector<std::size_t> order = candidates;
  for (std::size_t v : order) {
    std::vector<std::size_t> next_candidates, next_excluded;
    for (std::size_t u : candidates) {
      if (adj[v][u]) next_candidates.push_back(u);
    }
    for (std::size_t u : excluded) {
      if (adj[v][u]) next_excluded.push_back(u);
    }
    current.push_back(v);
    bron_kerbosch(adj, current, std::move(next_candidates),
                  std::move(next_excluded), cliques);
    current.pop_back();
    candidates.erase(std::find(candidates.begin(), candidates.end(), v));
    excluded.push_back(v);
  }
}

std::uint64_t marginal_cells(const SchemaPtr& schema,
                             const std::vector<std::size_t>& attrs) {
  std::uint64_t size = 1;
  for (std::size_t a : attrs) size *= schema->attribute_size(a);
  return size;
}

}  // namespace

std::vector<std::vector<std::size_t>> MiGraph::maximal_cliques(
    double tau_edge) const {
  std::vector<std::vector<bool>> adj(m_, std::vector<bool>(m_, false));
  for (std::size_t a = 0; a < m_; ++a) {
    for (std::size_t b = a + 1; b < m_; ++b) {
      if (at(a, b) >= tau_edge) adj[a][b] = adj[b][a] = true;
    }
  }
  std::vector<std::size_t> vertices(m_);
  for (std::size_t i = 0; i < m_; ++i) vertices[i] = i;
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> current;
  bron_kerbosch(adj, current, std::move(vertices), {}, cliques);
  for (auto& c : cliques) std::sort(c.begin(), c.end());
  return cliques;
}

Workload select_state_workload(const Histogram& public_data,
                               const SelectionOptions& options) {
  const SchemaPtr& schema = public_data.schema();
  if (schema->attribute_count() < 2) {
    throw ConfigError("state workload selection needs at least 2 attributes");
  }
  const MiGraph graph = MiGraph::compute(public_data);
  auto cliques = graph.maximal_cliques(options.tau_edge);

  auto clique_weight = [&](const std::vector<std::size_t>& c) {
    double w = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        if (graph.at(c[i], c[j]) >= options.tau_edge) w += graph.at(c[i], c[j]);
      }
    }
    return w;
  };
  std::stable_sort(cliques.begin(), cliques.end(),
                   [&](const auto& a, const auto& b) {
                     const double wa = clique_weight(a), wb = clique_weight(b);
                     if (wa != wb) return wa > wb;
                     return a < b;
                   });

  std::vector<std::vector<std::size_t>> chosen;
  std::set<std::vector<std::size_t>> chosen_sets;
  std::vector<bool> covered(schema->attribute_count(), false);
  auto accept = [&](std::vector<std::size_t> attrs) {
    if (!chosen_sets.insert(attrs).second) return;
    for (std::size_t a : attrs) covered[a] = true;
    chosen.push_back(std::move(attrs));
  };

  for (const auto& clique : cliques) {
    if (marginal_cells(schema, clique) <= options.max_marginal_cells) {
      accept(clique);
      continue;
    }
    // Too large: fall back to the clique's highest-MI pair that fits; the
    // remaining attributes are caught by the singleton coverage pass.
    std::vector<std::size_t> best_pair;
    double best_mi = -1.0;
    for (std::size_t i = 0; i < clique.size(); ++i) {
      for (std::size_t j = i + 1; j < clique.size(); ++j) {
        std::vector<std::size_t> pair{clique[i], clique[j]};
        if (marginal_cells(schema, pair) > options.max_marginal_cells) continue;
        if (graph.at(pair[0], pair[1]) > best_mi) {
          best_mi = graph.at(pair[0], pair[1]);
          best_pair = std::move(pair);
        }
      }
    }
    if (!best_pair.empty()) accept(std::move(best_pair));
  }

  for (std::size_t a = 0; a < schema->attribute_count(); ++a) {
    if (covered[a]) continue;
    if (schema->attribute_size(a) > options.max_marginal_cells) {
      throw ConfigError("attribute '" + schema->attribute(a).name +
                        "' alone exceeds max_marginal_cells");
    }
    accept({a});
  }

  std::vector<MarginalQuery> queries;
  queries.reserve(chosen.size());
  for (auto& attrs : chosen) {
    queries.push_back(MarginalQuery::over(schema, std::move(attrs)));
  }
  return Workload::of(std::move(queries));
}

Workload select_group_workload(const Histogram& public_data,
                               const SelectionOptions& options) {
  const SchemaPtr& schema = public_data.schema();
  const std::size_t m = schema->attribute_count();
  if (m == 0) throw ConfigError("schema has no attributes");

  std::vector<std::size_t> selected{0};  // greedy seed: first attribute
  if (m > 1) {
    const MiGraph graph = MiGraph::compute(public_data);
    std::vector<bool> in_selected(m, false);
    in_selected[0] = true;
    for (;;) {
      std::size_t best = m;
      double best_score = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        if (in_selected[c]) continue;
        double score = 0.0;
        for (std::size_t s : selected) score = std::max(score, graph.at(c, s));
        if (best == m || score < best_score) {
          best = c;
          best_score = score;
        }
      }
      if (best == m || best_score >= options.tau_indep) break;
      selected.push_back(best);
      in_selected[best] = true;
    }
    std::sort(selected.begin(), selected.end());
  }

  std::vector<MarginalQuery> queries;
  queries.reserve(selected.size());
  for (std::size_t a : selected) {
    queries.push_back(MarginalQuery::over(schema, {a}));
  }
  return Workload::of(std::move(queries));
}

}  // namespace mresynth
