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

#include "mresynth/privacy.hpp"

#include <algorithm>
#include <cmath>

#include "mresynth/errors.hpp"

namespace mresynth {

namespace {

std::vector<std::string> split_scope(const std::string& scope) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= scope.size()) {
    std::size_t slash = scope.find('/', start);
    if (slash == std::string::npos) {
      parts.push_back(scope.substr(start));
      break;
    }
    parts.push_back(scope.substr(start, slash - start));
    start = slash + 1;
  }
  return parts;
}

// True when `outer` equals `inner` or is an ancestor path of it.
bool scope_contains(const std::vector<std::string>& outer,
                    const std::vector<std::string>& inner) {
  if (outer.size() > inner.size()) return false;
  return std::equal(outer.begin(), outer.end(), inner.begin());
}

}  // namespace

PrivacyParams PrivacyParams::make(double epsilon, std::uint32_t stability) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be positive and finite");
  }
  if (stability < 1) throw ConfigError("stability must be at least 1");
  return PrivacyParams{epsilon, stability};
}

void PrivacyLedger::charge(std::string scope, std::string label,
                           double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw BudgetError("privacy charge must be positive and finite");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  charges_.push_back({std::move(scope), std::move(label), epsilon});
}

double PrivacyLedger::total() const {
  std::vector<Charge> snapshot = charges();
  if (snapshot.empty()) return 0.0;
  std::vector<std::vector<std::string>> paths;
  paths.reserve(snapshot.size());
  for (const auto& c : snapshot) paths.push_back(split_scope(c.scope));

  // Leaves are scopes that contain no other charged scope strictly below
  // them; every charge on a leaf's ancestor chain composes sequentially,
  // and disjoint subtrees compose in parallel (max).
  double best = 0.0;
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    bool is_leaf = true;
    for (std::size_t j = 0; j < snapshot.size(); ++j) {
      if (paths[i].size() < paths[j].size() &&
          scope_contains(paths[i], paths[j])) {
        is_leaf = false;
        break;
      }
    }
    if (!is_leaf) continue;
    double along_path = 0.0;
    for (std::size_t j = 0; j < snapshot.size(); ++j) {
      if (scope_contains(paths[j], paths[i])) along_path += snapshot[j].epsilon;
    }
    best = std::max(best, along_path);
  }
  return best;
}

std::vector<PrivacyLedger::Charge> PrivacyLedger::charges() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return charges_;
}

double ledger_total(const PrivacyLedger& ledger) { return ledger.total(); }

void assert_budget(const PrivacyLedger& ledger, const PrivacyParams& params) {
  const double total = ledger.total();
  if (total > params.epsilon + 1e-12) {
    throw BudgetError("privacy budget overspent: ledger total " +
                      std::to_string(total) + " exceeds epsilon " +
                      std::to_string(params.epsilon));
  }
}

double laplace_inverse_cdf(double u, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("Laplace scale must be positive and finite");
  }
  if (!(u > 0.0) || !(u < 1.0)) {
    throw DataError("Laplace quantile requires u in (0, 1)");
  }
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(centered));
}

double laplace_sample(double scale, RngStream& rng) {
  return laplace_inverse_cdf(rng.next_unit_open(), scale);
}

std::uint64_t noisy_count(const Histogram& histogram,
                          const PrivacyParams& params, double epsilon0,
                          NoiseSource& noise, PrivacyLedger& ledger,
                          const std::string& scope) {
  if (!(epsilon0 > 0.0)) throw ConfigError("epsilon0 must be positive");
  const double scale = static_cast<double>(params.stability) / epsilon0;
  const double noisy =
      std::max(static_cast<double>(histogram.total()) + noise.laplace(scale),
               0.0);
  ledger.charge(scope, "count", epsilon0);
  // llround rounds halfway cases away from zero; the argument is >= 0.
  return static_cast<std::uint64_t>(std::llround(noisy));
}

std::vector<MarginalVector> noisy_workload_answer(
    const Workload& workload, const Histogram& histogram,
    const PrivacyParams& params, double epsilon0, std::uint64_t noisy_total,
    NoiseSource& noise, PrivacyLedger& ledger, const std::string& scope) {
  if (!(epsilon0 > 0.0)) throw ConfigError("epsilon0 must be positive");
  const double scale =
      static_cast<double>(workload_sensitivity(workload)) *
      static_cast<double>(params.stability) / epsilon0;
  std::vector<MarginalVector> answers;
  answers.reserve(workload.size());
  for (const auto& query : workload.queries()) {
    MarginalVector counts = evaluate_marginal(histogram, query);
    if (noisy_total == 0) {
      std::fill(counts.values.begin(), counts.values.end(), 0.0);
    } else {
      const double inv_total = 1.0 / static_cast<double>(noisy_total);
      for (double& v : counts.values) {
        v = (v + noise.laplace(scale)) * inv_total;
      }
    }
    answers.push_back(std::move(counts));
  }
  ledger.charge(scope, "workload", epsilon0);
  return answers;
}

}  // namespace mresynth
