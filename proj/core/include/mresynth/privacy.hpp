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

#ifndef MRESYNTH_PRIVACY_HPP_
#define MRESYNTH_PRIVACY_HPP_

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mresynth/histogram.hpp"
#include "mresynth/rng.hpp"
#include "mresynth/workload.hpp"

namespace mresynth {

struct PrivacyParams {
  double epsilon = 0.0;     // total budget
  std::uint32_t stability = 1;  // max records attributable to one individual

  double epsilon0() const { return epsilon / 4.0; }

  static PrivacyParams make(double epsilon, std::uint32_t stability);
};

// Epsilon-DP composition ledger. Scopes are slash-separated paths naming
// nested data partitions (e.g. "state/OH" contains
// "state/OH/group/01701:2014"). Charges compose sequentially along a path
// and in parallel across sibling subtrees, so the total is the maximum
// over leaf scopes of the sum of charges on the leaf's path.
class PrivacyLedger {
 public:
  struct Charge {
    std::string scope;
    std::string label;
    double epsilon = 0.0;
  };

  void charge(std::string scope, std::string label, double epsilon);
  double total() const;
  std::vector<Charge> charges() const;

 private:
  mutable std::mutex mutex_;
  std::vector<Charge> charges_;
};

double ledger_total(const PrivacyLedger& ledger);

// Throws BudgetError when the ledger total exceeds epsilon + 1e-12.
void assert_budget(const PrivacyLedger& ledger, const PrivacyParams& params);

// Laplace(0, scale) quantile at u in (0, 1); u = 0.5 maps to 0.
double laplace_inverse_cdf(double u, double scale);

// One Laplace(0, scale) draw via inverse CDF on one uniform draw.
double laplace_sample(double scale, RngStream& rng);

// Noise injection point; tests substitute fixed or zero noise here.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual double laplace(double scale) = 0;
};

class StreamNoise final : public NoiseSource {
 public:
  explicit StreamNoise(RngStream rng) : rng_(std::move(rng)) {}
  double laplace(double scale) override { return laplace_sample(scale, rng_); }

 private:
  RngStream rng_;
};

class ZeroNoise final : public NoiseSource {
 public:
  double laplace(double) override { return 0.0; }
};

// n~ = round(max(total + Laplace(stability/epsilon0), 0)), rounding half
// away from zero; charges epsilon0 to the scope.
std::uint64_t noisy_count(const Histogram& histogram,
                          const PrivacyParams& params, double epsilon0,
                          NoiseSource& noise, PrivacyLedger& ledger,
                          const std::string& scope);

// Per-query marginal counts with i.i.d. Laplace(sensitivity * stability /
// epsilon0) per entry, then divided by noisy_total; all-zero when
// noisy_total is 0 (the group is indistinguishable from empty). Charges
// epsilon0 to the scope.
std::vector<MarginalVector> noisy_workload_answer(
    const Workload& workload, const Histogram& histogram,
    const PrivacyParams& params, double epsilon0, std::uint64_t noisy_total,
    NoiseSource& noise, PrivacyLedger& ledger, const std::string& scope);

}  // namespace mresynth

#endif  // MRESYNTH_PRIVACY_HPP_
