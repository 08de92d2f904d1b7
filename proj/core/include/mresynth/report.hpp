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

#ifndef MRESYNTH_REPORT_HPP_
#define MRESYNTH_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mresynth/estimation.hpp"
#include "mresynth/evaluation.hpp"
#include "mresynth/privacy.hpp"
#include "mresynth/synthesis.hpp"

namespace mresynth {

// Inputs for the synthesize run report. Charges are sorted on output so
// the report is byte-stable across thread schedules; no wall-clock data is
// included for the same reason.
struct RunReportInputs {
  std::string config_hash;
  std::uint64_t seed = 0;
  PrivacyParams params;
  std::vector<PrivacyLedger::Charge> charges;
  double ledger_total = 0.0;
  const SynthesisResult* synthesis = nullptr;
  bool include_traces = false;
};

std::string render_run_report(const RunReportInputs& inputs);

struct BudgetAudit {
  double epsilon = 0.0;
  double reported_total = 0.0;
  double recomputed_total = 0.0;
  bool ok = false;
};

// Re-reads a run report, rebuilds the ledger from its charges, and checks
// that the recomputed total matches both the reported total and epsilon.
BudgetAudit audit_budget_report(const std::string& path);

std::string render_eval_report(const EvalReport& report,
                               const std::string& config_hash);

// Research-mode summary of a single estimation run.
struct EstimateReportInputs {
  std::string config_hash;
  std::uint64_t seed = 0;
  PrivacyParams params;
  std::vector<PrivacyLedger::Charge> charges;
  double ledger_total = 0.0;
  std::uint64_t noisy_total = 0;
  const DensityDistribution* distribution = nullptr;
  const DensityDistribution* prior = nullptr;
  double final_loss = 0.0;
  EstimationTrace trace;
  std::size_t top_cells = 50;
};

std::string render_estimate_report(const EstimateReportInputs& inputs);

}  // namespace mresynth

#endif  // MRESYNTH_REPORT_HPP_
