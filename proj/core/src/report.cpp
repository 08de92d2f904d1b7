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

#include "mresynth/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mresynth/errors.hpp"

namespace mresynth {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json charges_json(std::vector<PrivacyLedger::Charge> charges) {
  std::sort(charges.begin(), charges.end(),
            [](const PrivacyLedger::Charge& a, const PrivacyLedger::Charge& b) {
              if (a.scope != b.scope) return a.scope < b.scope;
              return a.label < b.label;
            });
  ordered_json list = ordered_json::array();
  for (const auto& charge : charges) {
    list.push_back({{"scope", charge.scope},
                    {"label", charge.label},
                    {"epsilon", charge.epsilon}});
  }
  return list;
}

ordered_json trace_json(const EstimationTrace& trace) {
  ordered_json list = ordered_json::array();
  for (const auto& record : trace) {
    list.push_back({{"query", record.query_index},
                    {"pre_update_loss", record.pre_update_loss},
                    {"post_update_kl", record.post_update_kl}});
  }
  return list;
}

}  // namespace

std::string render_run_report(const RunReportInputs& inputs) {
  ordered_json doc;
  doc["report_version"] = 1;
  doc["config_hash"] = inputs.config_hash;
  doc["seed"] = inputs.seed;
  doc["privacy"] = {{"epsilon", inputs.params.epsilon},
                    {"epsilon0", inputs.params.epsilon0()},
                    {"stability", inputs.params.stability}};
  doc["ledger"] = {{"total", inputs.ledger_total},
                   {"charges", charges_json(inputs.charges)}};
  if (inputs.synthesis != nullptr) {
    ordered_json groups = ordered_json::array();
    for (const auto& group : inputs.synthesis->groups) {
      ordered_json g;
      g["puma"] = group.key.puma;
      g["year"] = group.key.year;
      g["state"] = group.state;
      g["noisy_count"] = group.noisy_count;
      g["rows"] = group.cells.size();
      if (inputs.include_traces) g["trace"] = trace_json(group.trace);
      groups.push_back(std::move(g));
    }
    doc["groups"] = std::move(groups);
  }
  return doc.dump(2) + "\n";
}

BudgetAudit audit_budget_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report: " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed report " + path + ": " + e.what());
  }

  BudgetAudit audit;
  try {
    audit.epsilon = doc.at("privacy").at("epsilon").get<double>();
    audit.reported_total = doc.at("ledger").at("total").get<double>();
    PrivacyLedger ledger;
    for (const auto& charge : doc.at("ledger").at("charges")) {
      ledger.charge(charge.at("scope").get<std::string>(),
                    charge.at("label").get<std::string>(),
                    charge.at("epsilon").get<double>());
    }
    audit.recomputed_total = ledger.total();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("report " + path + " missing budget fields: " + e.what());
  }
  audit.ok = std::abs(audit.recomputed_total - audit.epsilon) <= 1e-12 &&
             std::abs(audit.recomputed_total - audit.reported_total) <= 1e-12;
  return audit;
}

std::string render_eval_report(const EvalReport& report,
                               const std::string& config_hash) {
  ordered_json doc;
  doc["report_version"] = 1;
  if (!config_hash.empty()) doc["config_hash"] = config_hash;
  doc["seed"] = report.seed;
  doc["repetitions"] = report.repetitions;
  doc["overall_error"] = report.overall;
  ordered_json groups = ordered_json::array();
  for (const auto& group : report.groups) {
    groups.push_back({{"puma", group.key.puma},
                      {"year", group.key.year},
                      {"error", group.error},
                      {"penalized", group.penalized},
                      {"synthetic_count", group.synthetic_count},
                      {"truth_count", group.truth_count}});
  }
  doc["groups"] = std::move(groups);
  return doc.dump(2) + "\n";
}

std::string render_estimate_report(const EstimateReportInputs& inputs) {
  ordered_json doc;
  doc["report_version"] = 1;
  doc["config_hash"] = inputs.config_hash;
  doc["seed"] = inputs.seed;
  doc["privacy"] = {{"epsilon", inputs.params.epsilon},
                    {"epsilon0", inputs.params.epsilon0()},
                    {"stability", inputs.params.stability}};
  doc["ledger"] = {{"total", inputs.ledger_total},
                   {"charges", charges_json(inputs.charges)}};
  doc["noisy_count"] = inputs.noisy_total;
  if (inputs.distribution != nullptr) {
    doc["support_size"] = inputs.distribution->support_size();
    doc["workload_l1_loss"] = inputs.final_loss;
    if (inputs.prior != nullptr) {
      doc["kl_to_prior"] = kl_divergence(*inputs.distribution, *inputs.prior);
    }
    ordered_json top = ordered_json::array();
    std::vector<DensityDistribution::Entry> cells(
        inputs.distribution->entries().begin(),
        inputs.distribution->entries().end());
    std::stable_sort(cells.begin(), cells.end(),
                     [](const auto& a, const auto& b) {
                       return a.second > b.second;
                     });
    const std::size_t limit = std::min(inputs.top_cells, cells.size());
    for (std::size_t i = 0; i < limit; ++i) {
      top.push_back(
          {{"values", inputs.distribution->schema()->decode(cells[i].first)},
           {"mass", cells[i].second}});
    }
    doc["top_cells"] = std::move(top);
  }
  doc["trace"] = trace_json(inputs.trace);
  return doc.dump(2) + "\n";
}

}  // namespace mresynth
