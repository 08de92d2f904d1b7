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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mresynth/config.hpp"
#include "mresynth/csv.hpp"
#include "mresynth/errors.hpp"
#include "mresynth/estimation.hpp"
#include "mresynth/evaluation.hpp"
#include "mresynth/privacy.hpp"
#include "mresynth/report.hpp"
#include "mresynth/selection.hpp"
#include "mresynth/synthesis.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mresynth;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

RunConfig load_with_overrides(const CommonFlags& flags) {
  RunConfig config = load_run_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.threads) config.threads = *flags.threads;
  return config;
}

std::string require_path(const std::string& cli_value,
                         const std::string& config_value,
                         const std::string& what) {
  if (!cli_value.empty()) return cli_value;
  if (!config_value.empty()) return config_value;
  throw ConfigError("no path given for " + what +
                    " (set it in the config or pass the flag)");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
}

SynthesisOptions synthesis_options(const RunConfig& config, bool traces) {
  SynthesisOptions options;
  options.update.support_restriction = config.support_restriction;
  options.update.max_support_cells = config.max_support_cells;
  options.iterations = config.iterations;
  options.schedule_mode = config.schedule_mode;
  options.record_traces = traces;
  options.threads = config.threads;
  return options;
}

int run_select_workload(const CommonFlags& flags, const std::string& public_csv,
                        const std::string& out_state,
                        const std::string& out_group,
                        std::optional<double> tau_edge,
                        std::optional<double> tau_indep,
                        std::optional<std::uint64_t> max_cells) {
  RunConfig config = load_with_overrides(flags);
  if (tau_edge) config.selection.tau_edge = *tau_edge;
  if (tau_indep) config.selection.tau_indep = *tau_indep;
  if (max_cells) config.selection.max_marginal_cells = *max_cells;

  const std::string public_path =
      require_path(public_csv, config.paths.public_csv, "the public CSV");
  const GroupedData data =
      load_grouped_csv(public_path, config.schema, config.strict_ingest);
  const Histogram pooled = data.pooled();

  const Workload state_workload =
      select_state_workload(pooled, config.selection);
  const Workload group_workload =
      select_group_workload(pooled, config.selection);

  const std::string state_path =
      require_path(out_state, config.paths.workload_state,
                   "the state workload output");
  const std::string group_path =
      require_path(out_group, config.paths.workload_group,
                   "the group workload output");
  save_workload(state_path, state_workload);
  save_workload(group_path, group_workload);

  std::cout << "state workload (" << state_workload.size() << " marginals):";
  for (const auto& q : state_workload.queries()) std::cout << ' ' << q.describe();
  std::cout << "\ngroup workload (" << group_workload.size() << " marginals):";
  for (const auto& q : group_workload.queries()) std::cout << ' ' << q.describe();
  std::cout << "\nwrote " << state_path << " and " << group_path << "\n";
  return 0;
}

int run_synthesize(const CommonFlags& flags, const std::string& public_csv,
                   const std::string& private_csv,
                   const std::string& workload_state,
                   const std::string& workload_group,
                   const std::string& out_dir, bool traces,
                   bool uniform_prior) {
  const RunConfig config = load_with_overrides(flags);
  const std::string hash = config_hash(config);

  const GroupedData private_data = load_grouped_csv(
      require_path(private_csv, config.paths.private_csv, "the private CSV"),
      config.schema, config.strict_ingest);

  DensityDistribution prior = [&] {
    if (uniform_prior) {
      return DensityDistribution::uniform(config.schema,
                                          config.max_support_cells);
    }
    const GroupedData public_data = load_grouped_csv(
        require_path(public_csv, config.paths.public_csv, "the public CSV"),
        config.schema, config.strict_ingest);
    return normalize(public_data.pooled());
  }();

  const Workload state_workload = load_workload(
      require_path(workload_state, config.paths.workload_state,
                   "the state workload"),
      config.schema);
  const Workload group_workload = load_workload(
      require_path(workload_group, config.paths.workload_group,
                   "the group workload"),
      config.schema);
  const StateMap states = StateMap::from_prefixes(config.state_prefixes);

  PrivacyLedger ledger;
  const SynthesisResult result = synthesize(
      private_data, states, prior, state_workload, group_workload,
      config.privacy, synthesis_options(config, traces), ledger, config.seed);

  const std::string out =
      require_path(out_dir, config.paths.output_dir, "the output directory");
  fs::create_directories(out);
  write_synthetic_csv(out + "/synthetic.csv", result);

  RunReportInputs report;
  report.config_hash = hash;
  report.seed = config.seed;
  report.params = config.privacy;
  report.charges = ledger.charges();
  report.ledger_total = ledger.total();
  report.synthesis = &result;
  report.include_traces = traces;
  write_text(out + "/report.json", render_run_report(report));

  std::uint64_t rows = 0;
  for (const auto& group : result.groups) rows += group.cells.size();
  std::cout << "synthesized " << rows << " rows across "
            << result.groups.size() << " groups; ledger total "
            << report.ledger_total << " = epsilon " << config.privacy.epsilon
            << "\nwrote " << out << "/synthetic.csv and " << out
            << "/report.json\n";
  return 0;
}

int run_estimate(const CommonFlags& flags, const std::string& public_csv,
                 const std::string& private_csv, const std::string& workload_path,
                 const std::string& out_path) {
  const RunConfig config = load_with_overrides(flags);

  const GroupedData public_data = load_grouped_csv(
      require_path(public_csv, config.paths.public_csv, "the public CSV"),
      config.schema, config.strict_ingest);
  const GroupedData private_data = load_grouped_csv(
      require_path(private_csv, config.paths.private_csv, "the private CSV"),
      config.schema, config.strict_ingest);
  const Workload workload = load_workload(
      require_path(workload_path, config.paths.workload_state, "the workload"),
      config.schema);

  const DensityDistribution prior = normalize(public_data.pooled());
  const Histogram pooled = private_data.pooled();

  const double epsilon0 = config.privacy.epsilon0();
  const NoiseFactory noise(config.seed, false);
  PrivacyLedger ledger;
  const std::string scope = "estimate";

  auto count_noise = noise.make(scope + "/count");
  const std::uint64_t noisy_total = noisy_count(
      pooled, config.privacy, epsilon0, *count_noise, ledger, scope);
  auto answer_noise = noise.make(scope + "/workload");
  const std::vector<MarginalVector> answers =
      noisy_workload_answer(workload, pooled, config.privacy, epsilon0,
                            noisy_total, *answer_noise, ledger, scope);

  const std::uint32_t iterations =
      config.iterations > 0 ? config.iterations
                            : static_cast<std::uint32_t>(2 * workload.size());
  UpdateSchedule schedule{config.schedule_mode, iterations};
  UpdateOptions update;
  update.support_restriction = config.support_restriction;
  update.max_support_cells = config.max_support_cells;
  RngStream schedule_rng = noise.stream(scope + "/schedule");
  const IdeResult estimate =
      ide(workload, answers, prior, schedule, update,
          schedule.mode == UpdateSchedule::Mode::kSeededRandom ? &schedule_rng
                                                               : nullptr);

  EstimateReportInputs report;
  report.config_hash = config_hash(config);
  report.seed = config.seed;
  report.params = config.privacy;
  report.charges = ledger.charges();
  report.ledger_total = ledger.total();
  report.noisy_total = noisy_total;
  report.distribution = &estimate.distribution;
  report.prior = &prior;
  report.final_loss = workload_l1_loss(estimate.distribution, workload, answers);
  report.trace = estimate.trace;

  const std::string out = out_path.empty() ? "estimate.json" : out_path;
  write_text(out, render_estimate_report(report));
  std::cout << "estimated distribution over " << estimate.distribution.support_size()
            << " support cells; final workload L1 loss " << report.final_loss
            << "\nwrote " << out << "\n";
  return 0;
}

int run_evaluate(const CommonFlags& flags, const std::string& synthetic_csv,
                 const std::string& truth_csv, const std::string& out_json,
                 const std::string& out_csv,
                 std::optional<std::uint32_t> repetitions,
                 std::optional<std::uint64_t> eval_seed) {
  const RunConfig config = load_with_overrides(flags);

  const GroupedData synthetic =
      load_grouped_csv(synthetic_csv, config.schema, config.strict_ingest);
  const GroupedData truth =
      load_grouped_csv(truth_csv, config.schema, config.strict_ingest);

  EvalOptions options;
  options.repetitions = repetitions.value_or(config.eval_repetitions);
  options.bias_threshold = config.bias_threshold;
  options.threads = config.threads;
  const std::uint64_t seed = eval_seed.value_or(config.seed);

  const EvalReport report = contest_error(synthetic, truth, options, seed);
  if (!out_json.empty()) {
    write_text(out_json, render_eval_report(report, config_hash(config)));
  }
  if (!out_csv.empty()) write_eval_csv(out_csv, report);

  std::cout << "overall error " << report.overall << " across "
            << report.groups.size() << " groups";
  std::size_t penalized = 0;
  for (const auto& g : report.groups) penalized += g.penalized ? 1 : 0;
  std::cout << " (" << penalized << " bias-penalized)\n";
  return 0;
}

int run_audit(const std::string& report_path) {
  const BudgetAudit audit = audit_budget_report(report_path);
  std::cout << "epsilon " << audit.epsilon << ", reported total "
            << audit.reported_total << ", recomputed total "
            << audit.recomputed_total << "\n";
  if (!audit.ok) {
    throw BudgetError("budget audit failed for " + report_path);
  }
  std::cout << "budget audit ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mresynth: differentially private synthetic tabular data via "
      "minimum-relative-entropy distribution estimation"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::uint64_t seed_value = 0;
  unsigned threads_value = 0;
  std::vector<std::pair<CLI::Option*, std::function<void()>>> deferred;

  // The vendored CLI11 has no std::optional bindings; options parse into
  // plain values and the optionals are materialized after parse for the
  // ones actually given.
  auto when_given = [&](CLI::Option* option, std::function<void()> apply) {
    deferred.emplace_back(option, std::move(apply));
  };
  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", flags.config_path,
                                "run configuration (JSON)");
    if (needs_config) opt->required();
    when_given(cmd->add_option("--seed", seed_value, "master seed override"),
               [&] { flags.seed = seed_value; });
    when_given(cmd->add_option("--threads", threads_value,
                               "worker threads (0 = all cores)"),
               [&] { flags.threads = threads_value; });
  };

  // select-workload
  std::string public_csv, out_state, out_group;
  std::optional<double> tau_edge, tau_indep;
  std::optional<std::uint64_t> max_cells;
  double tau_edge_value = 0, tau_indep_value = 0;
  std::uint64_t max_cells_value = 0;
  auto* select = app.add_subcommand(
      "select-workload",
      "pick state/group marginal workloads from the public data");
  add_common(select);
  select->add_option("--public", public_csv, "public dataset CSV");
  select->add_option("--out-state", out_state, "state workload output file");
  select->add_option("--out-group", out_group, "group workload output file");
  when_given(
      select->add_option("--tau-edge", tau_edge_value,
                         "MI edge threshold (nats)"),
      [&] { tau_edge = tau_edge_value; });
  when_given(select->add_option("--tau-indep", tau_indep_value,
                                "MI independence threshold (nats)"),
             [&] { tau_indep = tau_indep_value; });
  when_given(select->add_option("--max-marginal-cells", max_cells_value,
                                "largest allowed marginal domain"),
             [&] { max_cells = max_cells_value; });

  // synthesize
  std::string private_csv, workload_state, workload_group, out_dir;
  bool traces = false, uniform_prior = false;
  auto* synth = app.add_subcommand(
      "synthesize", "run the full private synthesis pipeline");
  add_common(synth);
  synth->add_option("--public", public_csv, "public dataset CSV");
  synth->add_option("--private", private_csv, "private dataset CSV");
  synth->add_option("--workload-state", workload_state,
                    "state workload file");
  synth->add_option("--workload-group", workload_group,
                    "group workload file");
  synth->add_option("--out-dir", out_dir, "output directory");
  synth->add_flag("--trace", traces, "include per-group IDE traces");
  synth->add_flag("--uniform-prior", uniform_prior,
                  "replace the public prior with a uniform distribution");

  // estimate
  std::string workload_path, estimate_out;
  auto* estimate = app.add_subcommand(
      "estimate", "single IDE run on one dataset/workload (research mode)");
  add_common(estimate);
  estimate->add_option("--public", public_csv, "public dataset CSV");
  estimate->add_option("--private", private_csv, "private dataset CSV");
  estimate->add_option("--workload", workload_path, "workload file");
  estimate->add_option("--out", estimate_out, "report output path");

  // evaluate
  std::string synthetic_csv, truth_csv, eval_json, eval_csv;
  std::optional<std::uint32_t> repetitions;
  std::optional<std::uint64_t> eval_seed;
  std::uint32_t repetitions_value = 0;
  std::uint64_t eval_seed_value = 0;
  auto* evaluate = app.add_subcommand(
      "evaluate", "contest error between two datasets");
  add_common(evaluate);
  evaluate->add_option("--synthetic", synthetic_csv, "synthetic CSV")
      ->required();
  evaluate->add_option("--truth", truth_csv, "ground-truth CSV")->required();
  evaluate->add_option("--out-json", eval_json, "JSON report path");
  evaluate->add_option("--out-csv", eval_csv, "flat CSV report path");
  when_given(evaluate->add_option("--repetitions", repetitions_value,
                                  "random attribute pairs per group"),
             [&] { repetitions = repetitions_value; });
  when_given(evaluate->add_option("--eval-seed", eval_seed_value,
                                  "evaluation seed"),
             [&] { eval_seed = eval_seed_value; });

  // audit-budget
  std::string report_path;
  auto* audit = app.add_subcommand(
      "audit-budget", "recompute a run report's ledger total");
  audit->add_option("--report", report_path, "run report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorClass::kConfig);
  }
  for (const auto& [option, apply] : deferred) {
    if (option->count() > 0) apply();
  }

  try {
    if (app.got_subcommand(select)) {
      return run_select_workload(flags, public_csv, out_state, out_group,
                                 tau_edge, tau_indep, max_cells);
    }
    if (app.got_subcommand(synth)) {
      return run_synthesize(flags, public_csv, private_csv, workload_state,
                            workload_group, out_dir, traces, uniform_prior);
    }
    if (app.got_subcommand(estimate)) {
      return run_estimate(flags, public_csv, private_csv, workload_path,
                          estimate_out);
    }
    if (app.got_subcommand(evaluate)) {
      return run_evaluate(flags, synthetic_csv, truth_csv, eval_json, eval_csv,
                          repetitions, eval_seed);
    }
    if (app.got_subcommand(audit)) {
      return run_audit(report_path);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorClass::kInternal);
  }
  return 0;
}
