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
//
// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// the process exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "contest_fixture.hpp"
#include "dense_reference.hpp"
#include "fixtures.hpp"
#include "kl_oracle.hpp"
#include "lp_reference.hpp"
#include "mresynth/config.hpp"
#include "mresynth/csv.hpp"
#include "mresynth/estimation.hpp"
#include "mresynth/evaluation.hpp"
#include "mresynth/report.hpp"
#include "mresynth/selection.hpp"
#include "mresynth/synthesis.hpp"

using namespace mresynth;
using namespace mresynth::testsupport;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  const std::string command = std::string(MRESYNTH_CLI_PATH) + " " + args;
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// ---------------------------------------------------------------------------
// Criterion 1: the closed-form update matches a brute-force constrained KL
// minimizer, and no random feasible point has lower relative entropy.
Outcome criterion_theorem1() {
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(1001, "acceptance/theorem1");
  double worst_cell_gap = 0.0;
  long long beaten = 0;

  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t size_a = 2 + rng.next_below(3);  // 2..4
    const std::size_t size_b = 2 + rng.next_below(2);  // 2..3
    const SchemaPtr schema = make_schema({{"A", size_a}, {"B", size_b}});
    const auto prior = random_full_distribution(schema, rng);
    const auto query = MarginalQuery::over(schema, {rng.next_below(2)});

    std::vector<double> target =
        random_point_on_simplex(query.marginal_size(), 0.8, rng);
    for (double& t : target) t += 0.2 / target.size();

    const auto updated = update_distribution(prior, query, target);

    const std::uint64_t n = schema->domain_size();
    std::vector<double> dense_prior(n), dense_updated(n);
    std::vector<std::size_t> blocks(n);
    for (CellIndex c = 0; c < n; ++c) {
      dense_prior[c] = prior.mass_at(c);
      dense_updated[c] = updated.mass_at(c);
      blocks[c] = query.marginal_index(c);
    }
    const auto oracle = constrained_kl_minimizer(dense_prior, blocks, target);
    for (CellIndex c = 0; c < n; ++c) {
      worst_cell_gap =
          std::max(worst_cell_gap, std::abs(dense_updated[c] - oracle[c]));
    }

    const double updated_kl = kl_value(dense_updated, dense_prior);
    std::vector<std::vector<CellIndex>> block_cells(query.marginal_size());
    for (CellIndex c = 0; c < n; ++c) block_cells[blocks[c]].push_back(c);
    std::vector<double> z(n, 0.0);
    for (int sample = 0; sample < 10'000; ++sample) {
      for (std::uint64_t mc = 0; mc < query.marginal_size(); ++mc) {
        const auto mass = random_point_on_simplex(block_cells[mc].size(),
                                                  target[mc], rng);
        for (std::size_t i = 0; i < block_cells[mc].size(); ++i) {
          z[block_cells[mc][i]] = mass[i];
        }
      }
      if (kl_value(z, dense_prior) < updated_kl - 1e-9) ++beaten;
    }
  }

  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "max per-cell gap " << worst_cell_gap << ", feasible points below "
         << "the update " << beaten << "/2e6, " << elapsed << "s";
  return {worst_cell_gap <= 1e-4 && beaten == 0 && elapsed < 60.0,
          detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 2: projection distances equal the LP optimum.
Outcome criterion_projection() {
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(1002, "acceptance/projection");
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t n = 1 + rng.next_below(20);
    std::vector<double> noisy(n);
    for (double& v : noisy) v = -1.0 + 3.0 * rng.next_unit_open();
    worst = std::max(worst,
                     std::abs(project_full(noisy).distance -
                              lp_reference(noisy, CoverageMode::kFull)));
    worst = std::max(worst,
                     std::abs(project_partial(noisy).distance -
                              lp_reference(noisy, CoverageMode::kPartial)));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "max |achieved - LP| = " << worst << " over 10k vectors, "
         << elapsed << "s";
  return {worst <= 1e-9 && elapsed < 10.0, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 3: IDE on consistent noiseless marginals converges like IPF.
Outcome criterion_ipf() {
  RngStream rng(1003, "acceptance/ipf");
  const SchemaPtr schema = make_schema({{"A", 3}, {"B", 3}, {"C", 3}});
  const auto truth = random_full_distribution(schema, rng);
  const auto prior = random_full_distribution(schema, rng);
  const auto qa = MarginalQuery::over(schema, {0});
  const auto qb = MarginalQuery::over(schema, {1});
  const auto workload = Workload::of({qa, qb});
  const std::vector<MarginalVector> answers{evaluate_marginal(truth, qa),
                                            evaluate_marginal(truth, qb)};

  UpdateSchedule schedule{UpdateSchedule::Mode::kRoundRobin, 100};
  const auto result = ide(workload, answers, prior, schedule);
  const double loss =
      workload_l1_loss(result.distribution, workload, answers);

  const auto reference =
      ipf_reference(to_dense(prior), {3, 3, 3},
                    {{{0}, answers[0].values}, {{1}, answers[1].values}}, 100);
  double worst_cell = 0.0;
  for (CellIndex c = 0; c < schema->domain_size(); ++c) {
    worst_cell = std::max(
        worst_cell, std::abs(result.distribution.mass_at(c) - reference[c]));
  }
  std::ostringstream detail;
  detail << "loss " << loss << ", max cell gap vs IPF " << worst_cell;
  return {loss <= 1e-6 && worst_cell <= 1e-6, detail.str()};
}

// ---------------------------------------------------------------------------
// Shared CLI workspace (fixture CSV, config, selected workloads).
struct CliWorkspace {
  fs::path dir;
  std::string config;
  std::string data_csv;
  std::string workload_state;
  std::string workload_group;
};

CliWorkspace prepare_cli_workspace() {
  CliWorkspace ws;
  ws.dir = fs::temp_directory_path() /
           ("mresynth_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(ws.dir);

  const ContestFixture fixture = make_contest_fixture(515, 2, 2, 2);
  ws.data_csv = (ws.dir / "data.csv").string();
  write_fixture_csv(ws.data_csv, fixture.data);

  nlohmann::ordered_json config;
  config["config_version"] = 1;
  nlohmann::ordered_json attrs = nlohmann::ordered_json::array();
  for (const auto& attr : fixture.schema->attributes()) {
    attrs.push_back({{"name", attr.name}, {"labels", attr.labels}});
  }
  config["schema"] = {{"attributes", attrs}};
  nlohmann::ordered_json state_map;
  for (const auto& [prefix, state] : fixture.states.prefixes()) {
    state_map[prefix] = state;
  }
  config["state_map"] = state_map;
  config["privacy"] = {{"epsilon", 10.0}, {"stability", 1}};
  config["selection"] = {{"tau_edge", fixture.selection.tau_edge},
                         {"tau_indep", fixture.selection.tau_indep}};
  config["seed"] = 99;
  ws.config = (ws.dir / "config.json").string();
  std::ofstream(ws.config) << config.dump(2);

  ws.workload_state = (ws.dir / "workload_state.json").string();
  ws.workload_group = (ws.dir / "workload_group.json").string();
  const int code = run_cli("select-workload --config " + ws.config +
                           " --public " + ws.data_csv + " --out-state " +
                           ws.workload_state + " --out-group " +
                           ws.workload_group + " > " +
                           (ws.dir / "select.log").string() + " 2>&1");
  if (code != 0) {
    throw std::runtime_error("select-workload failed with exit code " +
                             std::to_string(code));
  }
  return ws;
}

int cli_synthesize(const CliWorkspace& ws, const std::string& out_dir,
                   const std::string& extra_flags) {
  return run_cli("synthesize --config " + ws.config + " --public " +
                 ws.data_csv + " --private " + ws.data_csv +
                 " --workload-state " + ws.workload_state +
                 " --workload-group " + ws.workload_group + " --out-dir " +
                 out_dir + " " + extra_flags + " > " + out_dir + ".log 2>&1");
}

// Criterion 4: the ledger total equals epsilon on every fixture shape, and
// audit-budget accepts a real run report.
Outcome criterion_budget(const CliWorkspace& ws) {
  const double epsilon = 3.0;
  const auto params = PrivacyParams::make(epsilon, 1);
  RngStream rng(1004, "acceptance/budget");
  const SchemaPtr schema = make_schema({{"A", 3}, {"B", 2}});
  const auto workload = Workload::of(
      {MarginalQuery::over(schema, {0}), MarginalQuery::over(schema, {1})});

  std::ostringstream detail;
  bool pass = true;
  for (std::size_t states = 1; states <= 3; ++states) {
    for (std::size_t groups : {std::size_t{1}, std::size_t{4}, std::size_t{10}}) {
      GroupedData data;
      data.schema = schema;
      for (std::size_t s = 1; s <= states; ++s) {
        for (std::size_t g = 0; g < groups; ++g) {
          std::vector<Histogram::Entry> counts;
          for (int i = 0; i < 50; ++i) {
            counts.emplace_back(rng.next_below(schema->domain_size()), 1);
          }
          data.groups.emplace(
              GroupKey{std::to_string(s) + "0" + std::to_string(g), 2015},
              Histogram::from_counts(schema, std::move(counts)));
        }
      }
      const auto prior = normalize(data.pooled());
      const StateMap map = StateMap::from_prefixes(
          {{"1", "S1"}, {"2", "S2"}, {"3", "S3"}});
      PrivacyLedger ledger;
      synthesize(data, map, prior, workload, workload, params, {}, ledger,
                 rng.next_u64());
      const double total = ledger.total();
      if (std::abs(total - epsilon) > 1e-12) {
        pass = false;
        detail << "fixture " << states << "x" << groups << " total " << total
               << " != " << epsilon << "; ";
      }
    }
  }

  // CLI path: synthesize a report, then audit it.
  const std::string out_dir = (ws.dir / "budget_run").string();
  if (cli_synthesize(ws, out_dir, "") != 0) {
    return {false, "CLI synthesize failed"};
  }
  const int audit_code =
      run_cli("audit-budget --report " + out_dir + "/report.json > " +
              out_dir + "_audit.log 2>&1");
  if (audit_code != 0) {
    pass = false;
    detail << "audit-budget exit code " << audit_code << "; ";
  }
  if (pass && detail.str().empty()) {
    detail << "9 fixture shapes at total = epsilon exactly; audit exit 0";
  }
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 5: desk-scale end-to-end quality versus the baselines.
Outcome criterion_quality() {
  const auto start = std::chrono::steady_clock::now();
  const ContestFixture fixture = make_contest_fixture(727);

  const Histogram pooled = fixture.data.pooled();
  const auto prior = normalize(pooled);
  const Workload state_workload =
      select_state_workload(pooled, fixture.selection);
  const Workload group_workload =
      select_group_workload(pooled, fixture.selection);

  std::cerr << "  [quality] W_S:";
  for (const auto& q : state_workload.queries()) std::cerr << " " << q.describe();
  std::cerr << "\n  [quality] W_G:";
  for (const auto& q : group_workload.queries()) std::cerr << " " << q.describe();
  std::cerr << "\n";

  const auto params = PrivacyParams::make(10.0, 1);
  EvalOptions eval_options;
  eval_options.repetitions = 50;
  eval_options.threads = 1;
  const std::uint64_t eval_seed = 4242;

  SynthesisOptions options;
  options.threads = 1;

  // Pipeline run with the public prior.
  PrivacyLedger ledger;
  const SynthesisResult pipeline =
      synthesize(fixture.data, fixture.states, prior, state_workload,
                 group_workload, params, options, ledger, 20260801);
  const EvalReport pipeline_eval =
      contest_error(pipeline.synthetic, fixture.data, eval_options, eval_seed);
  std::size_t penalties = 0;
  for (const auto& g : pipeline_eval.groups) penalties += g.penalized ? 1 : 0;

  // Uniform-prior run: same pipeline, prior replaced.
  const auto uniform_prior = DensityDistribution::uniform(fixture.schema);
  PrivacyLedger uniform_ledger;
  const SynthesisResult uniform_run = synthesize(
      fixture.data, fixture.states, uniform_prior, state_workload,
      group_workload, params, options, uniform_ledger, 20260801);
  const EvalReport uniform_eval = contest_error(uniform_run.synthetic,
                                                fixture.data, eval_options,
                                                eval_seed);

  // Prior-only baseline: sample each group's true count straight from the
  // public prior, no measurements.
  GroupedData baseline;
  baseline.schema = fixture.schema;
  for (const auto& [key, hist] : fixture.data.groups) {
    RngStream rng(991, "acceptance/baseline/" + key.to_string());
    const auto cells = sample_cells(prior, hist.total(), rng);
    std::vector<Histogram::Entry> counts;
    for (CellIndex c : cells) counts.emplace_back(c, 1);
    baseline.groups.emplace(
        key, Histogram::from_counts(fixture.schema, std::move(counts)));
  }
  const EvalReport baseline_eval =
      contest_error(baseline, fixture.data, eval_options, eval_seed);

  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "pipeline " << pipeline_eval.overall << ", prior-only "
         << baseline_eval.overall << ", uniform-prior "
         << uniform_eval.overall << ", penalties " << penalties << ", "
         << elapsed << "s";

  const bool pass = penalties == 0 &&
                    pipeline_eval.overall <= 0.8 * baseline_eval.overall &&
                    pipeline_eval.overall <= 0.8 * uniform_eval.overall &&
                    pipeline_eval.overall < 0.5 && elapsed < 300.0;
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 6: byte-identical outputs for identical config+seed, and
// invariance to the thread count.
Outcome criterion_determinism(const CliWorkspace& ws) {
  const std::string run1 = (ws.dir / "det_run1").string();
  const std::string run2 = (ws.dir / "det_run2").string();
  const std::string run3 = (ws.dir / "det_run3").string();
  if (cli_synthesize(ws, run1, "--threads 1") != 0 ||
      cli_synthesize(ws, run2, "--threads 1") != 0 ||
      cli_synthesize(ws, run3, "--threads 4") != 0) {
    return {false, "CLI synthesize failed"};
  }
  const bool same_seed =
      read_file(run1 + "/synthetic.csv") == read_file(run2 + "/synthetic.csv") &&
      read_file(run1 + "/report.json") == read_file(run2 + "/report.json");
  const bool thread_invariant =
      read_file(run1 + "/synthetic.csv") == read_file(run3 + "/synthetic.csv") &&
      read_file(run1 + "/report.json") == read_file(run3 + "/report.json");
  std::ostringstream detail;
  detail << "identical reruns: " << (same_seed ? "byte-identical" : "DIFFER")
         << "; --threads 4: "
         << (thread_invariant ? "byte-identical" : "DIFFER");
  return {same_seed && thread_invariant, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 7: with restriction on, all synthetic tuples stay inside the
// public prior's support.
Outcome criterion_support() {
  // Public prior missing cells that dominate the private data.
  const SchemaPtr schema = make_schema({{"A", 3}, {"B", 3}});
  const auto prior = DensityDistribution::from_mass(
      schema, {{0, 0.3}, {1, 0.2}, {4, 0.3}, {8, 0.2}});
  GroupedData data;
  data.schema = schema;
  RngStream rng(1007, "acceptance/support");
  for (int g = 0; g < 6; ++g) {
    std::vector<Histogram::Entry> counts;
    for (int i = 0; i < 400; ++i) {
      counts.emplace_back(rng.next_below(schema->domain_size()), 1);
    }
    data.groups.emplace(GroupKey{"10" + std::to_string(g), 2013},
                        Histogram::from_counts(schema, std::move(counts)));
  }
  const auto workload = Workload::of(
      {MarginalQuery::over(schema, {0}), MarginalQuery::over(schema, {1})});
  const StateMap map = StateMap::from_prefixes({{"1", "S1"}});
  const auto params = PrivacyParams::make(8.0, 1);

  PrivacyLedger ledger;
  const auto result = synthesize(data, map, prior, workload, workload, params,
                                 {}, ledger, 2);
  std::uint64_t rows = 0, out_of_support = 0;
  for (const auto& group : result.groups) {
    for (CellIndex cell : group.cells) {
      ++rows;
      if (!prior.in_support(cell)) ++out_of_support;
    }
  }
  std::ostringstream detail;
  detail << rows << " synthetic rows, " << out_of_support
         << " outside the prior support";
  return {rows > 0 && out_of_support == 0, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 8: plug-in mutual information against the direct formula.
Outcome criterion_mi() {
  RngStream rng(1008, "acceptance/mi");
  double worst = 0.0;
  for (int round = 0; round < 100; ++round) {
    const std::size_t rows = 2 + rng.next_below(5);
    const std::size_t cols = 2 + rng.next_below(5);
    const SchemaPtr schema = make_schema({{"A", rows}, {"B", cols}});
    std::vector<std::vector<double>> joint(rows, std::vector<double>(cols));
    std::vector<Histogram::Entry> counts;
    double n = 0.0;
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        const std::uint64_t c = rng.next_below(60);
        joint[a][b] = static_cast<double>(c);
        n += joint[a][b];
        if (c > 0) {
          counts.emplace_back(
              schema->encode_indices(std::vector<std::size_t>{a, b}), c);
        }
      }
    }
    if (counts.empty()) {
      counts.emplace_back(0, 1);
      joint[0][0] = 1;
      n = 1;
    }
    const Histogram h = Histogram::from_counts(schema, std::move(counts));

    std::vector<double> pa(rows, 0.0), pb(cols, 0.0);
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        pa[a] += joint[a][b] / n;
        pb[b] += joint[a][b] / n;
      }
    }
    double direct = 0.0;
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        const double p = joint[a][b] / n;
        if (p > 0.0) direct += p * std::log(p / (pa[a] * pb[b]));
      }
    }
    worst = std::max(worst, std::abs(mutual_information(h, 0, 1) -
                                     std::max(direct, 0.0)));
  }

  // Exactly factorized tables must give zero.
  double worst_independent = 0.0;
  for (int round = 0; round < 50; ++round) {
    const std::size_t rows = 2 + rng.next_below(4);
    const std::size_t cols = 2 + rng.next_below(4);
    const SchemaPtr schema = make_schema({{"A", rows}, {"B", cols}});
    std::vector<Histogram::Entry> counts;
    std::vector<std::uint64_t> r(rows), s(cols);
    for (auto& v : r) v = 1 + rng.next_below(9);
    for (auto& v : s) v = 1 + rng.next_below(9);
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        counts.emplace_back(
            schema->encode_indices(std::vector<std::size_t>{a, b}),
            r[a] * s[b]);
      }
    }
    const Histogram h = Histogram::from_counts(schema, std::move(counts));
    worst_independent = std::max(worst_independent, mutual_information(h, 0, 1));
  }

  std::ostringstream detail;
  detail << "max |MI - direct| = " << worst
         << ", max MI on product tables = " << worst_independent;
  return {worst <= 1e-12 && worst_independent <= 1e-12, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  if (argc > 1) only = std::atoi(argv[1]);

  CliWorkspace workspace;
  try {
    workspace = prepare_cli_workspace();
  } catch (const std::exception& e) {
    std::cerr << "failed to prepare the CLI workspace: " << e.what() << "\n";
    return 1;
  }

  struct Criterion {
    int number;
    const char* label;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Theorem-1 oracle equivalence", [] { return criterion_theorem1(); }},
      {2, "projection optimality vs LP", [] { return criterion_projection(); }},
      {3, "IPF-consistency convergence", [] { return criterion_ipf(); }},
      {4, "privacy accounting equals epsilon",
       [&] { return criterion_budget(workspace); }},
      {5, "end-to-end desk-scale quality", [] { return criterion_quality(); }},
      {6, "byte-identical determinism",
       [&] { return criterion_determinism(workspace); }},
      {7, "support restriction", [] { return criterion_support(); }},
      {8, "mutual information correctness", [] { return criterion_mi(); }},
  };

  bool all_pass = true;
  for (const auto& criterion : criteria) {
    if (only && *only != criterion.number) continue;
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion "
              << criterion.number << ": " << criterion.label << " ("
              << outcome.detail << ")\n";
    all_pass = all_pass && outcome.pass;
  }

  fs::remove_all(workspace.dir);
  return all_pass ? 0 : 1;
}
