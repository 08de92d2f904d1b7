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

#include "mresynth/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mresynth/errors.hpp"
#include "mresynth/rng.hpp"

namespace mresynth {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json parse_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(std::string("cannot open ") + what + " file: " + path);
  }
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + " file " + path +
                      ": " + e.what());
  }
}

SchemaPtr parse_schema(const json& doc) {
  if (!doc.contains("attributes") || !doc["attributes"].is_array()) {
    throw ConfigError("schema must list attributes");
  }
  std::vector<Attribute> attributes;
  for (const auto& item : doc["attributes"]) {
    Attribute attr;
    attr.name = item.value("name", std::string());
    if (item.contains("labels")) {
      attr.labels = item["labels"].get<std::vector<std::string>>();
    }
    if (item.contains("bins")) {
      attr.bin_edges = item["bins"].get<std::vector<double>>();
    }
    attributes.push_back(std::move(attr));
  }
  return std::make_shared<const Schema>(
      Schema::from_attributes(std::move(attributes)));
}

UpdateSchedule::Mode parse_schedule(const std::string& name) {
  if (name == "round-robin") return UpdateSchedule::Mode::kRoundRobin;
  if (name == "seeded-random") return UpdateSchedule::Mode::kSeededRandom;
  throw ConfigError("unknown schedule mode: " + name);
}

const char* schedule_name(UpdateSchedule::Mode mode) {
  return mode == UpdateSchedule::Mode::kRoundRobin ? "round-robin"
                                                   : "seeded-random";
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  const json doc = parse_file(path, "config");
  try {
    RunConfig config;
    config.config_version = doc.value("config_version", 0);
    if (config.config_version != 1) {
      throw ConfigError("unsupported config_version (expected 1)");
    }
    if (!doc.contains("schema")) throw ConfigError("config missing schema");
    config.schema = parse_schema(doc["schema"]);

    if (doc.contains("state_map")) {
      config.state_prefixes =
          doc["state_map"].get<std::map<std::string, std::string>>();
    }

    const json privacy = doc.value("privacy", json::object());
    config.privacy = PrivacyParams::make(
        privacy.value("epsilon", 1.0),
        privacy.value("stability", std::uint32_t{1}));

    const json estimation = doc.value("estimation", json::object());
    config.iterations = estimation.value("iterations", std::uint32_t{0});
    config.schedule_mode = parse_schedule(
        estimation.value("schedule", std::string("round-robin")));
    config.support_restriction =
        estimation.value("support_restriction", true);
    config.max_support_cells =
        estimation.value("max_support_cells", std::uint64_t{5'000'000});

    const json selection = doc.value("selection", json::object());
    config.selection.tau_edge = selection.value("tau_edge", 0.1);
    config.selection.tau_indep = selection.value("tau_indep", 0.05);
    config.selection.max_marginal_cells =
        selection.value("max_marginal_cells", std::uint64_t{1'000'000});

    const json evaluation = doc.value("evaluation", json::object());
    config.eval_repetitions =
        evaluation.value("repetitions", std::uint32_t{50});
    if (config.eval_repetitions < 1) {
      throw ConfigError("evaluation repetitions must be at least 1");
    }
    config.bias_threshold = evaluation.value("bias_threshold", 250.0);

    config.seed = doc.value("seed", std::uint64_t{0});
    config.threads = doc.value("threads", 0u);
    config.strict_ingest = doc.value("strict_ingest", true);

    const json paths = doc.value("paths", json::object());
    config.paths.public_csv = paths.value("public_csv", std::string());
    config.paths.private_csv = paths.value("private_csv", std::string());
    config.paths.workload_state = paths.value("workload_state", std::string());
    config.paths.workload_group = paths.value("workload_group", std::string());
    config.paths.output_dir = paths.value("output_dir", std::string());
    return config;
  } catch (const json::exception& e) {
    throw ConfigError("invalid config " + path + ": " + e.what());
  }
}

std::string config_hash(const RunConfig& config) {
  ordered_json digest;
  digest["config_version"] = config.config_version;
  ordered_json schema = ordered_json::array();
  for (const auto& attr : config.schema->attributes()) {
    ordered_json a;
    a["name"] = attr.name;
    a["labels"] = attr.labels;
    if (attr.is_binned()) a["bins"] = attr.bin_edges;
    schema.push_back(std::move(a));
  }
  digest["schema"] = std::move(schema);
  digest["state_map"] = config.state_prefixes;
  digest["privacy"] = {{"epsilon", config.privacy.epsilon},
                       {"stability", config.privacy.stability}};
  digest["estimation"] = {
      {"iterations", config.iterations},
      {"schedule", schedule_name(config.schedule_mode)},
      {"support_restriction", config.support_restriction},
      {"max_support_cells", config.max_support_cells}};
  digest["selection"] = {{"tau_edge", config.selection.tau_edge},
                         {"tau_indep", config.selection.tau_indep},
                         {"max_marginal_cells",
                          config.selection.max_marginal_cells}};
  digest["evaluation"] = {{"repetitions", config.eval_repetitions},
                          {"bias_threshold", config.bias_threshold}};
  digest["seed"] = config.seed;

  const std::uint64_t h = fnv1a64(digest.dump());
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

Workload load_workload(const std::string& path, SchemaPtr schema) {
  const json doc = parse_file(path, "workload");
  const json* list = nullptr;
  if (doc.is_array()) {
    list = &doc;
  } else if (doc.contains("marginals") && doc["marginals"].is_array()) {
    list = &doc["marginals"];
  } else {
    throw ConfigError("workload file must hold a list of attribute-name "
                      "arrays (top-level or under \"marginals\")");
  }
  std::vector<MarginalQuery> queries;
  try {
    for (const auto& entry : *list) {
      const auto names = entry.get<std::vector<std::string>>();
      queries.push_back(MarginalQuery::over_names(schema, names));
    }
  } catch (const json::exception& e) {
    throw ConfigError("invalid workload file " + path + ": " + e.what());
  }
  return Workload::of(std::move(queries));
}

void save_workload(const std::string& path, const Workload& workload) {
  ordered_json marginals = ordered_json::array();
  for (const auto& query : workload.queries()) {
    ordered_json names = ordered_json::array();
    for (std::size_t attr : query.attributes()) {
      names.push_back(query.schema()->attribute(attr).name);
    }
    marginals.push_back(std::move(names));
  }
  ordered_json doc;
  doc["config_version"] = 1;
  doc["marginals"] = std::move(marginals);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write workload file: " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace mresynth
