// Copyright 2026 The Contplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// contplace: generate scenarios, run placement heuristics and sweeps.
//
//   contplace generate --machines 25 --apps 20 --seed 7 --out scen/
//   contplace run --trace scen/machines.csv scen/applications.csv \
//       scen/affinity.csv --algorithms pap,aap,cpaap
//   contplace sweep --kind anti_affinity --values 0.1,0.2,0.3,0.4,0.5 \
//       --reps 5 --format json --out sweep.json
//   contplace validate --trace scen/machines.csv scen/applications.csv
//
// Options may also come from an INI/TOML file given with --config; command
// line flags override values from the file.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "contplace/harness.h"

namespace {

using namespace contplace;

struct CommonOptions {
  GeneratorConfig generator;
  std::vector<std::string> trace;
  std::vector<std::string> algorithms{"pap", "aap", "cpaap"};
  std::string format = "csv";
  std::string out;
  long oracle_budget = kDefaultNodeBudget;
};

void AddGeneratorFlags(CLI::App *cmd, GeneratorConfig &g) {
  cmd->add_option("--machines", g.machine_count, "Number of machines")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--apps", g.application_count, "Number of applications")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", g.seed, "Random seed");
  cmd->add_option("--alpha", g.alpha, "Affinity cost coefficient");
  cmd->add_option("--pi-threshold", g.pi_threshold, "Utilization split point for PAP");
  cmd->add_option("--anti-affinity-fraction", g.anti_affinity_fraction,
                  "Fraction of machines anti-affine to each application");
  cmd->add_option("--user-affinity-density", g.user_affinity_density,
                  "Probability that a (application, machine) pair is user-affine");
  cmd->add_option("--min-instances", g.instance_range.lo, "Fewest instances per application");
  cmd->add_option("--max-instances", g.instance_range.hi, "Most instances per application");
}

void AddRunFlags(CLI::App *cmd, CommonOptions &o) {
  AddGeneratorFlags(cmd, o.generator);
  cmd->add_option("--trace", o.trace,
                  "Trace CSVs: <machines.csv> <applications.csv> [affinity.csv]")
      ->expected(2, 3);
  cmd->add_option("--algorithms", o.algorithms, "pap, aap, cpaap, first_fit, oracle")
      ->delimiter(',');
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "Output file (stdout when omitted)");
  cmd->add_option("--oracle-budget", o.oracle_budget, "Node limit of the exact oracle")
      ->check(CLI::PositiveNumber);
}

std::vector<Algorithm> ParseAlgorithms(const std::vector<std::string> &names) {
  std::vector<Algorithm> out;
  for (const auto &name : names) {
    auto a = ParseAlgorithm(name);
    if (!a) throw CLI::ValidationError("--algorithms", "unknown algorithm '" + name + "'");
    out.push_back(*a);
  }
  return out;
}

TracePaths ToTracePaths(const std::vector<std::string> &files) {
  TracePaths paths{files.at(0), files.at(1), std::nullopt};
  if (files.size() > 2) paths.affinity = files[2];
  return paths;
}

BackfillConfig BackfillFrom(const GeneratorConfig &g) {
  BackfillConfig b;
  b.alpha = g.alpha;
  b.pi_threshold = g.pi_threshold;
  b.anti_affinity_fraction = g.anti_affinity_fraction;
  b.user_affinity_density = g.user_affinity_density;
  b.weights = g.weights;
  return b;
}

void Emit(const ResultsTable &table, const CommonOptions &o) {
  ResultFormat format = o.format == "json" ? ResultFormat::kJson : ResultFormat::kCsv;
  if (o.out.empty()) {
    if (format == ResultFormat::kJson) {
      WriteJson(table, std::cout);
    } else {
      WriteCsv(table, std::cout);
    }
  } else {
    EmitResults(table, format, o.out);
  }
}

int RunCommand(const CommonOptions &o) {
  Scenario scenario;
  nlohmann::json config{{"command", "run"}};
  if (!o.trace.empty()) {
    BackfillConfig backfill = BackfillFrom(o.generator);
    scenario = LoadTrace(ToTracePaths(o.trace), backfill, o.generator.seed);
    config["trace"] = {{"files", o.trace}, {"backfill", ToJson(backfill)}};
  } else {
    scenario = GenerateSynthetic(o.generator);
    config["generator"] = ToJson(o.generator);
  }
  config["oracle_budget"] = o.oracle_budget;
  config["seed"] = o.generator.seed;

  std::vector<Algorithm> algorithms = ParseAlgorithms(o.algorithms);
  config["algorithms"] = o.algorithms;
  AffinityMatrix affinity = FinalAffinity(scenario);
  ResultsTable table;
  table.config = config;
  for (Algorithm a : algorithms) {
    if (a == Algorithm::kOracle && !WithinOracleScale(scenario)) {
      std::cerr << "warning: scenario exceeds the oracle scale guard; the search may "
                   "stop at its node budget\n";
    }
    RunResult run = RunScenario(scenario, a, affinity, o.oracle_budget);
    table.rows.push_back(ToRow(run, 0.0, o.generator.seed));
  }
  SortRows(table.rows);
  table.aggregates = Aggregate(table.rows);
  Emit(table, o);
  return 0;
}

int SweepCommand(const CommonOptions &o, const std::string &kind,
                 const std::vector<double> &values, int reps) {
  SweepSpec spec;
  auto k = ParseSweepKind(kind);
  if (!k) throw CLI::ValidationError("--kind", "unknown sweep kind '" + kind + "'");
  spec.kind = *k;
  spec.values = values;
  spec.algorithms = ParseAlgorithms(o.algorithms);
  spec.repetitions = reps;
  spec.oracle_budget = o.oracle_budget;
  if (!o.trace.empty()) {
    spec.base = TraceBase{ToTracePaths(o.trace), BackfillFrom(o.generator), o.generator.seed};
  } else {
    spec.base = o.generator;
  }
  ResultsTable table = RunSweep(spec);
  Emit(table, o);
  return 0;
}

int GenerateCommand(const GeneratorConfig &g, const std::string &dir) {
  Scenario s = GenerateSynthetic(g);
  TracePaths paths = WriteScenarioCsv(s, dir);
  std::cout << "wrote " << paths.machines.string() << ", " << paths.applications.string()
            << ", " << paths.affinity->string() << " (" << s.num_machines()
            << " machines, " << s.num_applications() << " applications, "
            << s.total_instances() << " instances)\n";
  return 0;
}

int ValidateCommand(const std::vector<std::string> &files, const GeneratorConfig &g) {
  try {
    Scenario s = LoadTrace(ToTracePaths(files), BackfillFrom(g), g.seed);
    std::cout << "ok: " << s.num_machines() << " machines, " << s.num_applications()
              << " applications, " << s.total_instances() << " instances\n";
    return 0;
  } catch (const ParseError &e) {
    std::cout << "invalid: " << e.what() << "\n";
  } catch (const ScenarioError &e) {
    std::cout << "invalid: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Power- and affinity-aware container placement"};
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.require_subcommand(1);

  GeneratorConfig gen_config;
  std::string gen_out;
  auto *generate = app.add_subcommand("generate", "Write a synthetic scenario as CSV files");
  AddGeneratorFlags(generate, gen_config);
  generate->add_option("--out", gen_out, "Output directory")->required();

  CommonOptions run_options;
  auto *run = app.add_subcommand("run", "Run algorithms on one scenario");
  AddRunFlags(run, run_options);

  CommonOptions sweep_options;
  std::string kind;
  std::vector<double> values;
  int reps = 1;
  auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  AddRunFlags(sweep, sweep_options);
  sweep->add_option("--kind", kind, "machines, applications, anti_affinity or alpha")
      ->required();
  sweep->add_option("--values", values, "Sweep points")->delimiter(',')->required();
  sweep->add_option("--reps", reps, "Seeds per sweep point")->check(CLI::PositiveNumber);

  std::vector<std::string> validate_files;
  GeneratorConfig validate_config;
  auto *validate = app.add_subcommand("validate", "Check trace CSV files");
  validate->add_option("--trace", validate_files,
                       "<machines.csv> <applications.csv> [affinity.csv]")
      ->expected(2, 3)
      ->required();
  validate->add_option("--seed", validate_config.seed, "Seed for backfilled columns");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return GenerateCommand(gen_config, gen_out);
    if (run->parsed()) return RunCommand(run_options);
    if (sweep->parsed()) return SweepCommand(sweep_options, kind, values, reps);
    if (validate->parsed()) return ValidateCommand(validate_files, validate_config);
  } catch (const CLI::Error &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
