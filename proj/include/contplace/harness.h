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

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "contplace/cost.h"
#include "contplace/oracle.h"
#include "contplace/placement.h"
#include "contplace/results.h"
#include "contplace/workload.h"

namespace contplace {

struct RunResult {
  Algorithm algorithm = Algorithm::kCpaap;
  PlacementOutcome outcome;
  MetricsReport metrics;
  std::optional<OracleResult> oracle;  // set for Algorithm::kOracle
};

/// Runs one algorithm on a validated scenario and evaluates the result.
/// Runtime covers only the placement (or oracle search) call.
RunResult RunScenario(const Scenario &scenario, Algorithm algorithm,
                      const AffinityMatrix &affinity,
                      long oracle_budget = kDefaultNodeBudget);

/// Same, deriving the final affinity matrix from the scenario.
RunResult RunScenario(const Scenario &scenario, Algorithm algorithm,
                      long oracle_budget = kDefaultNodeBudget);

/// Result row for a finished run.
ResultRow ToRow(const RunResult &run, double sweep_point, std::uint64_t seed);

enum class SweepKind { kMachines, kApplications, kAntiAffinity, kAlpha };

const char *SweepKindName(SweepKind k);
std::optional<SweepKind> ParseSweepKind(std::string_view name);

/// Trace files as the base of a sweep. Repetition r uses seed + r for
/// backfill draws.
struct TraceBase {
  TracePaths paths;
  BackfillConfig backfill;
  std::uint64_t seed = 1;
};

/// Cartesian sweep: values x algorithms x repetitions.
///
/// machines / applications points are counts; for a trace base they keep the
/// first k machines or applications of the file. anti_affinity points replace
/// the anti-affinity fraction (a trace base then regenerates both affinity
/// matrices). alpha points replace the affinity cost coefficient.
struct SweepSpec {
  SweepKind kind = SweepKind::kAlpha;
  std::vector<double> values;
  std::variant<GeneratorConfig, TraceBase> base = GeneratorConfig{};
  std::vector<Algorithm> algorithms;
  int repetitions = 1;
  long oracle_budget = kDefaultNodeBudget;

  /// Throws ScenarioError when the spec cannot run.
  void Validate() const;
};

/// Builds the scenario for one sweep point and repetition.
Scenario BuildSweepScenario(const SweepSpec &spec, double point, int repetition);

/// Seed recorded for repetition `repetition`.
std::uint64_t SweepSeed(const SweepSpec &spec, int repetition);

/// Runs every (point, algorithm, repetition) combination. A combination that
/// throws is recorded as an infeasible row carrying the error text and the
/// sweep continues. Rows are sorted and aggregated before returning.
ResultsTable RunSweep(const SweepSpec &spec);

nlohmann::json ToJson(const GeneratorConfig &config);
nlohmann::json ToJson(const BackfillConfig &config);
nlohmann::json ToJson(const SweepSpec &spec);

}  // namespace contplace
