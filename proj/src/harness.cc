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

#include "contplace/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace contplace {

namespace {

using nlohmann::json;

PlacementOutcome OutcomeFromOracle(const Scenario &scenario, const OracleResult &oracle) {
  PlacementOutcome out;
  out.allocation = oracle.optimal ? *oracle.optimal : EmptyAllocation(scenario);
  out.feasible = oracle.optimal.has_value();
  out.pairs_examined = oracle.nodes_explored;
  if (!oracle.optimal) return out;
  for (int app : SortApplications(scenario.applications)) {
    int k = 0;
    for (std::size_t j = 0; j < scenario.num_machines(); ++j) {
      for (int c = 0; c < out.allocation(app, j); ++c) {
        out.trace.push_back({app, k++, static_cast<int>(j)});
      }
    }
  }
  return out;
}

bool IsCount(double v) { return v >= 1.0 && v == std::floor(v) && v < 1e9; }

// First `machines` machines and first `apps` applications of `s`.
Scenario Truncate(const Scenario &s, std::size_t machines, std::size_t apps) {
  Scenario out;
  out.weights = s.weights;
  out.alpha = s.alpha;
  out.pi_threshold = s.pi_threshold;
  out.machines.assign(s.machines.begin(), s.machines.begin() + machines);
  out.applications.assign(s.applications.begin(), s.applications.begin() + apps);
  out.user_affinity = BinaryMatrix(apps, machines);
  out.anti_affinity = BinaryMatrix(apps, machines);
  for (std::size_t i = 0; i < apps; ++i) {
    for (std::size_t j = 0; j < machines; ++j) {
      out.user_affinity(i, j) = s.user_affinity(i, j);
      out.anti_affinity(i, j) = s.anti_affinity(i, j);
    }
  }
  return out;
}

json ToJson(const Interval &r) { return json::array({r.lo, r.hi}); }

json ToJson(const ResourceRanges &r) {
  return json{{"cpu", ToJson(r.cpu)},
              {"io", ToJson(r.io)},
              {"nw", ToJson(r.nw)},
              {"mem", ToJson(r.mem)}};
}

json ToJson(const AffinityWeights &w) { return json::array({w.cpu, w.io, w.nw, w.mem}); }

json ToJson(const NormalParams &p) { return json{{"mean", p.mean}, {"stddev", p.stddev}}; }

}  // namespace

RunResult RunScenario(const Scenario &scenario, Algorithm algorithm,
                      const AffinityMatrix &affinity, long oracle_budget) {
  ValidateScenario(scenario);
  RunResult result;
  result.algorithm = algorithm;

  auto start = std::chrono::steady_clock::now();
  if (algorithm == Algorithm::kOracle) {
    result.oracle = OptimalPlace(scenario, affinity, oracle_budget);
  } else {
    result.outcome = Place(algorithm, scenario, affinity);
  }
  auto elapsed = std::chrono::steady_clock::now() - start;

  if (result.oracle) result.outcome = OutcomeFromOracle(scenario, *result.oracle);
  result.metrics = ComputeMetrics(scenario, result.outcome.allocation, affinity);
  result.metrics.runtime = std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed);
  return result;
}

RunResult RunScenario(const Scenario &scenario, Algorithm algorithm, long oracle_budget) {
  ValidateScenario(scenario);
  return RunScenario(scenario, algorithm, FinalAffinity(scenario), oracle_budget);
}

ResultRow ToRow(const RunResult &run, double sweep_point, std::uint64_t seed) {
  const MetricsReport &m = run.metrics;
  ResultRow row;
  row.sweep_point = sweep_point;
  row.algorithm = run.algorithm;
  row.seed = seed;
  row.feasible = m.feasible;
  row.total_cost = m.total_cost;
  row.reduced_cost = m.reduced_cost;
  row.power_cost = m.power_cost;
  row.payoff = m.affinity_payoff;
  row.rho = m.satisfaction_ratio;
  row.avg_util = m.avg_utilization;
  row.psi = m.payoff_ratio;
  row.runtime_ms = std::chrono::duration<double, std::milli>(m.runtime).count();
  row.psi_status = PsiStatusName(m.psi_status);
  row.pairs_examined = run.outcome.pairs_examined;
  return row;
}

const char *SweepKindName(SweepKind k) {
  switch (k) {
    case SweepKind::kMachines:
      return "machines";
    case SweepKind::kApplications:
      return "applications";
    case SweepKind::kAntiAffinity:
      return "anti_affinity";
    case SweepKind::kAlpha:
      return "alpha";
  }
  return "unknown";
}

std::optional<SweepKind> ParseSweepKind(std::string_view name) {
  for (SweepKind k : {SweepKind::kMachines, SweepKind::kApplications,
                      SweepKind::kAntiAffinity, SweepKind::kAlpha}) {
    if (name == SweepKindName(k)) return k;
  }
  return std::nullopt;
}

void SweepSpec::Validate() const {
  if (values.empty()) throw ScenarioError("sweep needs at least one value");
  if (values.size() > 1) {
    bool up = values[1] > values[0];
    for (std::size_t t = 1; t < values.size(); ++t) {
      if (up ? !(values[t] > values[t - 1]) : !(values[t] < values[t - 1])) {
        throw ScenarioError("sweep values must be strictly monotone");
      }
    }
  }
  if (algorithms.empty()) throw ScenarioError("sweep needs at least one algorithm");
  if (std::set<Algorithm>(algorithms.begin(), algorithms.end()).size() !=
      algorithms.size()) {
    throw ScenarioError("sweep lists an algorithm twice");
  }
  if (repetitions < 1) throw ScenarioError("repetitions must be at least 1");
  if (oracle_budget <= 0) throw ScenarioError("oracle budget must be positive");

  for (double v : values) {
    switch (kind) {
      case SweepKind::kMachines:
      case SweepKind::kApplications:
        if (!IsCount(v)) throw ScenarioError("count sweep values must be positive integers");
        break;
      case SweepKind::kAntiAffinity:
        if (!(v >= 0.0 && v < 1.0)) {
          throw ScenarioError("anti-affinity sweep values must lie in [0, 1)");
        }
        break;
      case SweepKind::kAlpha:
        if (!(v >= 0.0) || !std::isfinite(v)) {
          throw ScenarioError("alpha sweep values must be finite and nonnegative");
        }
        break;
    }
  }

  bool wants_oracle = std::find(algorithms.begin(), algorithms.end(),
                                Algorithm::kOracle) != algorithms.end();
  if (const auto *config = std::get_if<GeneratorConfig>(&base)) {
    config->Validate();
    if (wants_oracle) {
      const double largest = *std::max_element(values.begin(), values.end());
      double max_machines =
          kind == SweepKind::kMachines ? largest : config->machine_count;
      double max_apps =
          kind == SweepKind::kApplications ? largest : config->application_count;
      if (max_machines > static_cast<double>(kOracleMaxMachines) ||
          max_apps * config->instance_range.hi > static_cast<double>(kOracleMaxInstances)) {
        throw ScenarioError("oracle requested beyond its scale guard");
      }
    }
  } else {
    const auto &trace = std::get<TraceBase>(base);
    Scenario full = LoadTrace(trace.paths, trace.backfill, trace.seed);
    for (double v : values) {
      if (kind == SweepKind::kMachines && v > static_cast<double>(full.num_machines())) {
        throw ScenarioError("machine sweep exceeds machines in trace");
      }
      if (kind == SweepKind::kApplications &&
          v > static_cast<double>(full.num_applications())) {
        throw ScenarioError("application sweep exceeds applications in trace");
      }
    }
    if (wants_oracle) {
      for (double v : values) {
        Scenario s = BuildSweepScenario(*this, v, 0);
        if (!WithinOracleScale(s)) {
          throw ScenarioError("oracle requested beyond its scale guard");
        }
      }
    }
  }
}

std::uint64_t SweepSeed(const SweepSpec &spec, int repetition) {
  if (const auto *config = std::get_if<GeneratorConfig>(&spec.base)) {
    return config->seed + static_cast<std::uint64_t>(repetition);
  }
  return std::get<TraceBase>(spec.base).seed + static_cast<std::uint64_t>(repetition);
}

Scenario BuildSweepScenario(const SweepSpec &spec, double point, int repetition) {
  const std::uint64_t seed = SweepSeed(spec, repetition);
  if (const auto *base = std::get_if<GeneratorConfig>(&spec.base)) {
    GeneratorConfig config = *base;
    config.seed = seed;
    switch (spec.kind) {
      case SweepKind::kMachines:
        config.machine_count = static_cast<int>(point);
        break;
      case SweepKind::kApplications:
        config.application_count = static_cast<int>(point);
        break;
      case SweepKind::kAntiAffinity:
        config.anti_affinity_fraction = point;
        break;
      case SweepKind::kAlpha:
        config.alpha = point;
        break;
    }
    return GenerateSynthetic(config);
  }

  TraceBase trace = std::get<TraceBase>(spec.base);
  if (spec.kind == SweepKind::kAntiAffinity) {
    trace.paths.affinity.reset();
    trace.backfill.anti_affinity_fraction = point;
  }
  if (spec.kind == SweepKind::kAlpha) trace.backfill.alpha = point;
  Scenario s = LoadTrace(trace.paths, trace.backfill, seed);
  if (spec.kind == SweepKind::kMachines) {
    s = Truncate(s, static_cast<std::size_t>(point), s.num_applications());
  } else if (spec.kind == SweepKind::kApplications) {
    s = Truncate(s, s.num_machines(), static_cast<std::size_t>(point));
  }
  ValidateScenario(s);
  return s;
}

ResultsTable RunSweep(const SweepSpec &spec) {
  spec.Validate();
  ResultsTable table;
  table.config = ToJson(spec);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  for (double point : spec.values) {
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      const std::uint64_t seed = SweepSeed(spec, rep);
      std::optional<Scenario> scenario;
      std::optional<AffinityMatrix> affinity;
      std::string setup_error;
      try {
        scenario = BuildSweepScenario(spec, point, rep);
        affinity = FinalAffinity(*scenario);
      } catch (const std::exception &e) {
        setup_error = e.what();
      }
      for (Algorithm algorithm : spec.algorithms) {
        ResultRow row;
        try {
          if (!scenario) throw std::runtime_error(setup_error);
          row = ToRow(RunScenario(*scenario, algorithm, *affinity, spec.oracle_budget),
                      point, seed);
        } catch (const std::exception &e) {
          row = ResultRow{point, algorithm, seed, false, kNaN, kNaN, kNaN, kNaN,
                          kNaN,  kNaN,      kNaN, kNaN,  "undefined", 0, e.what()};
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  SortRows(table.rows);
  table.aggregates = Aggregate(table.rows);
  return table;
}

json ToJson(const GeneratorConfig &c) {
  return json{{"machine_count", c.machine_count},
              {"application_count", c.application_count},
              {"instance_range", json::array({c.instance_range.lo, c.instance_range.hi})},
              {"capacity_ranges", ToJson(c.capacity_ranges)},
              {"demand_ranges", ToJson(c.demand_ranges)},
              {"power_idle_range", ToJson(c.power_idle_range)},
              {"power_max_range", ToJson(c.power_max_range)},
              {"user_affinity_density", c.user_affinity_density},
              {"anti_affinity_fraction", c.anti_affinity_fraction},
              {"weights", ToJson(c.weights)},
              {"alpha", c.alpha},
              {"pi_threshold", c.pi_threshold},
              {"seed", c.seed}};
}

json ToJson(const BackfillConfig &b) {
  return json{{"io_cap", ToJson(b.io_cap)},
              {"nw_cap", ToJson(b.nw_cap)},
              {"mem_cap", ToJson(b.mem_cap)},
              {"p_idle", ToJson(b.p_idle)},
              {"p_max", ToJson(b.p_max)},
              {"io_req", ToJson(b.io_req)},
              {"nw_req", ToJson(b.nw_req)},
              {"mem_req", ToJson(b.mem_req)},
              {"instances", ToJson(b.instances)},
              {"instance_range", json::array({b.instance_range.lo, b.instance_range.hi})},
              {"user_affinity_density", b.user_affinity_density},
              {"anti_affinity_fraction", b.anti_affinity_fraction},
              {"weights", ToJson(b.weights)},
              {"alpha", b.alpha},
              {"pi_threshold", b.pi_threshold}};
}

json ToJson(const SweepSpec &spec) {
  json algorithms = json::array();
  for (Algorithm a : spec.algorithms) algorithms.push_back(AlgorithmName(a));
  json out{{"kind", SweepKindName(spec.kind)},
           {"values", spec.values},
           {"algorithms", algorithms},
           {"repetitions", spec.repetitions},
           {"oracle_budget", spec.oracle_budget}};
  if (const auto *config = std::get_if<GeneratorConfig>(&spec.base)) {
    out["generator"] = ToJson(*config);
  } else {
    const auto &trace = std::get<TraceBase>(spec.base);
    json paths{{"machines", trace.paths.machines.string()},
               {"applications", trace.paths.applications.string()}};
    paths["affinity"] = trace.paths.affinity ? json(trace.paths.affinity->string())
                                             : json(nullptr);
    out["trace"] = json{{"paths", paths},
                        {"backfill", ToJson(trace.backfill)},
                        {"seed", trace.seed}};
  }
  return out;
}

}  // namespace contplace
