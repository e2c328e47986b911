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
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "contplace/model.h"

namespace contplace {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval &, const Interval &) = default;
};

struct IntInterval {
  int lo = 1;
  int hi = 1;
  friend bool operator==(const IntInterval &, const IntInterval &) = default;
};

struct ResourceRanges {
  Interval cpu, io, nw, mem;
  friend bool operator==(const ResourceRanges &, const ResourceRanges &) = default;
};

/// Parameters of the synthetic scenario generator. Every draw is uniform over
/// its interval.
struct GeneratorConfig {
  int machine_count = 25;
  int application_count = 20;
  IntInterval instance_range{1, 4};
  ResourceRanges capacity_ranges{{8, 64}, {100, 1000}, {100, 1000}, {16, 256}};
  ResourceRanges demand_ranges{{1, 8}, {10, 100}, {10, 100}, {1, 16}};
  Interval power_idle_range{80, 150};
  Interval power_max_range{200, 400};
  double user_affinity_density = 0.2;
  double anti_affinity_fraction = 0.0;
  AffinityWeights weights;
  double alpha = kDefaultAlpha;
  double pi_threshold = kDefaultPiThreshold;
  std::uint64_t seed = 1;

  /// Throws ScenarioError for malformed ranges and for configurations that
  /// can never produce a placeable scenario.
  void Validate() const;

  friend bool operator==(const GeneratorConfig &, const GeneratorConfig &) = default;
};

/// Number of anti-affine machines per application row: round(fraction * M),
/// capped at M - 1 so every application keeps at least one usable machine.
int AntiAffineMachinesPerApp(double fraction, int machines);

/// Fills user_affinity and anti_affinity of `scenario` (machines and
/// applications must already be set). Each row gets exactly
/// AntiAffineMachinesPerApp machines marked anti-affine, chosen uniformly
/// without replacement; user affinity is Bernoulli(density) and forced to zero
/// on anti-affine cells.
void GenerateAffinityMatrices(Scenario &scenario, double user_affinity_density,
                              double anti_affinity_fraction, std::mt19937_64 &rng);

/// Deterministic function of `config` (including its seed).
Scenario GenerateSynthetic(const GeneratorConfig &config);

struct NormalParams {
  double mean = 0.0;
  double stddev = 0.0;
  friend bool operator==(const NormalParams &, const NormalParams &) = default;
};

/// Distributions used to fill columns a trace file does not provide. Draws are
/// normal and truncated below at 1e-3 of the mean.
struct BackfillConfig {
  NormalParams io_cap{550, 150};
  NormalParams nw_cap{550, 150};
  NormalParams mem_cap{136, 40};
  NormalParams p_idle{115, 15};
  NormalParams p_max{300, 40};
  NormalParams io_req{55, 15};
  NormalParams nw_req{55, 15};
  NormalParams mem_req{8.5, 3};
  NormalParams instances{3.0, 0.8};
  IntInterval instance_range{1, 4};  // rounded instance draws are clamped here
  double user_affinity_density = 0.2;
  double anti_affinity_fraction = 0.0;
  AffinityWeights weights;
  double alpha = kDefaultAlpha;
  double pi_threshold = kDefaultPiThreshold;

  friend bool operator==(const BackfillConfig &, const BackfillConfig &) = default;
};

struct TracePaths {
  std::filesystem::path machines;
  std::filesystem::path applications;
  std::optional<std::filesystem::path> affinity;
};

/// Malformed CSV input. `line` is 1-based; 0 when the file itself is missing.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path &file, int line, const std::string &what);
  const std::filesystem::path &file() const { return file_; }
  int line() const { return line_; }

 private:
  std::filesystem::path file_;
  int line_;
};

/// Reads a scenario from normalized CSV files.
///
/// machines:     machine_id,cpu_cap[,io_cap,nw_cap,mem_cap,p_idle,p_max]
/// applications: app_id,cpu_req[,io_req,nw_req,mem_req,instances]
/// affinity:     app_id,machine_id,user_affinity,anti_affinity
///
/// Columns are matched by header name. Bracketed columns, and empty cells in
/// them, are backfilled from `backfill` using `seed`. Ids may be any distinct
/// nonnegative integers; scenario indices follow file order. Without an
/// affinity file both matrices are generated as GenerateAffinityMatrices does.
Scenario LoadTrace(const TracePaths &paths, const BackfillConfig &backfill,
                   std::uint64_t seed);

/// Writes machines.csv, applications.csv and affinity.csv into `dir`, in the
/// format LoadTrace reads. Only nonzero affinity pairs are written.
TracePaths WriteScenarioCsv(const Scenario &scenario, const std::filesystem::path &dir);

}  // namespace contplace
