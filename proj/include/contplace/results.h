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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "contplace/placement.h"

namespace contplace {

inline constexpr std::string_view kResultsCsvHeader =
    "sweep_point,algorithm,seed,feasible,total_cost,reduced_cost,power_cost,payoff,"
    "rho,avg_util,psi,runtime_ms";

/// One algorithm run at one sweep point and seed.
struct ResultRow {
  double sweep_point = 0.0;
  Algorithm algorithm = Algorithm::kCpaap;
  std::uint64_t seed = 0;
  bool feasible = false;
  double total_cost = 0.0;
  double reduced_cost = 0.0;
  double power_cost = 0.0;
  double payoff = 0.0;
  double rho = 0.0;
  double avg_util = 0.0;
  double psi = 0.0;
  double runtime_ms = 0.0;
  // JSON-only fields.
  std::string psi_status = "ok";
  long pairs_examined = 0;
  std::string error;  // non-empty when the run could not be carried out

  friend bool operator==(const ResultRow &, const ResultRow &) = default;
};

/// Means over the feasible runs of one (sweep point, algorithm) cell.
struct AggregateRow {
  double sweep_point = 0.0;
  Algorithm algorithm = Algorithm::kCpaap;
  int runs = 0;
  int feasible_runs = 0;
  double mean_total_cost = 0.0;
  double mean_reduced_cost = 0.0;
  double mean_power_cost = 0.0;
  double mean_payoff = 0.0;
  double mean_rho = 0.0;
  double mean_avg_util = 0.0;
  double mean_psi = 0.0;
  double mean_runtime_ms = 0.0;

  friend bool operator==(const AggregateRow &, const AggregateRow &) = default;
};

struct ResultsTable {
  nlohmann::json config;  // fully resolved inputs
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;

  friend bool operator==(const ResultsTable &, const ResultsTable &) = default;
};

enum class ResultFormat { kCsv, kJson };

/// Orders rows by (sweep_point, algorithm, seed).
void SortRows(std::vector<ResultRow> &rows);

std::vector<AggregateRow> Aggregate(const std::vector<ResultRow> &rows);

void WriteCsv(const ResultsTable &table, std::ostream &out);
void WriteJson(const ResultsTable &table, std::ostream &out);

/// Writes `table` to `path`. Throws std::invalid_argument for an empty table
/// and std::runtime_error when the path cannot be written.
void EmitResults(const ResultsTable &table, ResultFormat format,
                 const std::filesystem::path &path);

/// Inverse of WriteJson.
ResultsTable ParseResultsJson(std::string_view text);

}  // namespace contplace
