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

#include <optional>

#include "contplace/affinity.h"
#include "contplace/model.h"

namespace contplace {

inline constexpr long kDefaultNodeBudget = 10'000'000;

// Scale at which exhaustive search is expected to finish quickly.
inline constexpr long kOracleMaxInstances = 8;
inline constexpr std::size_t kOracleMaxMachines = 4;

bool WithinOracleScale(const Scenario &scenario);

struct OracleResult {
  std::optional<AllocationMatrix> optimal;
  std::optional<double> optimal_reduced_cost;
  long nodes_explored = 0;
  /// True iff the whole search space was enumerated. When false the best
  /// allocation found (if any) is feasible but not proven optimal.
  bool exhausted = false;
};

/// Minimizes the reduced cost over every feasible-complete allocation.
///
/// The search enumerates per-application count vectors (b_i0, ..., b_iM-1)
/// rather than labeled instances, in lexicographically ascending order, and
/// prunes on anti-affinity and capacity. Among allocations with equal cost the
/// first one found, i.e. the row-major lexicographically smallest, is kept.
/// `budget` caps the number of search nodes and must be positive.
OracleResult OptimalPlace(const Scenario &scenario, const AffinityMatrix &affinity,
                          long budget = kDefaultNodeBudget);

enum class Feasibility { kFeasible, kInfeasible, kIndeterminate };

struct FeasibilityResult {
  Feasibility verdict = Feasibility::kIndeterminate;
  long nodes_explored = 0;
  bool exhausted = false;
};

/// Decides whether any feasible-complete allocation exists, ignoring cost.
/// Reports kIndeterminate when the budget runs out first.
FeasibilityResult FeasibilityCheck(const Scenario &scenario,
                                   long budget = kDefaultNodeBudget);

}  // namespace contplace
