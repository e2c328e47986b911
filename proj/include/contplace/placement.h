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
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "contplace/affinity.h"
#include "contplace/model.h"

namespace contplace {

enum class Algorithm { kPap, kAap, kCpaap, kFirstFit, kOracle };

const char *AlgorithmName(Algorithm a);
std::optional<Algorithm> ParseAlgorithm(std::string_view name);

struct PlacementEvent {
  int app = 0;
  int instance = 0;
  int machine = 0;
  friend bool operator==(const PlacementEvent &, const PlacementEvent &) = default;
};

struct FailedAt {
  int app = 0;
  int instance = 0;
  friend bool operator==(const FailedAt &, const FailedAt &) = default;
};

struct PlacementOutcome {
  AllocationMatrix allocation;
  bool feasible = false;
  std::optional<FailedAt> failed_at;
  std::vector<PlacementEvent> trace;
  /// Number of (instance, candidate machine) feasibility probes performed.
  long pairs_examined = 0;
};

/// Application indices in placement order: descending on
/// (cpu, io, nw, mem), ties by ascending id.
std::vector<int> SortApplications(std::span<const Application> applications);

/// Machine priority queue of the power-aware heuristic. Lower omega is served
/// first; ties go to the lower machine id.
class PapPriorityState {
 public:
  explicit PapPriorityState(std::size_t machines);

  /// Returns the first machine in priority order accepted by `usable`, or
  /// nullopt when none is. Machines that are skipped keep their priority.
  template <typename Pred>
  std::optional<int> FirstUsable(Pred &&usable) const {
    for (const auto &[omega, machine] : queue_) {
      if (usable(machine)) return machine;
    }
    return std::nullopt;
  }

  /// Records that `machine` just received an instance and now sits at `pi`,
  /// then applies the priority update:
  ///   omega < threshold  -> omega = pi
  ///   omega < 1          -> omega = 1
  ///   otherwise          -> omega doubles
  void Update(int machine, double pi, double threshold);

  double omega(int machine) const { return omega_[machine]; }
  double pi(int machine) const { return pi_[machine]; }

 private:
  std::vector<double> omega_;
  std::vector<double> pi_;
  std::set<std::pair<double, int>> queue_;
};

/// Power-aware placement: each instance goes to the first machine in
/// (omega, id) order that is not anti-affine and has room.
PlacementOutcome PapPlace(const Scenario &scenario, const AffinityMatrix &affinity);

/// Affinity-aware placement: each instance goes to the feasible machine with
/// the highest final affinity (ties: lower utilization, then lower id).
PlacementOutcome AapPlace(const Scenario &scenario, const AffinityMatrix &affinity);

/// Combined placement. For every instance two candidates are considered: the
/// feasible machine with the lowest utilization and the feasible machine with
/// the highest affinity. The instance goes to the first candidate when its
/// cost increase is no larger than the second's.
PlacementOutcome CpaapPlace(const Scenario &scenario, const AffinityMatrix &affinity);

/// Baseline: each instance goes to the lowest-id feasible machine.
PlacementOutcome FirstFitPlace(const Scenario &scenario);

/// Dispatches to one of the heuristics. kOracle is rejected; see oracle.h.
PlacementOutcome Place(Algorithm algorithm, const Scenario &scenario,
                       const AffinityMatrix &affinity);

}  // namespace contplace
