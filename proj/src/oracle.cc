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

#include "contplace/oracle.h"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "contplace/cost.h"

namespace contplace {

namespace {

// Same slack ValidateAllocation grants, so summation order never makes the
// oracle reject an allocation a heuristic built.
bool FitsWithSlack(const ResourceVector &load, const ResourceVector &cap) {
  auto ok = [](double used, double c) {
    return used <= c + kCapacityTolerance * std::max(1.0, c);
  };
  return ok(load.cpu, cap.cpu) && ok(load.io, cap.io) && ok(load.nw, cap.nw) &&
         ok(load.mem, cap.mem);
}

// Depth-first enumeration of count vectors, one application row at a time.
class CountEnumerator {
 public:
  // `on_leaf` is called with every complete feasible allocation and returns
  // false to stop the search.
  template <typename OnLeaf>
  CountEnumerator(const Scenario &scenario, long budget, OnLeaf &&on_leaf)
      : scenario_(scenario),
        budget_(budget),
        allocation_(EmptyAllocation(scenario)),
        used_(scenario.num_machines()) {
    if (budget <= 0) throw std::invalid_argument("oracle budget must be positive");
    stopped_ = false;
    Visit(0, 0, scenario.applications.empty() ? 0 : scenario.applications[0].instances,
          on_leaf);
  }

  long nodes() const { return nodes_; }
  bool exhausted() const { return !stopped_; }
  bool budget_hit() const { return budget_hit_; }

 private:
  template <typename OnLeaf>
  void Visit(std::size_t app, std::size_t machine, int remaining, OnLeaf &on_leaf) {
    if (stopped_) return;
    const std::size_t n = scenario_.num_applications();
    const std::size_t m = scenario_.num_machines();
    if (app == n) {
      if (!on_leaf(allocation_)) stopped_ = true;
      return;
    }
    if (machine == m) {
      if (remaining == 0) {
        int next = app + 1 < n ? scenario_.applications[app + 1].instances : 0;
        Visit(app + 1, 0, next, on_leaf);
      }
      return;
    }

    const ResourceVector &demand = scenario_.applications[app].demand;
    const ResourceVector &cap = scenario_.machines[machine].capacity;
    const bool last = machine + 1 == m;
    const int max_here = scenario_.anti_affinity(app, machine) ? 0 : remaining;
    const ResourceVector saved = used_[machine];

    for (int b = 0; b <= max_here; ++b) {
      if (b > 0) {
        // One more instance on this machine.
        if (!FitsWithSlack(used_[machine] + demand, cap)) break;
        used_[machine] += demand;
      }
      if (last && b != remaining) continue;
      if (nodes_ == budget_) {
        stopped_ = true;
        budget_hit_ = true;
        break;
      }
      ++nodes_;
      allocation_(app, machine) = b;
      Visit(app, machine + 1, remaining - b, on_leaf);
      if (stopped_) break;
    }
    allocation_(app, machine) = 0;
    used_[machine] = saved;
  }

  const Scenario &scenario_;
  long budget_;
  long nodes_ = 0;
  bool stopped_ = false;
  bool budget_hit_ = false;
  AllocationMatrix allocation_;
  std::vector<ResourceVector> used_;
};

}  // namespace

bool WithinOracleScale(const Scenario &scenario) {
  return scenario.total_instances() <= kOracleMaxInstances &&
         scenario.num_machines() <= kOracleMaxMachines;
}

OracleResult OptimalPlace(const Scenario &scenario, const AffinityMatrix &affinity,
                          long budget) {
  ValidateScenario(scenario);
  OracleResult result;
  CountEnumerator search(scenario, budget, [&](const AllocationMatrix &alloc) {
    double cost = TotalCost(scenario, alloc, affinity).reduced;
    if (!result.optimal_reduced_cost || cost < *result.optimal_reduced_cost) {
      result.optimal_reduced_cost = cost;
      result.optimal = alloc;
    }
    return true;
  });
  result.nodes_explored = search.nodes();
  result.exhausted = search.exhausted();
  return result;
}

FeasibilityResult FeasibilityCheck(const Scenario &scenario, long budget) {
  ValidateScenario(scenario);
  bool found = false;
  CountEnumerator search(scenario, budget, [&](const AllocationMatrix &) {
    found = true;
    return false;
  });
  FeasibilityResult result;
  result.nodes_explored = search.nodes();
  result.exhausted = !search.budget_hit();
  if (found) {
    result.verdict = Feasibility::kFeasible;
  } else {
    result.verdict = search.budget_hit() ? Feasibility::kIndeterminate
                                         : Feasibility::kInfeasible;
  }
  return result;
}

}  // namespace contplace
