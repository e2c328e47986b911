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

#include "contplace/cost.h"

#include <cmath>
#include <limits>
#include <string>

namespace contplace {

namespace {

double Cube(double x) { return x * x * x; }

bool InUnit(double pi) { return pi >= 0.0 && pi <= 1.0; }

}  // namespace

double Utilization(const Machine &machine, const AllocationMatrix &allocation,
                   std::span<const Application> applications) {
  if (allocation.rows() != applications.size() || machine.id < 0 ||
      static_cast<std::size_t>(machine.id) >= allocation.cols()) {
    throw DimensionError("allocation shape does not match machine " +
                         std::to_string(machine.id));
  }
  double used = 0.0;
  for (std::size_t i = 0; i < applications.size(); ++i) {
    used += applications[i].demand.cpu * allocation(i, machine.id);
  }
  double pi = used / machine.capacity.cpu;
  if (pi > 1.0 && pi <= 1.0 + kCapacityTolerance) pi = 1.0;
  return pi;
}

double MachinePower(const Machine &machine, double pi) {
  if (!InUnit(pi)) {
    throw ContractViolation("utilization " + std::to_string(pi) + " outside [0, 1]");
  }
  return machine.p_idle + (machine.p_max - machine.p_idle) * Cube(pi);
}

double DeltaCost(const Machine &machine, double pi_old, double pi_new, double f,
                 double alpha) {
  if (!InUnit(pi_old) || !InUnit(pi_new) || pi_new < pi_old) {
    throw ContractViolation("delta cost needs 0 <= pi_old <= pi_new <= 1, got " +
                            std::to_string(pi_old) + " -> " + std::to_string(pi_new));
  }
  return (machine.p_max - machine.p_idle) * (Cube(pi_new) - Cube(pi_old)) - alpha * f;
}

CostBreakdown TotalCost(const Scenario &scenario, const AllocationMatrix &allocation,
                        const AffinityMatrix &affinity) {
  if (affinity.kind != AffinityKind::kFinal) {
    throw std::invalid_argument("total cost needs the final affinity matrix");
  }
  const std::size_t n = scenario.num_applications();
  const std::size_t m = scenario.num_machines();
  if (!allocation.SameShape(n, m) || !affinity.values.SameShape(n, m)) {
    throw DimensionError("allocation or affinity shape does not match scenario");
  }

  CostBreakdown c;
  double dynamic = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const Machine &mc = scenario.machines[j];
    // Overloaded machines (pi > 1) are priced on the same curve so that
    // metrics of an infeasible allocation stay computable.
    double pi = Utilization(mc, allocation, scenario.applications);
    double extra = (mc.p_max - mc.p_idle) * Cube(pi);
    c.power += mc.p_idle + extra;
    c.idle += mc.p_idle;
    dynamic += extra;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      c.payoff += affinity(i, j) * allocation(i, j);
    }
  }
  c.total = c.power - scenario.alpha * c.payoff;
  c.reduced = dynamic - scenario.alpha * c.payoff;
  return c;
}

const char *PsiStatusName(PsiStatus s) {
  switch (s) {
    case PsiStatus::kOk:
      return "ok";
    case PsiStatus::kNonPositiveCost:
      return "non_positive_cost";
    case PsiStatus::kUndefined:
      return "undefined";
  }
  return "unknown";
}

MetricsReport ComputeMetrics(const Scenario &scenario, const AllocationMatrix &allocation,
                             const AffinityMatrix &affinity) {
  CostBreakdown cost = TotalCost(scenario, allocation, affinity);

  MetricsReport r;
  r.total_cost = cost.total;
  r.reduced_cost = cost.reduced;
  r.power_cost = cost.power;
  r.affinity_payoff = cost.payoff;

  long on_affine = 0;
  for (std::size_t i = 0; i < scenario.num_applications(); ++i) {
    for (std::size_t j = 0; j < scenario.num_machines(); ++j) {
      on_affine += static_cast<long>(scenario.user_affinity(i, j)) * allocation(i, j);
    }
  }
  long requested = scenario.total_instances();
  r.satisfaction_ratio =
      requested > 0 ? static_cast<double>(on_affine) / static_cast<double>(requested) : 0.0;

  double util_sum = 0.0;
  for (const Machine &mc : scenario.machines) {
    util_sum += Utilization(mc, allocation, scenario.applications);
  }
  r.avg_utilization = util_sum / static_cast<double>(scenario.num_machines());

  if (cost.total == 0.0) {
    r.payoff_ratio = std::numeric_limits<double>::quiet_NaN();
    r.psi_status = PsiStatus::kUndefined;
  } else {
    r.payoff_ratio = cost.payoff / cost.total;
    r.psi_status = cost.total > 0.0 ? PsiStatus::kOk : PsiStatus::kNonPositiveCost;
  }

  r.feasible = ValidateAllocation(scenario, allocation).ok();
  return r;
}

}  // namespace contplace
