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

#include <chrono>
#include <span>
#include <stdexcept>

#include "contplace/affinity.h"
#include "contplace/model.h"

namespace contplace {

/// Raised when a cost primitive is called outside its domain.
class ContractViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// CPU utilization of `machine`: placed cpu demand over cpu capacity.
/// Summation runs in ascending application order.
double Utilization(const Machine &machine, const AllocationMatrix &allocation,
                   std::span<const Application> applications);

/// Cubic power model: p_idle + (p_max - p_idle) * pi^3.
/// Throws ContractViolation when pi is outside [0, 1].
double MachinePower(const Machine &machine, double pi);

/// Increase in reduced cost from moving `machine` from pi_old to pi_new while
/// earning affinity f: (p_max - p_idle)(pi_new^3 - pi_old^3) - alpha * f.
/// Requires 0 <= pi_old <= pi_new <= 1.
double DeltaCost(const Machine &machine, double pi_old, double pi_new, double f,
                 double alpha);

struct CostBreakdown {
  double total = 0.0;    // power - alpha * payoff
  double reduced = 0.0;  // total without the constant idle term
  double power = 0.0;    // sum of per-machine power
  double payoff = 0.0;   // sum of f_ij * b_ij
  double idle = 0.0;     // sum of p_idle
};

/// Objective terms of `allocation`. `affinity` must be a final matrix.
CostBreakdown TotalCost(const Scenario &scenario, const AllocationMatrix &allocation,
                        const AffinityMatrix &affinity);

enum class PsiStatus {
  kOk,               // total cost > 0
  kNonPositiveCost,  // total cost < 0, value kept signed
  kUndefined,        // total cost == 0, value is NaN
};

const char *PsiStatusName(PsiStatus s);

struct MetricsReport {
  double total_cost = 0.0;
  double reduced_cost = 0.0;
  double power_cost = 0.0;
  double affinity_payoff = 0.0;
  double satisfaction_ratio = 0.0;  // rho
  double avg_utilization = 0.0;
  double payoff_ratio = 0.0;  // psi
  PsiStatus psi_status = PsiStatus::kOk;
  bool feasible = false;
  std::chrono::nanoseconds runtime{0};
};

/// Evaluation metrics of `allocation`. `feasible` is true only when the
/// allocation is feasible-complete; runtime is left for the caller to fill.
MetricsReport ComputeMetrics(const Scenario &scenario, const AllocationMatrix &allocation,
                             const AffinityMatrix &affinity);

}  // namespace contplace
