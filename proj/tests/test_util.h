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

// Scenario builders and independent reference computations shared by the unit
// and acceptance tests. Nothing here calls into the cost or placement code
// except where noted.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "contplace/affinity.h"
#include "contplace/cost.h"
#include "contplace/model.h"
#include "contplace/placement.h"
#include "contplace/workload.h"

namespace contplace::testing {

inline Machine MakeMachine(int id, ResourceVector cap, double p_idle = 100.0,
                           double p_max = 200.0) {
  Machine m;
  m.id = id;
  m.capacity = cap;
  m.p_idle = p_idle;
  m.p_max = p_max;
  return m;
}

inline Application MakeApp(int id, ResourceVector demand, int instances = 1) {
  Application a;
  a.id = id;
  a.demand = demand;
  a.instances = instances;
  return a;
}

/// Scenario with all-zero affinity matrices and default weights/alpha.
inline Scenario MakeScenario(std::vector<Machine> machines, std::vector<Application> apps,
                             double alpha = kDefaultAlpha) {
  Scenario s;
  s.machines = std::move(machines);
  s.applications = std::move(apps);
  s.user_affinity = BinaryMatrix(s.applications.size(), s.machines.size(), 0);
  s.anti_affinity = BinaryMatrix(s.applications.size(), s.machines.size(), 0);
  s.alpha = alpha;
  return s;
}

/// Final-kind affinity matrix with explicit values, row per application.
inline AffinityMatrix MakeFinal(const std::vector<std::vector<double>> &rows) {
  AffinityMatrix f{Matrix<double>(rows.size(), rows.empty() ? 0 : rows[0].size()),
                   AffinityKind::kFinal};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) f.values(i, j) = rows[i][j];
  }
  return f;
}

inline bool RelClose(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Reduced objective written out directly from its definition.
inline double ReferenceReducedCost(const Scenario &s, const AllocationMatrix &b,
                                   const AffinityMatrix &f) {
  double total = 0.0;
  for (std::size_t j = 0; j < s.num_machines(); ++j) {
    double cpu = 0.0;
    for (std::size_t i = 0; i < s.num_applications(); ++i) {
      cpu += s.applications[i].demand.cpu * b(i, j);
    }
    double pi = cpu / s.machines[j].capacity.cpu;
    total += (s.machines[j].p_max - s.machines[j].p_idle) * pi * pi * pi;
  }
  for (std::size_t i = 0; i < s.num_applications(); ++i) {
    for (std::size_t j = 0; j < s.num_machines(); ++j) {
      total -= s.alpha * f(i, j) * b(i, j);
    }
  }
  return total;
}

/// Capacity, anti-affinity and completeness checked from scratch, with the
/// same relative slack the library allows for summation residue.
inline bool ReferenceFeasible(const Scenario &s, const AllocationMatrix &b) {
  for (std::size_t i = 0; i < s.num_applications(); ++i) {
    int placed = 0;
    for (std::size_t j = 0; j < s.num_machines(); ++j) {
      if (b(i, j) < 0) return false;
      if (b(i, j) > 0 && s.anti_affinity(i, j)) return false;
      placed += b(i, j);
    }
    if (placed != s.applications[i].instances) return false;
  }
  for (std::size_t j = 0; j < s.num_machines(); ++j) {
    double used[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < s.num_applications(); ++i) {
      const ResourceVector &d = s.applications[i].demand;
      used[0] += d.cpu * b(i, j);
      used[1] += d.io * b(i, j);
      used[2] += d.nw * b(i, j);
      used[3] += d.mem * b(i, j);
    }
    const ResourceVector &c = s.machines[j].capacity;
    double cap[4] = {c.cpu, c.io, c.nw, c.mem};
    for (int r = 0; r < 4; ++r) {
      if (used[r] > cap[r] + 1e-9 * std::max(1.0, cap[r])) return false;
    }
  }
  return true;
}

struct LabeledOptimum {
  std::optional<double> cost;
  std::optional<AllocationMatrix> allocation;
};

/// Brute force over labeled instances: every instance independently picks a
/// machine (M^I assignments). Costs come from ReferenceReducedCost.
inline LabeledOptimum LabeledBruteForce(const Scenario &s, const AffinityMatrix &f) {
  std::vector<int> owner;
  for (std::size_t i = 0; i < s.num_applications(); ++i) {
    for (int k = 0; k < s.applications[i].instances; ++k) owner.push_back(static_cast<int>(i));
  }
  const int m = static_cast<int>(s.num_machines());
  std::vector<int> choice(owner.size(), 0);
  LabeledOptimum best;
  while (true) {
    AllocationMatrix b = EmptyAllocation(s);
    for (std::size_t t = 0; t < owner.size(); ++t) ++b(owner[t], choice[t]);
    if (ReferenceFeasible(s, b)) {
      double c = ReferenceReducedCost(s, b, f);
      if (!best.cost || c < *best.cost) {
        best.cost = c;
        best.allocation = b;
      }
    }
    std::size_t t = 0;
    while (t < choice.size() && ++choice[t] == m) choice[t++] = 0;
    if (t == choice.size()) break;
  }
  return best;
}

/// Sum of per-step delta costs obtained by replaying a placement trace.
/// Uses DeltaCost but tracks utilization itself.
inline double ReplayDeltaSum(const Scenario &s, const AffinityMatrix &f,
                             const std::vector<PlacementEvent> &trace) {
  std::vector<double> cpu(s.num_machines(), 0.0);
  double sum = 0.0;
  for (const PlacementEvent &e : trace) {
    const Machine &m = s.machines[e.machine];
    double before = cpu[e.machine] / m.capacity.cpu;
    cpu[e.machine] += s.applications[e.app].demand.cpu;
    double after = std::min(1.0, cpu[e.machine] / m.capacity.cpu);
    sum += DeltaCost(m, std::min(before, after), after, f(e.app, e.machine), s.alpha);
  }
  return sum;
}

/// Small random scenario generator used by property tests.
inline Scenario RandomScenario(std::uint64_t seed, int machines, int apps,
                               double anti_fraction, IntInterval instances = {1, 4}) {
  GeneratorConfig c;
  c.machine_count = machines;
  c.application_count = apps;
  c.anti_affinity_fraction = anti_fraction;
  c.instance_range = instances;
  c.seed = seed;
  return GenerateSynthetic(c);
}

}  // namespace contplace::testing
