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

#include "contplace/model.h"

#include <cmath>
#include <sstream>

#include "contplace/affinity.h"

namespace contplace {

namespace {

std::string Cell(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

bool WithinCapacity(double used, double cap) {
  return used <= cap + kCapacityTolerance * std::max(1.0, cap);
}

}  // namespace

bool ResourceVector::NonNegative() const {
  return cpu >= 0 && io >= 0 && nw >= 0 && mem >= 0;
}

bool ResourceVector::Finite() const {
  return std::isfinite(cpu) && std::isfinite(io) && std::isfinite(nw) &&
         std::isfinite(mem);
}

std::string ResourceVector::ToString() const {
  std::ostringstream os;
  os << "(" << cpu << ", " << io << ", " << nw << ", " << mem << ")";
  return os.str();
}

void AffinityWeights::Validate() const {
  for (double w : {cpu, io, nw, mem}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ScenarioError("affinity weights must be finite and nonnegative");
    }
  }
  double sum = cpu + io + nw + mem;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "affinity weights must sum to 1, got " << sum;
    throw ScenarioError(os.str());
  }
}

long Scenario::total_instances() const {
  long total = 0;
  for (const auto &app : applications) total += app.instances;
  return total;
}

double Scenario::PiThreshold(std::size_t machine) const {
  const auto &override_value = machines.at(machine).pi_threshold;
  return override_value ? *override_value : pi_threshold;
}

void ValidateScenario(const Scenario &s) {
  const std::size_t m = s.num_machines();
  const std::size_t n = s.num_applications();
  if (m == 0) throw ScenarioError("scenario has no machines");
  if (n == 0) throw ScenarioError("scenario has no applications");

  auto in_threshold_range = [](double t) { return t > 0.0 && t <= 1.0; };

  for (std::size_t j = 0; j < m; ++j) {
    const Machine &mc = s.machines[j];
    const std::string where = "machine " + std::to_string(j);
    if (mc.id != static_cast<int>(j)) {
      throw ScenarioError(where + " has id " + std::to_string(mc.id));
    }
    if (!mc.capacity.Finite() || !mc.capacity.NonNegative()) {
      throw ScenarioError(where + " has a negative or non-finite capacity " +
                          mc.capacity.ToString());
    }
    if (!(mc.capacity.cpu > 0.0)) {
      throw ScenarioError(where + " has zero cpu capacity");
    }
    if (!(mc.p_idle >= 0.0) || !std::isfinite(mc.p_max) || !(mc.p_max >= mc.p_idle)) {
      throw ScenarioError(where + " needs 0 <= p_idle <= p_max");
    }
    if (mc.pi_threshold && !in_threshold_range(*mc.pi_threshold)) {
      throw ScenarioError(where + " pi threshold outside (0, 1]");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Application &app = s.applications[i];
    const std::string where = "application " + std::to_string(i);
    if (app.id != static_cast<int>(i)) {
      throw ScenarioError(where + " has id " + std::to_string(app.id));
    }
    if (app.instances < 1) throw ScenarioError(where + " needs at least one instance");
    if (!app.demand.Finite() || !app.demand.NonNegative()) {
      throw ScenarioError(where + " has a negative or non-finite demand " +
                          app.demand.ToString());
    }
    if (!(app.demand.cpu > 0.0)) {
      throw ScenarioError(where + " has zero cpu demand");
    }
  }

  if (!s.user_affinity.SameShape(n, m) || !s.anti_affinity.SameShape(n, m)) {
    throw ScenarioError("affinity matrices must be " + std::to_string(n) + "x" +
                        std::to_string(m));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (s.user_affinity(i, j) > 1 || s.anti_affinity(i, j) > 1) {
        throw ScenarioError("non-binary affinity entry at " + Cell(i, j));
      }
    }
  }
  ValidationReport exclusion =
      ValidateUserAntiConsistency(s.user_affinity, s.anti_affinity);
  if (!exclusion.ok()) throw ScenarioError(exclusion.Summary());

  s.weights.Validate();
  if (!(s.alpha >= 0.0) || !std::isfinite(s.alpha)) {
    throw ScenarioError("alpha must be finite and nonnegative");
  }
  if (!in_threshold_range(s.pi_threshold)) {
    throw ScenarioError("pi threshold outside (0, 1]");
  }
}

const char *ConstraintName(Constraint c) {
  switch (c) {
    case Constraint::kAntiAffinity:
      return "anti-affinity";
    case Constraint::kCompleteness:
      return "completeness";
    case Constraint::kCapacity:
      return "capacity";
    case Constraint::kUserAntiExclusion:
      return "user/anti-affinity exclusion";
  }
  return "unknown";
}

bool ValidationReport::ok() const {
  for (const auto &c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const ConstraintCheck &ValidationReport::Get(Constraint c) const {
  for (const auto &check : checks) {
    if (check.constraint == c) return check;
  }
  throw std::out_of_range(std::string("report has no ") + ConstraintName(c) +
                          " check");
}

std::string ValidationReport::Summary() const {
  std::ostringstream os;
  bool first = true;
  for (const auto &c : checks) {
    if (!first) os << "; ";
    first = false;
    os << ConstraintName(c.constraint) << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.passed && !c.detail.empty()) os << " (" << c.detail << ")";
  }
  return os.str();
}

ResourceVector RemainingCapacity(const Machine &machine,
                                 const AllocationMatrix &allocation,
                                 std::span<const Application> applications) {
  if (allocation.rows() != applications.size() || machine.id < 0 ||
      static_cast<std::size_t>(machine.id) >= allocation.cols()) {
    throw DimensionError("allocation shape does not match machine " +
                         std::to_string(machine.id) + " and " +
                         std::to_string(applications.size()) + " applications");
  }
  ResourceVector used;
  for (std::size_t i = 0; i < applications.size(); ++i) {
    int count = allocation(i, machine.id);
    if (count != 0) used += applications[i].demand * count;
  }
  ResourceVector rem = machine.capacity - used;
  // Rounding residue from summation is not a real overdraft.
  auto clamp = [](double &r, double cap) {
    if (r < 0.0 && WithinCapacity(cap - r, cap)) r = 0.0;
  };
  clamp(rem.cpu, machine.capacity.cpu);
  clamp(rem.io, machine.capacity.io);
  clamp(rem.nw, machine.capacity.nw);
  clamp(rem.mem, machine.capacity.mem);
  return rem;
}

bool Fits(const ResourceVector &demand, const ResourceVector &remaining) {
  return demand.cpu <= remaining.cpu && demand.io <= remaining.io &&
         demand.nw <= remaining.nw && demand.mem <= remaining.mem;
}

ValidationReport ValidateAllocation(const Scenario &s,
                                    const AllocationMatrix &allocation) {
  const std::size_t n = s.num_applications();
  const std::size_t m = s.num_machines();
  if (!allocation.SameShape(n, m)) {
    throw DimensionError("allocation must be " + std::to_string(n) + "x" +
                         std::to_string(m));
  }

  ConstraintCheck anti{Constraint::kAntiAffinity, true, std::nullopt, {}};
  ConstraintCheck complete{Constraint::kCompleteness, true, std::nullopt, {}};
  ConstraintCheck capacity{Constraint::kCapacity, true, std::nullopt, {}};

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (allocation(i, j) < 0) {
        throw DimensionError("negative allocation count at " + Cell(i, j));
      }
    }
  }

  for (std::size_t i = 0; i < n && anti.passed; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (s.anti_affinity(i, j) && allocation(i, j) > 0) {
        anti.passed = false;
        anti.witness = Witness{static_cast<int>(i), static_cast<int>(j)};
        anti.detail = "instance placed on anti-affine machine at " + Cell(i, j);
        break;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    long placed = 0;
    for (std::size_t j = 0; j < m; ++j) placed += allocation(i, j);
    if (placed != s.applications[i].instances) {
      complete.passed = false;
      complete.witness = Witness{static_cast<int>(i), -1};
      complete.detail = "application " + std::to_string(i) + " has " +
                        std::to_string(placed) + " of " +
                        std::to_string(s.applications[i].instances) + " instances";
      break;
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    ResourceVector used;
    for (std::size_t i = 0; i < n; ++i) {
      if (allocation(i, j) != 0) used += s.applications[i].demand * allocation(i, j);
    }
    const ResourceVector &cap = s.machines[j].capacity;
    if (!WithinCapacity(used.cpu, cap.cpu) || !WithinCapacity(used.io, cap.io) ||
        !WithinCapacity(used.nw, cap.nw) || !WithinCapacity(used.mem, cap.mem)) {
      capacity.passed = false;
      capacity.witness = Witness{-1, static_cast<int>(j)};
      capacity.detail = "machine " + std::to_string(j) + " load " + used.ToString() +
                        " exceeds " + cap.ToString();
      break;
    }
  }

  return ValidationReport{{anti, complete, capacity}};
}

}  // namespace contplace
