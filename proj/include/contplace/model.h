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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "contplace/matrix.h"

namespace contplace {

/// Raised when a scenario or one of its parts breaks a domain invariant.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Relative slack allowed when summed demands are compared against a
/// capacity. Placement tracks load incrementally while validation re-sums in
/// application order, so the two can disagree in the last bits.
inline constexpr double kCapacityTolerance = 1e-9;

/// Default utilization split point for the power-aware priority rule.
inline constexpr double kDefaultPiThreshold = 0.5;

struct ResourceVector {
  double cpu = 0.0;
  double io = 0.0;
  double nw = 0.0;
  double mem = 0.0;

  ResourceVector &operator+=(const ResourceVector &o) {
    cpu += o.cpu;
    io += o.io;
    nw += o.nw;
    mem += o.mem;
    return *this;
  }
  ResourceVector &operator-=(const ResourceVector &o) {
    cpu -= o.cpu;
    io -= o.io;
    nw -= o.nw;
    mem -= o.mem;
    return *this;
  }
  friend ResourceVector operator+(ResourceVector a, const ResourceVector &b) {
    return a += b;
  }
  friend ResourceVector operator-(ResourceVector a, const ResourceVector &b) {
    return a -= b;
  }
  friend ResourceVector operator*(ResourceVector a, double k) {
    a.cpu *= k;
    a.io *= k;
    a.nw *= k;
    a.mem *= k;
    return a;
  }
  friend bool operator==(const ResourceVector &, const ResourceVector &) = default;

  bool NonNegative() const;
  bool Finite() const;
  std::string ToString() const;
};

struct Machine {
  int id = 0;
  ResourceVector capacity;
  double p_idle = 0.0;  // watts
  double p_max = 0.0;   // watts
  /// Per-machine override of the scenario-wide utilization threshold.
  std::optional<double> pi_threshold;

  friend bool operator==(const Machine &, const Machine &) = default;
};

struct Application {
  int id = 0;
  ResourceVector demand;
  int instances = 1;

  friend bool operator==(const Application &, const Application &) = default;
};

/// Per-resource weights of the system affinity score (cpu, io, nw, mem).
struct AffinityWeights {
  double cpu = 0.4;
  double io = 0.2;
  double nw = 0.2;
  double mem = 0.2;

  static constexpr double kSumTolerance = 1e-9;

  /// Throws ScenarioError unless all weights are nonnegative and sum to one.
  void Validate() const;

  friend bool operator==(const AffinityWeights &, const AffinityWeights &) = default;
};

inline constexpr double kDefaultAlpha = 4.0;

struct Scenario {
  std::vector<Machine> machines;
  std::vector<Application> applications;
  BinaryMatrix user_affinity;  // N x M
  BinaryMatrix anti_affinity;  // N x M
  AffinityWeights weights;
  double alpha = kDefaultAlpha;
  double pi_threshold = kDefaultPiThreshold;

  std::size_t num_machines() const { return machines.size(); }
  std::size_t num_applications() const { return applications.size(); }
  /// Total instance count over all applications.
  long total_instances() const;
  double PiThreshold(std::size_t machine) const;

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// b_ij: number of instances of application i placed on machine j.
using AllocationMatrix = Matrix<int>;

inline AllocationMatrix EmptyAllocation(const Scenario &s) {
  return AllocationMatrix(s.num_applications(), s.num_machines(), 0);
}

/// Checks every scenario invariant; throws ScenarioError naming the first
/// violation.
void ValidateScenario(const Scenario &scenario);

enum class Constraint {
  kAntiAffinity,
  kCompleteness,
  kCapacity,
  kUserAntiExclusion,
};

const char *ConstraintName(Constraint c);

/// Location of a violation. Fields that do not apply to a constraint are -1
/// (completeness has no machine, capacity has no single application).
struct Witness {
  int app = -1;
  int machine = -1;
  friend bool operator==(const Witness &, const Witness &) = default;
};

struct ConstraintCheck {
  Constraint constraint;
  bool passed = true;
  std::optional<Witness> witness;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConstraintCheck> checks;

  bool ok() const;
  const ConstraintCheck &Get(Constraint c) const;
  bool Passed(Constraint c) const { return Get(c).passed; }
  std::string Summary() const;
};

/// v_j minus the demand of every instance currently placed on `machine`.
/// Throws DimensionError when the allocation and application list disagree.
ResourceVector RemainingCapacity(const Machine &machine,
                                 const AllocationMatrix &allocation,
                                 std::span<const Application> applications);

/// True iff `demand` fits inside `remaining` in all four resources.
bool Fits(const ResourceVector &demand, const ResourceVector &remaining);

/// Evaluates anti-affinity, completeness and capacity for `allocation`.
/// Passing all three makes the allocation feasible-complete.
ValidationReport ValidateAllocation(const Scenario &scenario,
                                    const AllocationMatrix &allocation);

}  // namespace contplace
