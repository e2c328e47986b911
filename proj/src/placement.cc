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

#include "contplace/placement.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "contplace/cost.h"

namespace contplace {

namespace {

// Mutable state shared by all heuristics: allocation, per-machine load and the
// event trace.
class PlacementRun {
 public:
  PlacementRun(const Scenario &scenario)
      : scenario_(scenario),
        used_(scenario.num_machines()),
        pi_(scenario.num_machines(), 0.0) {
    outcome_.allocation = EmptyAllocation(scenario);
    outcome_.trace.reserve(scenario.total_instances());
  }

  std::size_t machines() const { return scenario_.num_machines(); }

  bool CanHost(int app, int machine) {
    ++outcome_.pairs_examined;
    if (scenario_.anti_affinity(app, machine)) return false;
    return Fits(scenario_.applications[app].demand,
                scenario_.machines[machine].capacity - used_[machine]);
  }

  double Pi(int machine) const { return pi_[machine]; }

  double PiAfter(int app, int machine) const {
    double pi = (used_[machine].cpu + scenario_.applications[app].demand.cpu) /
                scenario_.machines[machine].capacity.cpu;
    return std::clamp(pi, pi_[machine], 1.0);
  }

  void Place(int app, int instance, int machine) {
    double pi_new = PiAfter(app, machine);
    used_[machine] += scenario_.applications[app].demand;
    pi_[machine] = pi_new;
    ++outcome_.allocation(app, machine);
    outcome_.trace.push_back({app, instance, machine});
  }

  void Fail(int app, int instance) { outcome_.failed_at = FailedAt{app, instance}; }

  PlacementOutcome Finish() {
    outcome_.feasible = !outcome_.failed_at.has_value();
    return std::move(outcome_);
  }

 private:
  const Scenario &scenario_;
  std::vector<ResourceVector> used_;
  std::vector<double> pi_;
  PlacementOutcome outcome_;
};

void CheckInputs(const Scenario &scenario, const AffinityMatrix &affinity) {
  ValidateScenario(scenario);
  if (affinity.kind != AffinityKind::kFinal) {
    throw std::invalid_argument("placement needs the final affinity matrix");
  }
  if (!affinity.values.SameShape(scenario.num_applications(), scenario.num_machines())) {
    throw DimensionError("affinity matrix shape does not match scenario");
  }
}

// Runs `choose(app, run)` for every instance in sorted order. `choose` returns
// the target machine or nullopt when nothing qualifies; `after_place` sees each
// committed placement.
template <typename Choose, typename AfterPlace>
PlacementOutcome RunGreedy(const Scenario &scenario, Choose &&choose,
                           AfterPlace &&after_place) {
  PlacementRun run(scenario);
  for (int app : SortApplications(scenario.applications)) {
    for (int k = 0; k < scenario.applications[app].instances; ++k) {
      std::optional<int> target = choose(app, run);
      if (!target) {
        run.Fail(app, k);
        return run.Finish();
      }
      run.Place(app, k, *target);
      after_place(*target, run.Pi(*target));
    }
  }
  return run.Finish();
}

// Highest affinity among feasible machines, ties to lower utilization then
// lower id.
std::optional<int> MostAffine(int app, PlacementRun &run, const AffinityMatrix &affinity) {
  std::optional<int> best;
  for (int j = 0; j < static_cast<int>(run.machines()); ++j) {
    if (!run.CanHost(app, j)) continue;
    if (!best) {
      best = j;
      continue;
    }
    double f = affinity(app, j), f_best = affinity(app, *best);
    if (f > f_best || (f == f_best && run.Pi(j) < run.Pi(*best))) best = j;
  }
  return best;
}

}  // namespace

const char *AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kPap:
      return "pap";
    case Algorithm::kAap:
      return "aap";
    case Algorithm::kCpaap:
      return "cpaap";
    case Algorithm::kFirstFit:
      return "first_fit";
    case Algorithm::kOracle:
      return "oracle";
  }
  return "unknown";
}

std::optional<Algorithm> ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kPap, Algorithm::kAap, Algorithm::kCpaap,
                      Algorithm::kFirstFit, Algorithm::kOracle}) {
    if (name == AlgorithmName(a)) return a;
  }
  return std::nullopt;
}

std::vector<int> SortApplications(std::span<const Application> applications) {
  std::vector<int> order(applications.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) {
    const ResourceVector &d = applications[i].demand;
    return std::make_tuple(d.cpu, d.io, d.nw, d.mem);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return key(a) > key(b); });
  return order;
}

PapPriorityState::PapPriorityState(std::size_t machines)
    : omega_(machines, 0.0), pi_(machines, 0.0) {
  for (std::size_t j = 0; j < machines; ++j) queue_.emplace(0.0, static_cast<int>(j));
}

void PapPriorityState::Update(int machine, double pi, double threshold) {
  queue_.erase({omega_[machine], machine});
  pi_[machine] = pi;
  double &omega = omega_[machine];
  if (omega < threshold) {
    omega = pi;
  } else if (omega < 1.0) {
    omega = 1.0;
  } else {
    omega *= 2.0;
  }
  queue_.emplace(omega, machine);
}

PlacementOutcome PapPlace(const Scenario &scenario, const AffinityMatrix &affinity) {
  CheckInputs(scenario, affinity);
  PapPriorityState priority(scenario.num_machines());
  return RunGreedy(
      scenario,
      [&](int app, PlacementRun &run) {
        return priority.FirstUsable([&](int j) { return run.CanHost(app, j); });
      },
      [&](int machine, double pi) {
        priority.Update(machine, pi, scenario.PiThreshold(machine));
      });
}

PlacementOutcome AapPlace(const Scenario &scenario, const AffinityMatrix &affinity) {
  CheckInputs(scenario, affinity);
  return RunGreedy(
      scenario,
      [&](int app, PlacementRun &run) { return MostAffine(app, run, affinity); },
      [](int, double) {});
}

PlacementOutcome CpaapPlace(const Scenario &scenario, const AffinityMatrix &affinity) {
  CheckInputs(scenario, affinity);
  // Machines ordered by current utilization, ties by id.
  std::set<std::pair<double, int>> by_pi;
  for (int j = 0; j < static_cast<int>(scenario.num_machines()); ++j) by_pi.emplace(0.0, j);
  std::vector<double> queued_pi(scenario.num_machines(), 0.0);

  return RunGreedy(
      scenario,
      [&](int app, PlacementRun &run) -> std::optional<int> {
        std::optional<int> coolest;
        for (const auto &[pi, j] : by_pi) {
          if (run.CanHost(app, j)) {
            coolest = j;
            break;
          }
        }
        if (!coolest) return std::nullopt;
        std::optional<int> affine = MostAffine(app, run, affinity);
        if (*affine == *coolest) return coolest;

        auto cost = [&](int j) {
          return DeltaCost(scenario.machines[j], run.Pi(j), run.PiAfter(app, j),
                           affinity(app, j), scenario.alpha);
        };
        return cost(*coolest) <= cost(*affine) ? coolest : affine;
      },
      [&](int machine, double pi) {
        by_pi.erase({queued_pi[machine], machine});
        queued_pi[machine] = pi;
        by_pi.emplace(pi, machine);
      });
}

PlacementOutcome FirstFitPlace(const Scenario &scenario) {
  ValidateScenario(scenario);
  return RunGreedy(
      scenario,
      [&](int app, PlacementRun &run) -> std::optional<int> {
        for (int j = 0; j < static_cast<int>(run.machines()); ++j) {
          if (run.CanHost(app, j)) return j;
        }
        return std::nullopt;
      },
      [](int, double) {});
}

PlacementOutcome Place(Algorithm algorithm, const Scenario &scenario,
                       const AffinityMatrix &affinity) {
  switch (algorithm) {
    case Algorithm::kPap:
      return PapPlace(scenario, affinity);
    case Algorithm::kAap:
      return AapPlace(scenario, affinity);
    case Algorithm::kCpaap:
      return CpaapPlace(scenario, affinity);
    case Algorithm::kFirstFit:
      return FirstFitPlace(scenario);
    case Algorithm::kOracle:
      break;
  }
  throw std::invalid_argument("the exact oracle is not a placement heuristic");
}

}  // namespace contplace
