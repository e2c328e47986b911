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

#include "contplace/affinity.h"

#include <algorithm>
#include <stdexcept>

namespace contplace {

namespace {

double Headroom(double cap, double req) {
  return cap > 0.0 ? (cap - req) / cap : 0.0;
}

}  // namespace

double SystemAffinity(const Machine &machine, const Application &app,
                      const AffinityWeights &w) {
  const ResourceVector &cap = machine.capacity;
  const ResourceVector &req = app.demand;
  if (cap.cpu < req.cpu || cap.io < req.io || cap.nw < req.nw || cap.mem < req.mem) {
    return 0.0;
  }
  double s = w.cpu * Headroom(cap.cpu, req.cpu) + w.io * Headroom(cap.io, req.io) +
             w.nw * Headroom(cap.nw, req.nw) + w.mem * Headroom(cap.mem, req.mem);
  // Weights may sum to 1 + 1e-9.
  return std::clamp(s, 0.0, 1.0);
}

AffinityMatrix SystemAffinityMatrix(const Scenario &scenario) {
  AffinityMatrix out{Matrix<double>(scenario.num_applications(), scenario.num_machines()),
                     AffinityKind::kSystem};
  for (std::size_t i = 0; i < scenario.num_applications(); ++i) {
    for (std::size_t j = 0; j < scenario.num_machines(); ++j) {
      out.values(i, j) = SystemAffinity(scenario.machines[j], scenario.applications[i],
                                        scenario.weights);
    }
  }
  return out;
}

AffinityMatrix FinalAffinity(const BinaryMatrix &user, const AffinityMatrix &system) {
  if (system.kind != AffinityKind::kSystem) {
    throw std::invalid_argument("final affinity needs a system affinity matrix");
  }
  if (!system.values.SameShape(user)) {
    throw DimensionError("user affinity and system affinity shapes differ");
  }
  AffinityMatrix out{Matrix<double>(user.rows(), user.cols()), AffinityKind::kFinal};
  for (std::size_t i = 0; i < user.rows(); ++i) {
    for (std::size_t j = 0; j < user.cols(); ++j) {
      out.values(i, j) = (static_cast<double>(user(i, j)) + system.values(i, j)) / 2.0;
    }
  }
  return out;
}

AffinityMatrix FinalAffinity(const Scenario &scenario) {
  return FinalAffinity(scenario.user_affinity, SystemAffinityMatrix(scenario));
}

ValidationReport ValidateUserAntiConsistency(const BinaryMatrix &user,
                                             const BinaryMatrix &anti) {
  if (!user.SameShape(anti)) {
    throw DimensionError("user affinity and anti-affinity shapes differ");
  }
  ConstraintCheck check{Constraint::kUserAntiExclusion, true, std::nullopt, {}};
  for (std::size_t i = 0; i < user.rows() && check.passed; ++i) {
    for (std::size_t j = 0; j < user.cols(); ++j) {
      if (user(i, j) && anti(i, j)) {
        check.passed = false;
        check.witness = Witness{static_cast<int>(i), static_cast<int>(j)};
        check.detail = "application " + std::to_string(i) +
                       " is both affine and anti-affine to machine " +
                       std::to_string(j);
        break;
      }
    }
  }
  return ValidationReport{{check}};
}

}  // namespace contplace
