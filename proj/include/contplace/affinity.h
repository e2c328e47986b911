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

#include "contplace/matrix.h"
#include "contplace/model.h"

namespace contplace {

enum class AffinityKind { kSystem, kFinal };

/// N x M matrix of affinity scores in [0, 1].
struct AffinityMatrix {
  Matrix<double> values;
  AffinityKind kind = AffinityKind::kSystem;

  double operator()(std::size_t app, std::size_t machine) const {
    return values(app, machine);
  }
};

/// Resource-headroom score of `app` on `machine`.
///
/// Zero when any demanded resource strictly exceeds the machine's capacity.
/// Otherwise the weighted sum over cpu, io, nw and mem of
/// (capacity - demand) / capacity. A resource whose capacity is zero can only
/// be reached with zero demand and contributes no headroom.
double SystemAffinity(const Machine &machine, const Application &app,
                      const AffinityWeights &weights);

/// S for every (application, machine) pair of the scenario.
AffinityMatrix SystemAffinityMatrix(const Scenario &scenario);

/// F = (U + S) / 2, element-wise. Throws DimensionError on shape mismatch and
/// std::invalid_argument when `system` is not a system matrix.
AffinityMatrix FinalAffinity(const BinaryMatrix &user, const AffinityMatrix &system);

/// Convenience composition of SystemAffinityMatrix and FinalAffinity.
AffinityMatrix FinalAffinity(const Scenario &scenario);

/// Fails with the first (i, j) where both the user-affinity and anti-affinity
/// bits are set.
ValidationReport ValidateUserAntiConsistency(const BinaryMatrix &user,
                                             const BinaryMatrix &anti);

}  // namespace contplace
