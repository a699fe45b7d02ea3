// Copyright 2026 The cprepair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal CP repair:
//
//   minimise   Tr(dD W)
//   subject to dD = dD^T >= 0,  M + dD >= 0,
//
// with M a Hermitian generator CP matrix and W a real positive-definite
// weight. Matrices are 2x2 or 4x4, so the solver is a dense log-det barrier
// method with Newton centring over the n(2n+1) free entries of dD.

#include "cprepair/linalg.hpp"

namespace cprepair {

struct RepairProblem {
  CMatrix M;
  Matrix W;
};

struct RepairResult {
  Matrix delta_d;
  double cost = 0.0;                // Tr(delta_d W)
  double feasibility_margin = 0.0;  // min eig(M + delta_d)
  double optimality_gap = 0.0;      // cost minus a certified lower bound
};

struct RepairOptions {
  /// Stop once the certified gap is below rel_gap * (1 + cost).
  double rel_gap = 1e-9;
  double barrier_growth = 8.0;
  int max_outer = 80;
  int max_newton = 200;
};

/// Weights with condition number above this are rejected.
inline constexpr double kMaxWeightCondition = 1e8;

/// Barrier-method solve. Returns delta_d = 0 exactly when M >= -kPsdTol.
/// The gap comes from an explicit dual point (Z >= 0, Re Z <= W), so
/// cost - optimality_gap is a true lower bound on the optimum.
RepairResult minimal_repair(const RepairProblem& p, const RepairOptions& opts = {});

/// Fast path for one-mode M = a*1 + b*i*sigma: dD* = max(0, |b| - a) * 1.
/// Optimal for isotropic W; for other W it is feasible but not minimal.
/// Throws WrongFastPathError if the projection residual exceeds 1e-10.
RepairResult isotropic_repair_closed_form(const CMatrix& M,
                                          const Matrix& W = Matrix::Identity(2, 2));

/// Throws InvalidInputError unless W is symmetric, positive definite and
/// within kMaxWeightCondition.
void validate_weight(const Matrix& W);

}  // namespace cprepair
