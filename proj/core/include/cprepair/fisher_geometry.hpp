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

// Petz monotone metrics restricted to displacement tangents.
//
// For a thermal mode with adjacent Fock ratio lambda = (nu-1)/(nu+1) the only
// eigenvalue ratios a displacement tangent sees are lambda and 1/lambda, so
// the Bures/BKM ratio on that sector is the single number
// r(lambda) = c_geom(nu). Per quadrature the two metrics are
//
//   Bures  1 / (2 nu)
//   BKM    ln((nu+1)/(nu-1))
//
// and the BKM weight J used by the repair and the de Bruijn increment is
// the latter transported to arbitrary covariances by symplectic congruence.
//
// Entropy-rate convention: the increment from added diffusion dD is taken as
// exactly (1/2) Tr(dD J) with this J.

#include "cprepair/gaussian_core.hpp"
#include "cprepair/linalg.hpp"

namespace cprepair {

/// r(t) = (1/2)(t - 1)/((t + 1) ln t), with r(1) = 1/4.
double metric_ratio(double t);

/// lambda = (nu - 1)/(nu + 1).
double lambda_ratio(double nu);

/// c_geom(nu) = 1 / (2 nu ln((nu+1)/(nu-1))), in (0, 1/4].
/// Throws NearPurityError for nu <= 1.
double c_geom(double nu);

/// BKM Fisher metric on displacements (real symmetric, positive definite).
/// J = S^{-T} (+)_k ln((nu_k+1)/(nu_k-1)) 1_2 S^{-1} for Gamma = S N S^T.
/// Throws NearPurityError if any nu_k <= 1 + 1e-9.
Matrix bkm_displacement_metric(const CovarianceMatrix& gamma);

/// Bures metric on displacements: S^{-T} (+)_k 1/(2 nu_k) 1_2 S^{-1}, which
/// is Gamma^{-1}/2 for every Gaussian state.
Matrix bures_displacement_metric(const CovarianceMatrix& gamma);

struct EndpointBound {
  double neg2_log_f = 0.0;    // -2 ln f
  double two_angle_sq = 0.0;  // 2 arccos^2(sqrt f)
  bool infinite = false;      // f == 0: -2 ln f diverges
};

/// (-2 ln f, 2 A^2) for the Bures angle A; the first never falls below the
/// second.
EndpointBound endpoint_bound(double f);

}  // namespace cprepair
