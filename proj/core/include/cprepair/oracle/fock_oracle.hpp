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

// Truncated Fock-space oracle for one mode. Slow and only as accurate as the
// cutoff; exists to check the covariance-level closed forms.

#include "cprepair/gaussian_core.hpp"
#include "cprepair/linalg.hpp"

namespace cprepair::oracle {

struct FockState {
  int cutoff = 0;
  CMatrix rho;
  double truncation_deficit = 0.0;  // 1 - Tr rho
};

inline constexpr double kDefaultMaxDeficit = 1e-8;
/// Extra levels used while building a state before truncating back.
inline constexpr int kCutoffPadding = 16;

/// Thermal spectrum p_k = (1 - lambda) lambda^k conjugated by the squeezer
/// exp((r/2)(a^dag^2 - a^2)), which stretches Q: the covariance of the result
/// is diag(nu e^{2r}, nu e^{-2r}). Throws TruncationError (with a suggested
/// cutoff) if more than `max_deficit` of the trace is lost.
FockState fock_gaussian_state(const SqueezedThermalParams& p, int cutoff,
                              double max_deficit = kDefaultMaxDeficit);

/// Smallest cutoff from a doubling search starting at 16 that meets
/// `max_deficit`, capped at 1024.
int suggest_cutoff(const SqueezedThermalParams& p, double max_deficit = kDefaultMaxDeficit);

/// Annihilation operator and quadratures Q = (a + a^dag)/sqrt2,
/// P = (a - a^dag)/(i sqrt2), truncated to `dim` levels.
CMatrix annihilation(int dim);
CMatrix quadrature_q(int dim);
CMatrix quadrature_p(int dim);

/// Second moments Gamma_jk = <{R_j, R_k}> of a truncated state.
Matrix fock_covariance(const FockState& s);

/// Squared Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
double fock_fidelity(const FockState& a, const FockState& b,
                     double max_deficit = kDefaultMaxDeficit);

enum class Quadrature { q, p };

/// d/dx of the state displaced by x along the quadrature:
/// -i[P, rho] for a Q shift, i[Q, rho] for a P shift.
CMatrix displacement_tangent(const FockState& s, Quadrature direction);

enum class MonotoneMetric { bkm, bures };

/// Petz form sum_ij |X_ij|^2 / (p_j f(p_i/p_j)) in the eigenbasis of rho, with
/// f = (t-1)/ln t (BKM) or (1+t)/2 scaled by 1/4 (Bures). Eigenvalues below
/// 1e-14 are dropped together with the matching rows and columns of X.
double fock_monotone_metric(const FockState& s, const CMatrix& tangent, MonotoneMetric kind);

}  // namespace cprepair::oracle
