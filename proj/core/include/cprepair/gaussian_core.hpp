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

// Covariance-level Gaussian state algebra.
//
// Conventions: canonical operators obey [Q_j, P_k] = i delta_jk, ordering is
// (Q_1, P_1, Q_2, P_2, ...), and covariances are Gamma_jk = <{R_j, R_k}> for
// centred states, so the vacuum is the identity and a covariance is physical
// iff Gamma + i*sigma >= 0 (all symplectic eigenvalues >= 1).
//
// Fidelity is the squared Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma
// sqrt(rho)))^2, so that F = cos^2(A) for the Bures angle A.

#include <optional>
#include <vector>

#include "cprepair/linalg.hpp"

namespace cprepair {

/// Real symmetric 2n x 2n covariance matrix. Construction rejects inputs
/// whose asymmetry exceeds kSymmetryTol and stores the symmetrised matrix.
/// Physicality is a separate question (see physicality_check).
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const Matrix& m);

  static CovarianceMatrix vacuum(int modes);

  int modes() const noexcept { return static_cast<int>(m_.rows() / 2); }
  const Matrix& matrix() const noexcept { return m_; }

  friend bool operator==(const CovarianceMatrix& a, const CovarianceMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

/// One-mode squeezed thermal data: Gamma = diag(nu e^{2r}, nu e^{-2r}).
struct SqueezedThermalParams {
  double nu = 1.0;
  double r = 0.0;
};

struct PhysicalityResult {
  bool physical = false;
  /// Min eigenvalue of Gamma + i*sigma. Not a symplectic invariant.
  double margin = 0.0;
  /// nu_min - 1, the symplectically invariant distance to the uncertainty
  /// boundary. Empty when Gamma is not positive definite.
  std::optional<double> symplectic_gap;
};

PhysicalityResult physicality_check(const CovarianceMatrix& gamma);

/// Symplectic eigenvalues nu_1 >= ... >= nu_n, from the spectrum of the
/// Hermitian matrix i Gamma^{1/2} sigma Gamma^{1/2} (isospectral to i sigma
/// Gamma). Throws DegenerateInputError unless Gamma is positive definite.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma);

CovarianceMatrix squeezed_thermal_cov(const SqueezedThermalParams& p);

/// Inverse of squeezed_thermal_cov for an arbitrary one-mode covariance:
/// nu = sqrt(det Gamma), cosh(2r) = Tr Gamma / (2 nu). The squeezing angle
/// is discarded.
SqueezedThermalParams one_mode_williamson(const CovarianceMatrix& gamma);

struct FidelityValue {
  double f = 1.0;      // squared Uhlmann fidelity, in [0, 1]
  double angle = 0.0;  // Bures angle arccos(sqrt(f)), in [0, pi/2]
};

/// Fidelity between centred Gaussian states. One-mode inputs use the
/// determinant formula; multimode inputs use the general auxiliary-matrix
/// formula. Throws InvalidInputError on unphysical input.
FidelityValue gaussian_fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b);

/// One-mode route: F = 2 / (sqrt(Delta + L) - sqrt(L)) with
/// Delta = det(A + B), L = (det A - 1)(det B - 1).
double one_mode_fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b);

/// General n-mode route through the auxiliary covariance
/// V_aux = sigma^T (V1 + V2)^{-1} (sigma/4 + V2 sigma V1), V = Gamma/2.
double multimode_fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b);

/// arccos(sqrt(f)). Accepts f within 1e-12 outside [0, 1] and clamps.
double bures_angle(double f);

}  // namespace cprepair
