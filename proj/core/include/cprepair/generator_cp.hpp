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

// Gaussian channels and semigroup generators at the covariance level.
//
// A channel (X, Y) maps Gamma -> X Gamma X^T + Y and is completely positive
// iff Y - i(sigma - X sigma X^T) >= 0. A generator (K, D) drives
// dGamma/dt = K Gamma + Gamma K^T + D; expanding the channel condition to
// first order in dt gives the generator CP matrix
//
//   M = D + i(K sigma + sigma K^T)  >=  0.
//
// Reverse-time convention: the executed reverse decoder runs with drift
// -K^Bayes in a reversed clock, but admissibility is evaluated on
// M(K^Bayes). M(-K) is the complex conjugate of M(K), so both spectra agree
// and every CP statement here is independent of that choice.

#include "cprepair/gaussian_core.hpp"
#include "cprepair/linalg.hpp"

namespace cprepair {

struct GaussianChannel {
  Matrix X;
  Matrix Y;

  int modes() const noexcept { return static_cast<int>(X.rows() / 2); }
  /// Throws InvalidInputError on shape mismatch or asymmetric Y.
  void validate() const;
};

struct GaussianGenerator {
  Matrix K;
  Matrix D;

  int modes() const noexcept { return static_cast<int>(K.rows() / 2); }
  /// Shape and symmetry of D. Does not require D >= 0.
  void validate() const;
  /// D >= -kPsdTol, the classical requirement on a diffusion matrix.
  bool classical_diffusion_valid() const;
};

struct CpMatrix {
  CMatrix M;
  Vector eigenvalues;  // ascending

  double min_eigenvalue() const { return eigenvalues(0); }
  bool admissible() const { return eigenvalues(0) >= -kPsdTol; }
};

struct CpCheck {
  bool completely_positive = false;
  double margin = 0.0;  // min eigenvalue of Y - i(sigma - X sigma X^T)
};

/// Quantum-limited attenuator generator, K = -gamma*1, D = 2 gamma*1.
GaussianGenerator attenuator_generator(double gamma, int modes = 1);

/// Finite attenuator step of strength gamma*t:
/// X = e^{-gamma t} 1, Y = (1 - e^{-2 gamma t}) 1.
GaussianChannel attenuator_channel(double gamma_t, int modes = 1);

/// Euler step of a generator: X = 1 + K dt, Y = D dt.
GaussianChannel infinitesimal_channel(const GaussianGenerator& g, double dt);

CpMatrix generator_cp_matrix(const GaussianGenerator& g);

CpCheck hhw_cp_check(const GaussianChannel& c);

/// Y - i(sigma - X sigma X^T), the matrix whose positivity is CP.
CMatrix hhw_cp_matrix(const GaussianChannel& c);

/// Score-lifted reverse candidate: (K + D Gamma_ref^{-1}, D).
GaussianGenerator bayes_reverse_generator(const GaussianGenerator& forward,
                                          const CovarianceMatrix& reference);

struct NogoSpectrum {
  double lambda_minus = 0.0;  // 4 gamma (1 - cosh(2r)/nu)
  double lambda_plus = 0.0;   // 4 gamma cosh(2r)/nu
  /// Smaller of the two branches. The minus branch is the minimum only
  /// when cosh(2r)/nu >= 1/2, which covers every non-CP reference.
  double lambda_min() const { return lambda_minus < lambda_plus ? lambda_minus : lambda_plus; }
};

/// Closed-form spectrum of M^Bayes for the attenuator against a squeezed
/// thermal reference. CP fails iff cosh(2r) > nu.
NogoSpectrum nogo_spectrum(double gamma, const SqueezedThermalParams& p);
double nogo_lambda_min(double gamma, const SqueezedThermalParams& p);

/// M^Bayes for the one-mode attenuator at reference p, assembled from the
/// generator (not the closed form).
CpMatrix attenuator_bayes_cp_matrix(double gamma, const SqueezedThermalParams& p);

/// Two-mode squeezed vacuum [[mu 1, s Z], [s Z, mu 1]], s = sqrt(mu^2 - 1).
CovarianceMatrix tmsv_cov(double mu);

/// Schur complement of the reference block of (Phi x id)(TMSV_mu) + i sigma_AB,
/// computed explicitly with a numerical inverse. Equals
/// Y + i(sigma - X sigma X^T) for every mu > 1.
CMatrix tmsv_schur_witness(const GaussianChannel& c, double mu);

/// Y + i(sigma - X sigma X^T), the mu-independent value of the witness.
CMatrix tmsv_witness_closed_form(const GaussianChannel& c);

struct InfinitesimalWitness {
  double rate = 0.0;        // min eig S_mu(dt) / dt
  double rate_half = 0.0;   // same at dt/2
  double richardson = 0.0;  // 2 rate_half - rate, O(dt^2) accurate
};

/// Min eigenvalue of the TMSV witness for the Euler step of `g`, per unit
/// time. Tends to min eig M(g) as dt -> 0.
InfinitesimalWitness infinitesimal_witness(const GaussianGenerator& g, double dt = 1e-6,
                                           double mu = 2.0);

/// True iff sorted spectra of M(K) and M(-K) agree to `tol`.
bool sign_flip_spectrum_check(const GaussianGenerator& g, double tol = 1e-12);

}  // namespace cprepair
