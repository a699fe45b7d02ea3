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

#include <complex>

#include <Eigen/Dense>

namespace cprepair {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Symmetry gate applied to every real symmetric input.
inline constexpr double kSymmetryTol = 1e-9;
/// Eigenvalues above -kPsdTol count as nonnegative.
inline constexpr double kPsdTol = 1e-10;

/// Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode.
Matrix symplectic_form(int modes);

/// Max |A - A^T| entry.
double asymmetry(const Matrix& a);
/// Max |H - H^dagger| entry.
double hermiticity_defect(const CMatrix& h);

struct HermitianEigen {
  Vector values;    // ascending
  CMatrix vectors;  // columns, matching `values`
};

/// Eigenvalues of a 2x2 Hermitian [[a, c], [conj(c), d]], ascending.
/// Closed form; the smaller-magnitude root is recovered from the determinant
/// to avoid cancellation.
Eigen::Vector2d hermitian_eigenvalues_2x2(double a, Complex c, double d);

/// Ascending eigenvalues of a Hermitian matrix. 2x2 inputs use the closed
/// form above; larger ones go through a dense self-adjoint solver.
Vector hermitian_eigenvalues(const CMatrix& h);
HermitianEigen hermitian_eigen(const CMatrix& h);
double min_eigenvalue(const CMatrix& h);
double min_eigenvalue(const Matrix& s);

/// Principal square root of a symmetric positive semidefinite matrix.
Matrix sqrt_psd(const Matrix& s);

/// Real part of a Hermitian-valued result whose imaginary part should vanish.
Matrix real_symmetric_part(const CMatrix& h);

}  // namespace cprepair
