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

// Shared generators and independent checks for the test binaries.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cprepair/gaussian_core.hpp"
#include "cprepair/generator_cp.hpp"
#include "cprepair/linalg.hpp"

namespace cprepair::testing {

class Rng {
 public:
  explicit Rng(unsigned seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  std::mt19937_64& engine() { return gen_; }

  Matrix gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  Matrix symmetric(int n) {
    const Matrix a = gaussian_matrix(n, n);
    return 0.5 * (a + a.transpose());
  }

  /// Symmetric positive definite with eigenvalues in [lo, hi].
  Matrix spd(int n, double lo, double hi) {
    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, n));
    const Matrix q = qr.householderQ();
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = uniform(lo, hi);
    return q * d.asDiagonal() * q.transpose();
  }

  SqueezedThermalParams squeezed_thermal(double nu_lo, double nu_hi, double r_hi) {
    return {uniform(nu_lo, nu_hi), uniform(0.0, r_hi)};
  }

  /// Random physical n-mode covariance S diag(nu) S^T with S symplectic,
  /// built from passive rotations and single-mode squeezers.
  Matrix physical_covariance(int modes, double nu_lo = 1.0, double nu_hi = 3.0) {
    const int dim = 2 * modes;
    Matrix g = Matrix::Zero(dim, dim);
    for (int k = 0; k < modes; ++k) g.block(2 * k, 2 * k, 2, 2) = uniform(nu_lo, nu_hi) * Matrix::Identity(2, 2);
    const Matrix s = random_symplectic(modes);
    return s * g * s.transpose();
  }

  Matrix random_symplectic(int modes) {
    const int dim = 2 * modes;
    Matrix s = Matrix::Identity(dim, dim);
    for (int layer = 0; layer < 3; ++layer) {
      Matrix sq = Matrix::Identity(dim, dim);
      for (int k = 0; k < modes; ++k) {
        const double r = uniform(-0.6, 0.6);
        sq(2 * k, 2 * k) = std::exp(r);
        sq(2 * k + 1, 2 * k + 1) = std::exp(-r);
      }
      s = passive(modes) * sq * s;
    }
    return s;
  }

  /// Orthogonal symplectic: the real form of a random unitary.
  Matrix passive(int modes) {
    Eigen::MatrixXcd z(modes, modes);
    for (int i = 0; i < modes; ++i)
      for (int j = 0; j < modes; ++j) z(i, j) = Complex(normal(), normal());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    const Eigen::MatrixXcd u = qr.householderQ();
    Matrix o(2 * modes, 2 * modes);
    for (int i = 0; i < modes; ++i) {
      for (int j = 0; j < modes; ++j) {
        const Complex c = u(i, j);
        o(2 * i, 2 * j) = c.real();
        o(2 * i, 2 * j + 1) = -c.imag();
        o(2 * i + 1, 2 * j) = c.imag();
        o(2 * i + 1, 2 * j + 1) = c.real();
      }
    }
    return o;
  }

  GaussianGenerator generator(int modes) {
    const int dim = 2 * modes;
    return {gaussian_matrix(dim, dim), symmetric(dim)};
  }

 private:
  std::mt19937_64 gen_;
};

/// Eigenvalues of a Hermitian matrix through its real 2n x 2n embedding
/// [[Re, -Im], [Im, Re]], whose spectrum is that of H with every value
/// doubled. Independent of the complex solver under test.
inline Vector embedded_hermitian_eigenvalues(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  Matrix e(2 * n, 2 * n);
  e << h.real(), -h.imag(), h.imag(), h.real();
  Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = 0.5 * (es.eigenvalues()(2 * i) + es.eigenvalues()(2 * i + 1));
  return out;
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace cprepair::testing
