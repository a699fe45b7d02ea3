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

#include "cprepair/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace cprepair {

Matrix symplectic_form(int modes) {
  Matrix s = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    s(2 * k, 2 * k + 1) = 1.0;
    s(2 * k + 1, 2 * k) = -1.0;
  }
  return s;
}

double asymmetry(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& h) {
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::Vector2d hermitian_eigenvalues_2x2(double a, Complex c, double d) {
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double radius = std::hypot(half_diff, std::abs(c));
  const double det = a * d - std::norm(c);
  double lo = mean - radius;
  double hi = mean + radius;
  // Recover the smaller-magnitude root from the product when the larger one
  // is well away from zero.
  if (mean > 0.0 && hi > 0.0) {
    lo = det / hi;
  } else if (mean < 0.0 && lo < 0.0) {
    hi = det / lo;
  }
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

Vector hermitian_eigenvalues(const CMatrix& h) {
  if (h.rows() == 2) {
    return hermitian_eigenvalues_2x2(h(0, 0).real(), h(0, 1), h(1, 1).real());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

HermitianEigen hermitian_eigen(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const CMatrix& h) { return hermitian_eigenvalues(h)(0); }

double min_eigenvalue(const Matrix& s) {
  if (s.rows() == 2) {
    return hermitian_eigenvalues_2x2(s(0, 0), Complex(0.5 * (s(0, 1) + s(1, 0))), s(1, 1))(0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Matrix sqrt_psd(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

Matrix real_symmetric_part(const CMatrix& h) {
  const Matrix re = h.real();
  return 0.5 * (re + re.transpose());
}

}  // namespace cprepair
