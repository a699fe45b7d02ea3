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

#include "cprepair/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cprepair/errors.hpp"

namespace cprepair {

namespace {

void require_physical(const CovarianceMatrix& g, const char* what) {
  if (!physicality_check(g).physical) {
    throw InvalidInputError(std::string(what) + ": covariance violates Gamma + i sigma >= 0");
  }
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw InvalidInputError("covariance must be a non-empty square matrix of even order");
  }
  if (!m.allFinite()) throw InvalidInputError("covariance has non-finite entries");
  if (asymmetry(m) > kSymmetryTol) {
    throw InvalidInputError("covariance is not symmetric (asymmetry " +
                            std::to_string(asymmetry(m)) + ")");
  }
  m_ = 0.5 * (m + m.transpose());
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
  return CovarianceMatrix(Matrix::Identity(2 * modes, 2 * modes));
}

PhysicalityResult physicality_check(const CovarianceMatrix& gamma) {
  const Matrix& g = gamma.matrix();
  const CMatrix h = g.cast<Complex>() + kI * symplectic_form(gamma.modes()).cast<Complex>();
  PhysicalityResult out;
  out.margin = min_eigenvalue(h);
  out.physical = out.margin >= -kPsdTol;
  if (min_eigenvalue(g) > 0.0) {
    out.symplectic_gap = symplectic_eigenvalues(gamma).back() - 1.0;
  }
  return out;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma) {
  const Matrix& g = gamma.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues()(0) <= 1e-12 * scale) {
    throw DegenerateInputError("symplectic eigenvalues need a positive-definite covariance");
  }
  const int n = gamma.modes();
  if (n == 1) return {std::sqrt(g.determinant())};

  const Matrix root = sqrt_psd(g);
  const CMatrix h = kI * (root * symplectic_form(n) * root).cast<Complex>();
  const Vector ev = hermitian_eigenvalues(h);
  // Spectrum is {+-nu_k}; the upper half, read from the top, is descending.
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) nu[k] = ev(2 * n - 1 - k);
  return nu;
}

CovarianceMatrix squeezed_thermal_cov(const SqueezedThermalParams& p) {
  if (!(p.nu >= 1.0)) throw InvalidInputError("squeezed thermal state needs nu >= 1");
  if (!(p.r >= 0.0)) throw InvalidInputError("squeezed thermal state needs r >= 0");
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = p.nu * std::exp(2.0 * p.r);
  m(1, 1) = p.nu * std::exp(-2.0 * p.r);
  return CovarianceMatrix(m);
}

SqueezedThermalParams one_mode_williamson(const CovarianceMatrix& gamma) {
  if (gamma.modes() != 1) throw InvalidInputError("one_mode_williamson needs a one-mode covariance");
  const Matrix& g = gamma.matrix();
  const double det = g.determinant();
  if (!(det > 0.0) || g(0, 0) <= 0.0) {
    throw DegenerateInputError("one_mode_williamson needs a positive-definite covariance");
  }
  const double nu = std::sqrt(det);
  const double ch = std::max(1.0, g.trace() / (2.0 * nu));
  return {nu, 0.5 * std::acosh(ch)};
}

double one_mode_fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  if (a.modes() != 1 || b.modes() != 1) throw InvalidInputError("one_mode_fidelity needs one mode");
  const double delta = (a.matrix() + b.matrix()).determinant();
  const double lam = std::max(0.0, (a.matrix().determinant() - 1.0)) *
                     std::max(0.0, (b.matrix().determinant() - 1.0));
  const double denom = std::sqrt(delta + lam) - std::sqrt(lam);
  return std::clamp(2.0 / denom, 0.0, 1.0);
}

double multimode_fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  if (a.modes() != b.modes()) throw InvalidInputError("fidelity: mode counts differ");
  const int dim = 2 * a.modes();
  const Matrix omega = symplectic_form(a.modes());
  const Matrix v1 = 0.5 * a.matrix();
  const Matrix v2 = 0.5 * b.matrix();
  const Matrix sum = v1 + v2;
  const Matrix v_aux =
      omega.transpose() * sum.inverse() * (0.25 * omega + v2 * omega * v1);

  // sqrt(1 + (V_aux omega)^{-2} / 4), evaluated in complex arithmetic since
  // the argument is similar to a real diagonal but not symmetric.
  const CMatrix aw = (v_aux * omega).cast<Complex>();
  const CMatrix aw_inv = aw.inverse();
  const CMatrix inner = CMatrix::Identity(dim, dim) + 0.25 * aw_inv * aw_inv;
  const CMatrix root = inner.sqrt();
  const CMatrix f_tot =
      2.0 * (root + CMatrix::Identity(dim, dim)) * v_aux.cast<Complex>();
  const double det_tot = f_tot.determinant().real();
  const double det_sum = sum.determinant();
  // Squared fidelity = (det_tot / det_sum)^{1/2}.
  return std::clamp(std::sqrt(std::max(0.0, det_tot) / det_sum), 0.0, 1.0);
}

FidelityValue gaussian_fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  if (a.modes() != b.modes()) throw InvalidInputError("fidelity: mode counts differ");
  require_physical(a, "gaussian_fidelity");
  require_physical(b, "gaussian_fidelity");
  const double f = a.modes() == 1 ? one_mode_fidelity(a, b) : multimode_fidelity(a, b);
  return {f, bures_angle(f)};
}

double bures_angle(double f) {
  if (!(f >= -1e-12 && f <= 1.0 + 1e-12)) {
    throw InvalidInputError("fidelity outside [0, 1]: " + std::to_string(f));
  }
  return std::acos(std::sqrt(std::clamp(f, 0.0, 1.0)));
}

}  // namespace cprepair
