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

#include "cprepair/fisher_geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "cprepair/errors.hpp"

namespace cprepair {

double metric_ratio(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInputError("metric_ratio needs t > 0");
  // With x = ln t, (t-1)/((t+1) ln t) = tanh(x/2)/x, which is symmetric in
  // x -> -x and has the removable point x = 0.
  const double x = std::log(t);
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 0.5 * (0.5 - x2 / 24.0 + x2 * x2 / 240.0);
  }
  return 0.5 * std::tanh(0.5 * x) / x;
}

double lambda_ratio(double nu) {
  if (!(nu >= 1.0)) throw InvalidInputError("lambda_ratio needs nu >= 1");
  return (nu - 1.0) / (nu + 1.0);
}

double c_geom(double nu) {
  if (!(nu > 1.0)) {
    throw NearPurityError("c_geom needs nu > 1 (got " + std::to_string(nu) + ")");
  }
  if (std::isinf(nu)) return 0.25;
  // ln((nu+1)/(nu-1)) = 2 atanh(1/nu), accurate for large nu as well.
  return 1.0 / (4.0 * nu * std::atanh(1.0 / nu));
}

Matrix bkm_displacement_metric(const CovarianceMatrix& gamma) {
  const int n = gamma.modes();
  for (double nu : symplectic_eigenvalues(gamma)) {
    if (nu <= 1.0 + 1e-9) {
      throw NearPurityError("BKM metric diverges at symplectic eigenvalue " + std::to_string(nu));
    }
  }
  // With Gamma = S N S^T and S symplectic, i Gamma sigma = S (i N sigma) S^{-1},
  // and sigma^T g(N) = i * 2 arccoth(i N sigma) for g(nu) = 2 arccoth(nu).
  // Hence J = 2 i sigma arccoth(i Gamma sigma). The matrix function is taken
  // through the Hermitian H = i Gamma^{1/2} sigma Gamma^{1/2}, which is
  // similar to i Gamma sigma via Gamma^{1/2}.
  const Matrix sigma = symplectic_form(n);
  const Matrix root = sqrt_psd(gamma.matrix());
  const Matrix root_inv = root.inverse();
  const CMatrix h = kI * (root * sigma * root).cast<Complex>();
  const HermitianEigen eig = hermitian_eigen(0.5 * (h + h.adjoint()));
  Vector f(eig.values.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = std::atanh(1.0 / eig.values(k));
  const CMatrix arccoth_h = eig.vectors * f.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  const CMatrix j = 2.0 * kI * sigma.cast<Complex>() * root.cast<Complex>() * arccoth_h *
                    root_inv.cast<Complex>();
  return real_symmetric_part(j);
}

Matrix bures_displacement_metric(const CovarianceMatrix& gamma) {
  Eigen::FullPivLU<Matrix> lu(gamma.matrix());
  if (!lu.isInvertible()) throw DegenerateInputError("Bures metric needs an invertible covariance");
  const Matrix inv = lu.inverse();
  return 0.25 * (inv + inv.transpose());
}

EndpointBound endpoint_bound(double f) {
  const double angle = bures_angle(f);
  EndpointBound out;
  out.two_angle_sq = 2.0 * angle * angle;
  if (f <= 0.0) {
    out.infinite = true;
    out.neg2_log_f = std::numeric_limits<double>::infinity();
    return out;
  }
  out.neg2_log_f = -2.0 * std::log(std::min(f, 1.0));
  return out;
}

}  // namespace cprepair
