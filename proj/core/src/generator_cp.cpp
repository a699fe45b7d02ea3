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

#include "cprepair/generator_cp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cprepair/errors.hpp"

namespace cprepair {

namespace {

void require_square(const Matrix& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw InvalidInputError(std::string(name) + " must be square of even order");
  }
}

CMatrix complexify(const Matrix& re, const Matrix& im) {
  return re.cast<Complex>() + kI * im.cast<Complex>();
}

}  // namespace

void GaussianChannel::validate() const {
  require_square(X, "channel X");
  require_square(Y, "channel Y");
  if (X.rows() != Y.rows()) throw InvalidInputError("channel X and Y differ in size");
  if (asymmetry(Y) > kSymmetryTol) throw InvalidInputError("channel Y is not symmetric");
}

void GaussianGenerator::validate() const {
  require_square(K, "generator K");
  require_square(D, "generator D");
  if (K.rows() != D.rows()) throw InvalidInputError("generator K and D differ in size");
  if (asymmetry(D) > kSymmetryTol) throw InvalidInputError("generator D is not symmetric");
}

bool GaussianGenerator::classical_diffusion_valid() const {
  return min_eigenvalue(Matrix(0.5 * (D + D.transpose()))) >= -kPsdTol;
}

GaussianGenerator attenuator_generator(double gamma, int modes) {
  const int dim = 2 * modes;
  return {-gamma * Matrix::Identity(dim, dim), 2.0 * gamma * Matrix::Identity(dim, dim)};
}

GaussianChannel attenuator_channel(double gamma_t, int modes) {
  const int dim = 2 * modes;
  return {std::exp(-gamma_t) * Matrix::Identity(dim, dim),
          -std::expm1(-2.0 * gamma_t) * Matrix::Identity(dim, dim)};
}

GaussianChannel infinitesimal_channel(const GaussianGenerator& g, double dt) {
  g.validate();
  const int dim = static_cast<int>(g.K.rows());
  return {Matrix::Identity(dim, dim) + dt * g.K, dt * g.D};
}

CpMatrix generator_cp_matrix(const GaussianGenerator& g) {
  g.validate();
  const Matrix sigma = symplectic_form(g.modes());
  const Matrix drift_part = g.K * sigma + sigma * g.K.transpose();
  CpMatrix out;
  out.M = complexify(0.5 * (g.D + g.D.transpose()), drift_part);
  // K sigma + sigma K^T is antisymmetric for any real K, which is what
  // makes M Hermitian; check it rather than assume it.
  if (hermiticity_defect(out.M) > 1e-12 * std::max(1.0, out.M.cwiseAbs().maxCoeff())) {
    throw InvalidInputError("generator CP matrix is not Hermitian");
  }
  out.eigenvalues = hermitian_eigenvalues(out.M);
  return out;
}

CMatrix hhw_cp_matrix(const GaussianChannel& c) {
  c.validate();
  const Matrix sigma = symplectic_form(c.modes());
  const Matrix transported = sigma - c.X * sigma * c.X.transpose();
  return complexify(0.5 * (c.Y + c.Y.transpose()), -transported);
}

CpCheck hhw_cp_check(const GaussianChannel& c) {
  const double margin = min_eigenvalue(hhw_cp_matrix(c));
  return {margin >= -kPsdTol, margin};
}

GaussianGenerator bayes_reverse_generator(const GaussianGenerator& forward,
                                          const CovarianceMatrix& reference) {
  forward.validate();
  if (forward.K.rows() != reference.matrix().rows()) {
    throw InvalidInputError("reference covariance and generator differ in size");
  }
  Eigen::FullPivLU<Matrix> lu(reference.matrix());
  if (!lu.isInvertible()) throw DegenerateInputError("reference covariance is singular");
  return {forward.K + forward.D * lu.inverse(), forward.D};
}

NogoSpectrum nogo_spectrum(double gamma, const SqueezedThermalParams& p) {
  if (!(gamma > 0.0)) throw InvalidInputError("attenuation rate must be positive");
  if (!(p.nu >= 1.0) || !(p.r >= 0.0)) throw InvalidInputError("need nu >= 1 and r >= 0");
  const double ratio = std::cosh(2.0 * p.r) / p.nu;
  return {4.0 * gamma * (1.0 - ratio), 4.0 * gamma * ratio};
}

double nogo_lambda_min(double gamma, const SqueezedThermalParams& p) {
  return nogo_spectrum(gamma, p).lambda_min();
}

CpMatrix attenuator_bayes_cp_matrix(double gamma, const SqueezedThermalParams& p) {
  return generator_cp_matrix(
      bayes_reverse_generator(attenuator_generator(gamma), squeezed_thermal_cov(p)));
}

CovarianceMatrix tmsv_cov(double mu) {
  if (!(mu > 1.0)) throw InvalidInputError("TMSV parameter must exceed 1");
  const double s = std::sqrt(mu * mu - 1.0);
  Matrix g = Matrix::Zero(4, 4);
  g.topLeftCorner(2, 2) = mu * Matrix::Identity(2, 2);
  g.bottomRightCorner(2, 2) = mu * Matrix::Identity(2, 2);
  const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  g.topRightCorner(2, 2) = s * z;
  g.bottomLeftCorner(2, 2) = s * z;
  return CovarianceMatrix(g);
}

CMatrix tmsv_schur_witness(const GaussianChannel& c, double mu) {
  c.validate();
  if (c.modes() != 1) throw InvalidInputError("TMSV witness is defined for one-mode channels");
  const Matrix g = tmsv_cov(mu).matrix();

  // Act with the channel on subsystem A only.
  Matrix x_ab = Matrix::Identity(4, 4);
  x_ab.topLeftCorner(2, 2) = c.X;
  Matrix y_ab = Matrix::Zero(4, 4);
  y_ab.topLeftCorner(2, 2) = c.Y;
  const Matrix out = x_ab * g * x_ab.transpose() + y_ab;

  const CMatrix h = complexify(out, symplectic_form(2));
  const CMatrix a = h.topLeftCorner(2, 2);
  const CMatrix b = h.bottomRightCorner(2, 2);
  const CMatrix cross = h.topRightCorner(2, 2);
  const CMatrix schur = a - cross * b.inverse() * cross.adjoint();
  return 0.5 * (schur + schur.adjoint());
}

CMatrix tmsv_witness_closed_form(const GaussianChannel& c) {
  c.validate();
  const Matrix sigma = symplectic_form(c.modes());
  return complexify(c.Y, sigma - c.X * sigma * c.X.transpose());
}

InfinitesimalWitness infinitesimal_witness(const GaussianGenerator& g, double dt, double mu) {
  if (!(dt > 0.0)) throw InvalidInputError("witness step must be positive");
  InfinitesimalWitness w;
  w.rate = min_eigenvalue(tmsv_schur_witness(infinitesimal_channel(g, dt), mu)) / dt;
  w.rate_half =
      min_eigenvalue(tmsv_schur_witness(infinitesimal_channel(g, 0.5 * dt), mu)) / (0.5 * dt);
  w.richardson = 2.0 * w.rate_half - w.rate;
  return w;
}

bool sign_flip_spectrum_check(const GaussianGenerator& g, double tol) {
  const Vector plus = generator_cp_matrix(g).eigenvalues;
  const Vector minus = generator_cp_matrix({-g.K, g.D}).eigenvalues;
  return (plus - minus).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace cprepair
