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

#include "cprepair/oracle/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cprepair/errors.hpp"
#include "cprepair/fisher_geometry.hpp"

namespace cprepair::oracle {

namespace {

constexpr int kMaxCutoff = 1024;

Eigen::MatrixXd real_annihilation(int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// State on `cutoff` levels without the deficit check.
FockState build_state(const SqueezedThermalParams& p, int cutoff) {
  if (cutoff < 8) throw InvalidInputError("Fock cutoff must be at least 8");
  if (!(p.nu >= 1.0) || !(p.r >= 0.0)) throw InvalidInputError("need nu >= 1 and r >= 0");
  const int dim = cutoff + kCutoffPadding;
  const double lambda = lambda_ratio(p.nu);
  Eigen::VectorXd pk(dim);
  double weight = 1.0 - lambda;
  for (int k = 0; k < dim; ++k) {
    pk(k) = weight;
    weight *= lambda;
  }
  Eigen::MatrixXd rho = pk.asDiagonal();
  if (p.r > 0.0) {
    const Eigen::MatrixXd a = real_annihilation(dim);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd generator = 0.5 * p.r * (a2.transpose() - a2);
    const Eigen::MatrixXd u = generator.exp();
    rho = u * rho * u.transpose();
  }
  FockState out;
  out.cutoff = cutoff;
  const Eigen::MatrixXd kept = rho.topLeftCorner(cutoff, cutoff);
  out.rho = (0.5 * (kept + kept.transpose())).cast<Complex>();
  out.truncation_deficit = std::max(0.0, 1.0 - kept.trace());
  return out;
}

void require_deficit(const FockState& s, double max_deficit) {
  if (s.truncation_deficit > max_deficit) {
    throw TruncationError("Fock truncation deficit " + std::to_string(s.truncation_deficit) +
                              " exceeds " + std::to_string(max_deficit),
                          std::min(kMaxCutoff, 2 * s.cutoff));
  }
}

// 1 / (p_j f(p_i / p_j)) for the two Petz functions used here.
double petz_weight(double pi, double pj, MonotoneMetric kind) {
  if (kind == MonotoneMetric::bures) return 0.5 / (pi + pj);  // (1/4) * 2/(pi + pj)
  // Inverse logarithmic mean: ln(pi/pj) / (pi - pj).
  const double x = std::log(pi / pj);
  const double ratio = std::abs(x) < 1e-8 ? 1.0 + 0.5 * x : std::expm1(x) / x;
  return 1.0 / (pj * ratio);
}

}  // namespace

FockState fock_gaussian_state(const SqueezedThermalParams& p, int cutoff, double max_deficit) {
  FockState s = build_state(p, cutoff);
  if (s.truncation_deficit > max_deficit) {
    throw TruncationError("Fock truncation deficit " + std::to_string(s.truncation_deficit) +
                              " exceeds " + std::to_string(max_deficit) + "; try cutoff " +
                              std::to_string(suggest_cutoff(p, max_deficit)),
                          suggest_cutoff(p, max_deficit));
  }
  return s;
}

int suggest_cutoff(const SqueezedThermalParams& p, double max_deficit) {
  for (int cutoff = 16; cutoff <= kMaxCutoff; cutoff *= 2) {
    if (build_state(p, cutoff).truncation_deficit <= max_deficit) return cutoff;
  }
  return kMaxCutoff;
}

CMatrix annihilation(int dim) { return real_annihilation(dim).cast<Complex>(); }

CMatrix quadrature_q(int dim) {
  const CMatrix a = annihilation(dim);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

CMatrix quadrature_p(int dim) {
  const CMatrix a = annihilation(dim);
  return (a - a.adjoint()) / (kI * std::sqrt(2.0));
}

Matrix fock_covariance(const FockState& s) {
  // Products formed two levels above the cutoff so the last retained row of
  // Q^2, P^2 and QP is exact.
  const int big = s.cutoff + 2;
  const CMatrix q = quadrature_q(big);
  const CMatrix p = quadrature_p(big);
  const int c = s.cutoff;
  const CMatrix qq = (q * q).topLeftCorner(c, c);
  const CMatrix pp = (p * p).topLeftCorner(c, c);
  const CMatrix qp = (q * p + p * q).topLeftCorner(c, c);
  Matrix g(2, 2);
  g(0, 0) = 2.0 * (s.rho * qq).trace().real();
  g(1, 1) = 2.0 * (s.rho * pp).trace().real();
  g(0, 1) = g(1, 0) = (s.rho * qp).trace().real();
  return g;
}

double fock_fidelity(const FockState& a, const FockState& b, double max_deficit) {
  if (a.cutoff != b.cutoff) throw InvalidInputError("fock_fidelity: cutoffs differ");
  require_deficit(a, max_deficit);
  require_deficit(b, max_deficit);
  Eigen::SelfAdjointEigenSolver<CMatrix> ea(a.rho);
  const Vector roots = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_a = ea.eigenvectors() * roots.cast<Complex>().asDiagonal() *
                         ea.eigenvectors().adjoint();
  const CMatrix inner = sqrt_a * b.rho * sqrt_a;
  Eigen::SelfAdjointEigenSolver<CMatrix> ei(0.5 * (inner + inner.adjoint()),
                                            Eigen::EigenvaluesOnly);
  const double root_fidelity = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_fidelity * root_fidelity;
}

CMatrix displacement_tangent(const FockState& s, Quadrature direction) {
  if (direction == Quadrature::q) {
    const CMatrix p = quadrature_p(s.cutoff);
    return -kI * (p * s.rho - s.rho * p);
  }
  const CMatrix q = quadrature_q(s.cutoff);
  return kI * (q * s.rho - s.rho * q);
}

double fock_monotone_metric(const FockState& s, const CMatrix& tangent, MonotoneMetric kind) {
  if (tangent.rows() != s.cutoff || tangent.cols() != s.cutoff) {
    throw InvalidInputError("tangent size does not match the Fock cutoff");
  }
  const double scale = std::max(1.0, tangent.cwiseAbs().maxCoeff());
  if (hermiticity_defect(tangent) > 1e-12 * scale) {
    throw InvalidInputError("tangent is not Hermitian");
  }
  if (std::abs(tangent.trace()) > 1e-10) throw InvalidInputError("tangent is not traceless");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(s.rho);
  const Vector& p = es.eigenvalues();
  const CMatrix x = es.eigenvectors().adjoint() * tangent * es.eigenvectors();
  double g = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 1e-14) continue;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (p(j) <= 1e-14) continue;
      g += std::norm(x(i, j)) * petz_weight(p(i), p(j), kind);
    }
  }
  return g;
}

}  // namespace cprepair::oracle
