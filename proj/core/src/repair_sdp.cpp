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

#include "cprepair/repair_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "cprepair/errors.hpp"

namespace cprepair {

namespace {

// Basis of real symmetric d x d matrices: e_i e_i^T, then e_i e_j^T + e_j e_i^T.
std::vector<Matrix> symmetric_basis(int d) {
  std::vector<Matrix> basis;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

Matrix assemble(const std::vector<Matrix>& basis, const Vector& x) {
  Matrix out = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t k = 0; k < basis.size(); ++k) out += x(static_cast<Eigen::Index>(k)) * basis[k];
  return out;
}

// Inverses of both cone arguments, or nothing if either is not strictly
// positive definite.
struct ConeInverses {
  Matrix a_inv;
  CMatrix b_inv;
};

std::optional<ConeInverses> cone_inverses(const Matrix& delta_d, const CMatrix& m) {
  Eigen::LLT<Matrix> a(delta_d);
  if (a.info() != Eigen::Success) return std::nullopt;
  Eigen::LLT<CMatrix> b(m + delta_d.cast<Complex>());
  if (b.info() != Eigen::Success) return std::nullopt;
  const int d = static_cast<int>(delta_d.rows());
  return ConeInverses{a.solve(Matrix::Identity(d, d)), b.solve(CMatrix::Identity(d, d))};
}

// Lower bound on the optimum from the dual point Z = B^{-1}/t, scaled so that
// Re Z <= W. Weak duality: for any feasible dD,
// Tr(W dD) >= Tr(Re Z dD) = Tr(Z (M + dD)) - Tr(Z M) >= -Re Tr(Z M).
double dual_lower_bound(const CMatrix& z_in, const CMatrix& m, const Matrix& w) {
  CMatrix z = 0.5 * (z_in + z_in.adjoint());
  const Matrix w_inv_root = sqrt_psd(w).inverse();
  const Matrix re_z = real_symmetric_part(z);
  const Matrix scaled = w_inv_root * re_z * w_inv_root;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (scaled + scaled.transpose()),
                                           Eigen::EigenvaluesOnly);
  const double alpha = es.eigenvalues().maxCoeff();
  if (alpha > 1.0) z /= alpha;
  return std::max(0.0, -(z * m).trace().real());
}

double trace_product(const Matrix& a, const Matrix& b) { return (a.array() * b.transpose().array()).sum(); }

RepairResult finish(const CMatrix& m, const Matrix& w, Matrix delta_d, double gap) {
  RepairResult out;
  delta_d = 0.5 * (delta_d + delta_d.transpose());
  out.cost = trace_product(delta_d, w);
  out.feasibility_margin = min_eigenvalue(CMatrix(m + delta_d.cast<Complex>()));
  out.delta_d = std::move(delta_d);
  out.optimality_gap = gap;
  return out;
}

}  // namespace

void validate_weight(const Matrix& w) {
  if (w.rows() != w.cols() || w.rows() == 0) throw InvalidInputError("weight must be square");
  if (!w.allFinite()) throw InvalidInputError("weight has non-finite entries");
  if (asymmetry(w) > kSymmetryTol) throw InvalidInputError("weight is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (w + w.transpose()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (!(lo > kPsdTol)) throw InvalidInputError("weight is not positive definite");
  if (hi / lo > kMaxWeightCondition) {
    throw InvalidInputError("weight condition number " + std::to_string(hi / lo) +
                            " exceeds limit");
  }
}

RepairResult minimal_repair(const RepairProblem& p, const RepairOptions& opts) {
  const int d = static_cast<int>(p.M.rows());
  if (p.M.cols() != d || d == 0) throw InvalidInputError("repair: M must be square");
  if (p.W.rows() != d) throw InvalidInputError("repair: M and W differ in size");
  if (hermiticity_defect(p.M) > 1e-10) throw InvalidInputError("repair: M is not Hermitian");
  validate_weight(p.W);

  const CMatrix m = 0.5 * (p.M + p.M.adjoint());
  const double lambda_min = min_eigenvalue(m);
  if (lambda_min >= -kPsdTol) return finish(m, p.W, Matrix::Zero(d, d), 0.0);

  // Solve with W normalised to unit mean eigenvalue so that scaling W by a
  // constant leaves the iterate sequence, and hence the argmin, unchanged.
  const double w_scale = p.W.trace() / d;
  const Matrix w = (0.5 * (p.W + p.W.transpose())) / w_scale;

  const std::vector<Matrix> basis = symmetric_basis(d);
  const int nvar = static_cast<int>(basis.size());
  Vector tw(nvar);
  for (int k = 0; k < nvar; ++k) tw(k) = trace_product(w, basis[k]);

  // Strictly feasible start: M + dD has min eigenvalue 1.
  const double start = -lambda_min + 1.0;
  Vector x = Vector::Zero(nvar);
  for (int k = 0, i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j, ++k) {
      if (i == j) x(k) = start;
    }
  }
  const double barrier_dim = 2.0 * d;  // d for each cone
  double t = barrier_dim / (start * w.trace());

  // Every dual point gives a valid lower bound and every iterate is feasible,
  // so the cheapest iterate and the largest bound are tracked separately.
  // Near the optimum B is nearly singular and the dual bound degrades before
  // the primal path does; the loop stops once a positive bound stops
  // improving.
  Vector best_x = x;
  double best_cost = std::numeric_limits<double>::infinity();
  double best_lower = 0.0;
  int stalls = 0;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    bool lost = false;
    for (int it = 0; it < opts.max_newton; ++it) {
      const auto inv = cone_inverses(assemble(basis, x), m);
      if (!inv) {
        lost = true;
        break;
      }
      Vector grad(nvar);
      Matrix hess(nvar, nvar);
      std::vector<Matrix> a_e(nvar);
      std::vector<CMatrix> b_e(nvar);
      for (int k = 0; k < nvar; ++k) {
        a_e[k] = inv->a_inv * basis[k];
        b_e[k] = inv->b_inv * basis[k].cast<Complex>();
        grad(k) = t * tw(k) - a_e[k].trace() - b_e[k].trace().real();
      }
      for (int k = 0; k < nvar; ++k) {
        for (int l = k; l < nvar; ++l) {
          const double h = (a_e[k] * a_e[l]).trace() + (b_e[k] * b_e[l]).trace().real();
          hess(k, l) = h;
          hess(l, k) = h;
        }
      }
      const Vector step = -hess.ldlt().solve(grad);
      const double decrement_sq = -grad.dot(step);
      if (!(decrement_sq > 1e-20)) break;
      const double decrement = std::sqrt(decrement_sq);
      // Damped Newton on a self-concordant function: 1/(1 + lambda) stays in
      // the Dikin ellipsoid. Backtracking only guards against roundoff, and an
      // infeasible trial is never accepted.
      double alpha = decrement < 0.25 ? 1.0 : 1.0 / (1.0 + decrement);
      bool moved = false;
      for (; alpha > 1e-12; alpha *= 0.5) {
        const Vector trial = x + alpha * step;
        if (cone_inverses(assemble(basis, trial), m)) {
          x = trial;
          moved = true;
          break;
        }
      }
      if (!moved || decrement_sq < 1e-14) break;
    }
    if (lost) break;

    const Matrix delta_d = assemble(basis, x);
    const auto inv = cone_inverses(delta_d, m);
    if (!inv) break;
    const double cost = trace_product(delta_d, w);
    if (cost < best_cost) {
      best_cost = cost;
      best_x = x;
    }
    const double lower = dual_lower_bound(inv->b_inv / t, m, w);
    if (lower > best_lower) {
      best_lower = lower;
      stalls = 0;
    } else if (best_lower > 0.0 && ++stalls >= 3) {
      break;
    }
    if (best_cost - best_lower <= opts.rel_gap * (1.0 + best_cost)) break;
    t *= opts.barrier_growth;
  }

  const double gap = std::isfinite(best_cost) ? std::max(0.0, best_cost - best_lower)
                                              : std::numeric_limits<double>::infinity();
  return finish(m, p.W, assemble(basis, best_x), gap * w_scale);
}

RepairResult isotropic_repair_closed_form(const CMatrix& M, const Matrix& W) {
  if (M.rows() != 2 || M.cols() != 2) {
    throw WrongFastPathError("isotropic repair needs a one-mode (2x2) CP matrix");
  }
  validate_weight(W);
  // Project onto span{1, i sigma}; i sigma = [[0, i], [-i, 0]].
  const double a = 0.5 * (M(0, 0).real() + M(1, 1).real());
  const double b = 0.5 * (M(0, 1).imag() - M(1, 0).imag());
  CMatrix model(2, 2);
  model << Complex(a, 0.0), Complex(0.0, b), Complex(0.0, -b), Complex(a, 0.0);
  const double residual = (M - model).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    throw WrongFastPathError("CP matrix is not of the form a*1 + b*i*sigma (residual " +
                             std::to_string(residual) + ")");
  }
  const double shift = std::max(0.0, std::abs(b) - a);
  const bool isotropic_weight =
      (W - (W.trace() / 2.0) * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <=
      1e-12 * std::abs(W.trace());
  const double gap = (shift == 0.0 || isotropic_weight) ? 0.0
                                                        : std::numeric_limits<double>::infinity();
  return finish(M, W, shift * Matrix::Identity(2, 2), gap);
}

}  // namespace cprepair
