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

#include "cprepair/oracle/brute_force_repair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "cprepair/errors.hpp"

namespace cprepair::oracle {

namespace {

// Feasibility via a dense eigensolver, deliberately not the library's 2x2
// closed form.
bool feasible(const CMatrix& m, double d1, double d2, double d3) {
  Eigen::Matrix2d dd;
  dd << d1, d3, d3, d2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> e_dd(dd, Eigen::EigenvaluesOnly);
  if (e_dd.eigenvalues()(0) < -kPsdTol) return false;
  const Eigen::Matrix2cd sum = m + dd.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> e_sum(sum, Eigen::EigenvaluesOnly);
  return e_sum.eigenvalues()(0) >= -kPsdTol;
}

struct Candidate {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  double cost = std::numeric_limits<double>::infinity();
};

}  // namespace

RepairResult brute_force_repair_oracle(const RepairProblem& p, double grid_resolution) {
  if (p.M.rows() != 2 || p.M.cols() != 2 || p.W.rows() != 2 || p.W.cols() != 2) {
    throw InvalidInputError("brute-force oracle is one-mode only");
  }
  if (!(grid_resolution > 0.0)) throw InvalidInputError("grid resolution must be positive");
  validate_weight(p.W);
  const CMatrix m = 0.5 * (p.M + p.M.adjoint());
  const Matrix& w = p.W;
  auto cost_of = [&](double d1, double d2, double d3) {
    return w(0, 0) * d1 + w(1, 1) * d2 + (w(0, 1) + w(1, 0)) * d3;
  };
  auto result = [&](const Candidate& c, double gap) {
    RepairResult out;
    out.delta_d = Matrix(2, 2);
    out.delta_d << c.d1, c.d3, c.d3, c.d2;
    out.cost = cost_of(c.d1, c.d2, c.d3);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(
        Eigen::Matrix2cd(m + out.delta_d.cast<Complex>()), Eigen::EigenvaluesOnly);
    out.feasibility_margin = es.eigenvalues()(0);
    out.optimality_gap = gap;
    return out;
  };

  if (feasible(m, 0.0, 0.0, 0.0)) return result({0.0, 0.0, 0.0, 0.0}, 0.0);

  // dD = shift * 1 is feasible; any better dD has Tr(dD) <= its cost / w_min.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> em(Eigen::Matrix2cd(m), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> ew(w, Eigen::EigenvaluesOnly);
  const double shift = -em.eigenvalues()(0);
  const double radius = shift * w.trace() / ew.eigenvalues()(0) * (1.0 + 1e-9);

  // Smallest feasible d2 for fixed (d1, d3). For d1 above both 0 and -M_11
  // it is finite, growing the bracket as needed.
  auto min_d2 = [&](double d1, double d3) {
    double hi = radius;
    while (!feasible(m, d1, hi, d3)) {
      hi *= 2.0;
      if (hi > 1e12 * (1.0 + radius)) return std::numeric_limits<double>::infinity();
    }
    double lo = (d1 > 0.0) ? d3 * d3 / d1 : 0.0;
    lo = std::max(0.0, lo * (1.0 - 1e-12));
    if (lo >= hi || feasible(m, d1, lo, d3)) return std::min(lo, hi);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(m, d1, mid, d3) ? hi : lo) = mid;
    }
    return hi;
  };

  // Eliminating d2 leaves a convex function of (d1, d3), because the
  // feasible set is convex and the cost is linear. Nested golden-section
  // searches therefore find the global minimum; endpoints are never sampled.
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  auto minimize = [&](double lo, double hi, auto&& f) {
    double a = hi - golden * (hi - lo), b = lo + golden * (hi - lo);
    double fa = f(a), fb = f(b);
    while (hi - lo > grid_resolution) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - golden * (hi - lo);
        fa = f(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + golden * (hi - lo);
        fb = f(b);
      }
    }
    return fa <= fb ? a : b;
  };

  Candidate best;
  auto inner = [&](double d1) {
    const double d3 = minimize(-radius, radius, [&](double x) {
      return cost_of(d1, min_d2(d1, x), x);
    });
    const Candidate c{d1, min_d2(d1, d3), d3, cost_of(d1, min_d2(d1, d3), d3)};
    if (c.cost < best.cost) best = c;
    return c.cost;
  };
  const double d1_lo = std::max(0.0, -m(0, 0).real());
  minimize(d1_lo, std::max(d1_lo, 0.0) + 2.0 * radius, inner);
  return result(best, grid_resolution);
}

}  // namespace cprepair::oracle
