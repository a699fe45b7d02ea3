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

#include "cprepair/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "cprepair/detail/parallel.hpp"
#include "cprepair/errors.hpp"
#include "cprepair/fisher_geometry.hpp"
#include "cprepair/generator_cp.hpp"

namespace cprepair {

namespace {

double one_mode_nu(const Matrix& g) { return std::sqrt(std::max(0.0, g.determinant())); }

void check_floor(double nu, double floor, double s, const char* path) {
  if (!(nu > floor)) {
    std::ostringstream msg;
    msg << "symplectic eigenvalue " << nu << " on the " << path << " path at depth s = " << s
        << " is at or below the floor " << floor;
    throw NearPurityError(msg.str(), s);
  }
}

// Everything the reverse pass needs at one depth.
struct DepthData {
  Matrix reference;
  Matrix k_bayes;
  double lambda_min = 0.0;
  Matrix delta_d;
};

}  // namespace

void TrajectoryConfig::validate() const {
  if (!(gamma > 0.0)) throw InvalidInputError("trajectory: gamma must be positive");
  if (!(depth > 0.0)) throw InvalidInputError("trajectory: depth must be positive");
  if (steps < 16) throw InvalidInputError("trajectory: steps must be at least 16");
  if (!(nu_min_floor > 1.0)) throw InvalidInputError("trajectory: nu_min floor must exceed 1");
  if (!(initial.nu >= 1.0) || !(initial.r >= 0.0)) {
    throw InvalidInputError("trajectory: initial state needs nu >= 1 and r >= 0");
  }
}

CovarianceMatrix forward_evolve(const CovarianceMatrix& gamma0, double gamma, double s) {
  if (!(s >= 0.0)) throw InvalidInputError("forward_evolve: depth must be nonnegative");
  const double decay = std::exp(-2.0 * gamma * s);
  const int dim = static_cast<int>(gamma0.matrix().rows());
  return CovarianceMatrix(decay * gamma0.matrix() - std::expm1(-2.0 * gamma * s) * Matrix::Identity(dim, dim));
}

double debruijn_increment(const Matrix& delta_d, const Matrix& J) {
  if (delta_d.rows() != J.rows() || delta_d.cols() != J.cols()) {
    throw InvalidInputError("debruijn_increment: size mismatch");
  }
  if (min_eigenvalue(Matrix(0.5 * (delta_d + delta_d.transpose()))) < -kPsdTol) {
    throw InvalidInputError("debruijn_increment: added diffusion is not positive semidefinite");
  }
  return 0.5 * (delta_d.array() * J.transpose().array()).sum();
}

Matrix covariance_rhs(const Matrix& K, const Matrix& D, const Matrix& gamma) {
  return K * gamma + gamma * K.transpose() + D;
}

Matrix integrate_constant_generator(const Matrix& K, const Matrix& D, const Matrix& gamma0,
                                    double t, int steps) {
  const double h = t / steps;
  Matrix g = gamma0;
  for (int k = 0; k < steps; ++k) {
    const Matrix k1 = covariance_rhs(K, D, g);
    const Matrix k2 = covariance_rhs(K, D, g + 0.5 * h * k1);
    const Matrix k3 = covariance_rhs(K, D, g + 0.5 * h * k2);
    const Matrix k4 = covariance_rhs(K, D, g + h * k3);
    g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return g;
}

namespace {

// Positive exactly where the reference violates CP: for one mode
// cosh(2r) > nu is Tr(tau)/2 > det(tau).
double band_indicator(const CovarianceMatrix& gamma0, double gamma, double s) {
  const Matrix tau = forward_evolve(gamma0, gamma, s).matrix();
  return 0.5 * tau.trace() - tau.determinant();
}

// Depths in (0, depth) where the reference enters or leaves the defect band.
// The repair has a kink there, so the integration grid must break at them.
std::vector<double> band_edges(const CovarianceMatrix& gamma0, double gamma, double depth) {
  constexpr int kScan = 1024;
  std::vector<double> edges;
  double a = 0.0;
  double fa = band_indicator(gamma0, gamma, a);
  for (int i = 1; i <= kScan; ++i) {
    const double b = depth * i / kScan;
    const double fb = band_indicator(gamma0, gamma, b);
    if ((fa < 0.0) != (fb < 0.0) && fa != 0.0 && fb != 0.0) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = band_indicator(gamma0, gamma, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double edge = 0.5 * (lo + hi);
      if (edge > 1e-12 * depth && edge < depth * (1.0 - 1e-12)) edges.push_back(edge);
    }
    a = b;
    fa = fb;
  }
  return edges;
}

// Integration nodes: each smooth segment between band edges gets an even
// share of `steps`, so composite Simpson applies segment by segment.
struct NodeGrid {
  std::vector<double> s;
  std::vector<int> segment_start;  // node index opening each segment
};

NodeGrid make_grid(const std::vector<double>& edges, double depth, int steps) {
  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), edges.begin(), edges.end());
  cuts.push_back(depth);
  NodeGrid g;
  g.s.push_back(0.0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    int m = static_cast<int>(std::lround(steps * len / depth));
    m = std::max(2, m + (m % 2));
    g.segment_start.push_back(static_cast<int>(g.s.size()) - 1);
    for (int i = 1; i <= m; ++i) {
      g.s.push_back(i == m ? cuts[k + 1] : cuts[k] + len * i / m);
    }
  }
  g.segment_start.push_back(static_cast<int>(g.s.size()) - 1);
  return g;
}

}  // namespace

TrajectoryRecord reverse_decode(const TrajectoryConfig& cfg) {
  cfg.validate();
  const CovarianceMatrix gamma0 = squeezed_thermal_cov(cfg.initial);
  const GaussianGenerator forward = attenuator_generator(cfg.gamma);
  const NodeGrid nodes = make_grid(band_edges(gamma0, cfg.gamma, cfg.depth), cfg.depth, cfg.steps);
  const int n = static_cast<int>(nodes.s.size()) - 1;

  auto depth_data = [&](double s) {
    DepthData d;
    const CovarianceMatrix tau = forward_evolve(gamma0, cfg.gamma, s);
    check_floor(one_mode_nu(tau.matrix()), cfg.nu_min_floor, s, "reference");
    const GaussianGenerator bayes = bayes_reverse_generator(forward, tau);
    const CpMatrix m = generator_cp_matrix(bayes);
    d.reference = tau.matrix();
    d.k_bayes = bayes.K;
    d.lambda_min = m.min_eigenvalue();
    if (m.admissible()) {
      d.delta_d = Matrix::Zero(2, 2);
    } else {
      d.delta_d = minimal_repair({m.M, bkm_displacement_metric(tau)}, cfg.repair).delta_d;
    }
    return d;
  };

  // Reference data at every node and every step midpoint, i.e. every point
  // RK4 evaluates. Entry 2i is node i, entry 2i+1 the midpoint after it.
  std::vector<DepthData> grid(2 * n + 1);
  for (int i = 0; i <= n; ++i) {
    grid[2 * i] = depth_data(nodes.s[i]);
    if (i < n) grid[2 * i + 1] = depth_data(0.5 * (nodes.s[i] + nodes.s[i + 1]));
  }

  // Reverse pass in u = S - s, from node n down to node 0.
  std::vector<Matrix> actual(n + 1);
  actual[n] = grid[2 * n].reference;
  auto rhs = [&](int j, const Matrix& g) {
    return covariance_rhs(-grid[j].k_bayes, forward.D + grid[j].delta_d, g);
  };
  Matrix g = actual[n];
  for (int i = n; i > 0; --i) {
    const double h = nodes.s[i] - nodes.s[i - 1];
    const Matrix k1 = rhs(2 * i, g);
    const Matrix k2 = rhs(2 * i - 1, g + 0.5 * h * k1);
    const Matrix k3 = rhs(2 * i - 1, g + 0.5 * h * k2);
    const Matrix k4 = rhs(2 * i - 2, g + h * k3);
    g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    g = 0.5 * (g + g.transpose());
    actual[i - 1] = g;
  }

  TrajectoryRecord rec;
  rec.samples.reserve(n + 1);
  rec.nu_min_observed = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const DepthData& d = grid[2 * i];
    TrajectorySample smp;
    smp.s = nodes.s[i];
    smp.actual = actual[i];
    smp.reference = d.reference;
    smp.lambda_min = d.lambda_min;
    smp.defect = d.lambda_min < -kPsdTol;
    smp.delta_d = d.delta_d;
    smp.nu_reference = one_mode_nu(d.reference);
    smp.nu_actual = one_mode_nu(smp.actual);
    check_floor(smp.nu_actual, cfg.nu_min_floor, smp.s, "decoded");
    if (!d.delta_d.isZero(0.0)) {
      const Matrix& weight_state =
          cfg.weight_source == WeightSource::actual ? smp.actual : smp.reference;
      smp.increment =
          debruijn_increment(d.delta_d, bkm_displacement_metric(CovarianceMatrix(weight_state)));
    }
    rec.nu_min_observed = std::min(rec.nu_min_observed, smp.nu_actual);
    rec.samples.push_back(std::move(smp));
  }

  // Composite Simpson per segment; segments have an even number of equal
  // steps and a smooth integrand.
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.segment_start.size(); ++k) {
    const int a = nodes.segment_start[k];
    const int b = nodes.segment_start[k + 1];
    const double h = (nodes.s[b] - nodes.s[a]) / (b - a);
    double sum = rec.samples[a].increment + rec.samples[b].increment;
    for (int i = a + 1; i < b; ++i) sum += ((i - a) % 2 ? 4.0 : 2.0) * rec.samples[i].increment;
    total += h / 3.0 * sum;
  }
  rec.i_dec = total;
  rec.endpoint_fidelity = gaussian_fidelity(gamma0, CovarianceMatrix(actual[0]));
  rec.neg2_log_f = endpoint_bound(rec.endpoint_fidelity.f).neg2_log_f;
  rec.c_geom = c_geom(rec.nu_min_observed);
  rec.bound = rec.c_geom * rec.i_dec;
  return rec;
}

WorstCase worst_case_irreversibility(const std::vector<SqueezedThermalParams>& members,
                                     const TrajectoryConfig& base) {
  if (members.empty()) throw InvalidInputError("worst case over an empty class");
  WorstCase wc;
  wc.members = detail::parallel_map(members.size(), [&](std::size_t i) {
    TrajectoryConfig cfg = base;
    cfg.initial = members[i];
    try {
      return reverse_decode(cfg);
    } catch (const NearPurityError& e) {
      std::ostringstream msg;
      msg << "class member " << i << " (nu=" << members[i].nu << ", r=" << members[i].r
          << "): " << e.what();
      throw NearPurityError(msg.str(), e.depth());
    }
  });
  wc.nu_min = std::numeric_limits<double>::infinity();
  wc.i_dec_wc = -1.0;
  wc.neg2_log_f_wc = -1.0;
  for (std::size_t i = 0; i < wc.members.size(); ++i) {
    const TrajectoryRecord& r = wc.members[i];
    if (r.i_dec > wc.i_dec_wc) {
      wc.i_dec_wc = r.i_dec;
      wc.argmax_irreversibility = i;
    }
    if (r.neg2_log_f > wc.neg2_log_f_wc) {
      wc.neg2_log_f_wc = r.neg2_log_f;
      wc.argmax_infidelity = i;
    }
    wc.nu_min = std::min(wc.nu_min, r.nu_min_observed);
  }
  wc.bound = c_geom(wc.nu_min) * wc.i_dec_wc;
  return wc;
}

std::vector<NoiseFloorRow> noise_floor_report(const std::vector<double>& depths,
                                              const std::vector<SqueezedThermalParams>& members,
                                              const TrajectoryConfig& base) {
  if (members.empty()) throw InvalidInputError("noise floor over an empty class");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (!(depths[i] >= 0.0) || (i > 0 && !(depths[i] > depths[i - 1]))) {
      throw InvalidInputError("noise floor depths must be nonnegative and increasing");
    }
  }
  std::vector<NoiseFloorRow> rows;
  rows.reserve(depths.size());
  for (double depth : depths) {
    NoiseFloorRow row;
    row.depth = depth;
    if (depth == 0.0) {
      // Nothing to decode: the output is the input.
      for (const auto& m : members) {
        row.defect = row.defect || nogo_lambda_min(base.gamma, m) < -kPsdTol;
      }
      rows.push_back(std::move(row));
      continue;
    }
    TrajectoryConfig cfg = base;
    cfg.depth = depth;
    row.detail = worst_case_irreversibility(members, cfg);
    row.neg2_log_f_wc = row.detail.neg2_log_f_wc;
    row.bound = row.detail.bound;
    for (const auto& rec : row.detail.members) {
      for (const auto& smp : rec.samples) row.defect = row.defect || smp.defect;
    }
    row.satisfied = row.neg2_log_f_wc >= row.bound - kNoiseFloorTol;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cprepair
