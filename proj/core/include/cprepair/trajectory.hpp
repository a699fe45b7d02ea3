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

// Forward attenuation and CP-repaired reverse decoding of one-mode
// covariances.
//
// Depth s runs forward, 0 -> S, under the attenuator. The decoder runs in the
// reversed clock u = S - s starting from the noised covariance tau_S and
// integrates
//
//   dGamma/du = K_rev Gamma + Gamma K_rev^T + D_rev,
//   K_rev = -(K_fwd + D_fwd tau_s^{-1}),   D_rev = D_fwd + dD*(s),
//
// where tau_s is the forward reference path and dD*(s) is the minimal repair
// of M^Bayes(s) weighted by the BKM metric of tau_s. Without a defect the
// decoder retraces tau exactly.

#include <cstddef>
#include <vector>

#include "cprepair/gaussian_core.hpp"
#include "cprepair/linalg.hpp"
#include "cprepair/repair_sdp.hpp"

namespace cprepair {

/// Which state's BKM metric weights the de Bruijn increment. The repair
/// itself is always weighted by the reference tau_s.
enum class WeightSource { reference, actual };

struct TrajectoryConfig {
  double gamma = 1.0;
  double depth = 1.0;
  /// Approximate total RK4 steps. The grid breaks at the depths where the
  /// reference enters or leaves the defect band, and each piece gets an even
  /// share, so sample spacing is uniform only within a piece.
  int steps = 256;
  SqueezedThermalParams initial{};
  WeightSource weight_source = WeightSource::actual;
  /// Abort if any symplectic eigenvalue on either path drops to this value.
  double nu_min_floor = 1.01;
  RepairOptions repair{};

  void validate() const;
};

struct TrajectorySample {
  double s = 0.0;
  Matrix actual;     // decoded covariance at depth s
  Matrix reference;  // tau_s
  double lambda_min = 0.0;  // min eig M^Bayes(s)
  bool defect = false;      // lambda_min < -kPsdTol
  Matrix delta_d;
  double increment = 0.0;   // (1/2) Tr(delta_d J)
  double nu_actual = 0.0;
  double nu_reference = 0.0;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;  // ascending s, samples[0].s == 0
  double i_dec = 0.0;
  FidelityValue endpoint_fidelity{};
  double neg2_log_f = 0.0;
  double nu_min_observed = 0.0;  // along the decoded path
  double c_geom = 0.0;           // c_geom(nu_min_observed)
  double bound = 0.0;            // c_geom * i_dec
};

/// Closed form of dGamma/ds = -2 gamma Gamma + 2 gamma 1.
CovarianceMatrix forward_evolve(const CovarianceMatrix& gamma0, double gamma, double s);

/// (1/2) Tr(delta_d J). Throws InvalidInputError if delta_d has an eigenvalue
/// below -kPsdTol.
double debruijn_increment(const Matrix& delta_d, const Matrix& J);

/// Right-hand side K Gamma + Gamma K^T + D.
Matrix covariance_rhs(const Matrix& K, const Matrix& D, const Matrix& gamma);

/// Classical RK4 for dGamma/dt = K Gamma + Gamma K^T + D with constant
/// coefficients; used to check forward_evolve.
Matrix integrate_constant_generator(const Matrix& K, const Matrix& D, const Matrix& gamma0,
                                    double t, int steps);

TrajectoryRecord reverse_decode(const TrajectoryConfig& cfg);

struct WorstCase {
  double i_dec_wc = 0.0;
  std::size_t argmax_irreversibility = 0;
  double neg2_log_f_wc = 0.0;
  std::size_t argmax_infidelity = 0;
  double nu_min = 0.0;  // over all members
  double bound = 0.0;   // c_geom(nu_min) * i_dec_wc
  std::vector<TrajectoryRecord> members;
};

/// Runs reverse_decode for every class member at the given depth. A
/// NearPurityError is rethrown with the member index in its message.
WorstCase worst_case_irreversibility(const std::vector<SqueezedThermalParams>& members,
                                     const TrajectoryConfig& base);

struct NoiseFloorRow {
  double depth = 0.0;
  double neg2_log_f_wc = 0.0;
  double bound = 0.0;
  bool defect = false;  // lambda_min(M^Bayes(s)) < 0 for some s <= depth, any member
  bool satisfied = true;
  WorstCase detail{};
};

inline constexpr double kNoiseFloorTol = 1e-9;

/// One row per depth; `satisfied` is neg2_log_f_wc >= bound - kNoiseFloorTol.
std::vector<NoiseFloorRow> noise_floor_report(const std::vector<double>& depths,
                                              const std::vector<SqueezedThermalParams>& members,
                                              const TrajectoryConfig& base);

}  // namespace cprepair
