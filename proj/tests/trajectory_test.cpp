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

#include <gtest/gtest.h>

#include <cmath>

#include "cprepair/errors.hpp"
#include "cprepair/fisher_geometry.hpp"
#include "cprepair/generator_cp.hpp"
#include "test_util.hpp"

namespace cprepair {
namespace {

TEST(ForwardEvolve, MatchesRungeKutta) {
  const GaussianGenerator g = attenuator_generator(0.8);
  const CovarianceMatrix g0 = squeezed_thermal_cov({1.7, 0.9});
  for (double s : {0.1, 0.5, 2.0}) {
    const Matrix rk = integrate_constant_generator(g.K, g.D, g0.matrix(), s, 2000);
    EXPECT_LT((forward_evolve(g0, 0.8, s).matrix() - rk).cwiseAbs().maxCoeff(), 1e-11);
  }
  EXPECT_EQ(forward_evolve(g0, 0.8, 0.0).matrix(), g0.matrix());
  EXPECT_THROW(forward_evolve(g0, 0.8, -1.0), InvalidInputError);
}

TEST(ForwardEvolve, RelaxesToVacuum) {
  const CovarianceMatrix g = forward_evolve(squeezed_thermal_cov({3.0, 1.0}), 1.0, 30.0);
  EXPECT_LT((g.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-20 + 1e-12);
}

TEST(BayesDrift, RetracesTheForwardFlow) {
  // With the score drift the reversed clock reproduces -dtau/ds exactly.
  testing::Rng rng(61);
  const GaussianGenerator f = attenuator_generator(1.3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix tau = rng.physical_covariance(1, 1.0, 3.0);
    const GaussianGenerator b = bayes_reverse_generator(f, CovarianceMatrix(tau));
    const Matrix reverse = covariance_rhs(-b.K, b.D, tau);
    EXPECT_LT((reverse + covariance_rhs(f.K, f.D, tau)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DebruijnIncrement, HalfTraceConvention) {
  Matrix dd(2, 2), j(2, 2);
  dd << 2.0, 0.5, 0.5, 1.0;
  j << 3.0, -1.0, -1.0, 2.0;
  EXPECT_DOUBLE_EQ(debruijn_increment(dd, j), 0.5 * (dd * j).trace());
  EXPECT_EQ(debruijn_increment(Matrix::Zero(2, 2), j), 0.0);
  dd(1, 1) = -1.0;
  EXPECT_THROW(debruijn_increment(dd, j), InvalidInputError);
}

TEST(ReverseDecode, DefectFreeStateIsRetracedExactly) {
  TrajectoryConfig cfg;
  cfg.initial = {2.0, 0.0};
  cfg.depth = 1.0;
  const TrajectoryRecord rec = reverse_decode(cfg);
  EXPECT_LE((rec.samples.front().actual - squeezed_thermal_cov(cfg.initial).matrix()).norm(), 1e-8);
  EXPECT_EQ(rec.i_dec, 0.0);
  EXPECT_NEAR(rec.endpoint_fidelity.f, 1.0, 1e-10);
  for (const auto& s : rec.samples) EXPECT_FALSE(s.defect);
}

TEST(ReverseDecode, SamplesAreOrderedAndAnchored) {
  TrajectoryConfig cfg;
  cfg.initial = {1.2, 1.0};
  cfg.depth = 0.7;
  cfg.steps = 64;
  const TrajectoryRecord rec = reverse_decode(cfg);
  ASSERT_GE(rec.samples.size(), 65u);
  EXPECT_EQ(rec.samples.front().s, 0.0);
  EXPECT_EQ(rec.samples.back().s, 0.7);
  for (std::size_t i = 1; i < rec.samples.size(); ++i) EXPECT_GT(rec.samples[i].s, rec.samples[i - 1].s);
  // The decoder starts from the noised reference.
  EXPECT_EQ(rec.samples.back().actual, rec.samples.back().reference);
}

TEST(ReverseDecode, DefectFlagTracksThreshold) {
  for (const SqueezedThermalParams p : {SqueezedThermalParams{1.2, 1.0}, {1.5, 0.8}, {2.0, 0.5}}) {
    TrajectoryConfig cfg;
    cfg.initial = p;
    cfg.depth = 2.0;
    cfg.steps = 128;
    for (const auto& s : reverse_decode(cfg).samples) {
      const SqueezedThermalParams ref = one_mode_williamson(CovarianceMatrix(s.reference));
      const double gap = std::cosh(2 * ref.r) - ref.nu;
      if (std::abs(gap) > 1e-9) {
        EXPECT_EQ(s.defect, gap > 0) << "s = " << s.s;
      }
      EXPECT_EQ(s.defect, !s.delta_d.isZero(0.0));
    }
  }
}

TEST(ReverseDecode, RepairedGeneratorIsCompletelyPositive) {
  TrajectoryConfig cfg;
  cfg.initial = {1.2, 1.0};
  cfg.depth = 0.5;
  cfg.steps = 32;
  const GaussianGenerator f = attenuator_generator(cfg.gamma);
  for (const auto& s : reverse_decode(cfg).samples) {
    const GaussianGenerator b = bayes_reverse_generator(f, CovarianceMatrix(s.reference));
    const GaussianGenerator repaired{b.K, b.D + s.delta_d};
    EXPECT_GE(generator_cp_matrix(repaired).min_eigenvalue(), -1e-9);
    EXPECT_GE(s.increment, 0.0);
  }
}

TEST(ReverseDecode, WeightSourceOnlyChangesTheIncrement) {
  TrajectoryConfig a;
  a.initial = {1.5, 0.8};
  a.depth = 0.5;
  a.steps = 64;
  TrajectoryConfig b = a;
  b.weight_source = WeightSource::reference;
  const TrajectoryRecord ra = reverse_decode(a), rb = reverse_decode(b);
  EXPECT_EQ(ra.endpoint_fidelity.f, rb.endpoint_fidelity.f);
  EXPECT_GT(std::abs(ra.i_dec - rb.i_dec), 0.0);
  for (std::size_t i = 0; i < ra.samples.size(); ++i) {
    const auto& s = rb.samples[i];
    if (!s.defect) continue;
    const double expected = debruijn_increment(s.delta_d, bkm_displacement_metric(CovarianceMatrix(s.reference)));
    EXPECT_NEAR(s.increment, expected, 1e-12 * (1 + expected));
  }
}

TEST(ReverseDecode, StepDoublingConverges) {
  TrajectoryConfig cfg;
  cfg.initial = {1.5, 0.8};
  cfg.depth = 1.0;
  cfg.steps = 128;
  const TrajectoryRecord coarse = reverse_decode(cfg);
  cfg.steps = 256;
  const TrajectoryRecord fine = reverse_decode(cfg);
  EXPECT_NEAR(coarse.i_dec, fine.i_dec, 1e-5 * fine.i_dec);
  EXPECT_NEAR(coarse.neg2_log_f, fine.neg2_log_f, 1e-5 * fine.neg2_log_f);
}

TEST(ReverseDecode, FloorAbortsNearPurity) {
  TrajectoryConfig cfg;
  cfg.initial = {1.2, 1.0};
  cfg.depth = 4.0;
  try {
    reverse_decode(cfg);
    FAIL() << "expected a near-purity abort";
  } catch (const NearPurityError& e) {
    EXPECT_GT(e.depth(), 0.0);
  }
  cfg.nu_min_floor = 1.0 + 1e-6;
  EXPECT_NO_THROW(reverse_decode(cfg));
}

TEST(ReverseDecode, ConfigValidation) {
  TrajectoryConfig cfg;
  cfg.steps = 4;
  EXPECT_THROW(reverse_decode(cfg), InvalidInputError);
  cfg = {};
  cfg.depth = 0.0;
  EXPECT_THROW(reverse_decode(cfg), InvalidInputError);
  cfg = {};
  cfg.nu_min_floor = 1.0;
  EXPECT_THROW(reverse_decode(cfg), InvalidInputError);
}

TEST(WorstCase, TakesMaximaAndGlobalFloor) {
  const std::vector<SqueezedThermalParams> members{{1.5, 0.8}, {2.0, 0.5}, {1.2, 1.0}};
  TrajectoryConfig cfg;
  cfg.depth = 0.5;
  cfg.steps = 64;
  const WorstCase wc = worst_case_irreversibility(members, cfg);
  ASSERT_EQ(wc.members.size(), 3u);
  EXPECT_EQ(wc.argmax_irreversibility, 2u);
  EXPECT_EQ(wc.argmax_infidelity, 2u);
  double nu_min = 1e9;
  for (const auto& m : wc.members) {
    EXPECT_LE(m.i_dec, wc.i_dec_wc);
    EXPECT_LE(m.neg2_log_f, wc.neg2_log_f_wc);
    nu_min = std::min(nu_min, m.nu_min_observed);
  }
  EXPECT_EQ(wc.nu_min, nu_min);
  EXPECT_NEAR(wc.bound, c_geom(nu_min) * wc.i_dec_wc, 1e-15);
  // Each member's own run is unaffected by the others.
  cfg.initial = members[1];
  EXPECT_EQ(reverse_decode(cfg).i_dec, wc.members[1].i_dec);
}

TEST(WorstCase, NamesTheOffendingMember) {
  TrajectoryConfig cfg;
  cfg.depth = 4.0;
  try {
    worst_case_irreversibility({{50.0, 0.0}, {1.2, 1.0}}, cfg);
    FAIL();
  } catch (const NearPurityError& e) {
    EXPECT_NE(std::string(e.what()).find("member 1"), std::string::npos) << e.what();
  }
}

TEST(NoiseFloor, DefectFreeClassHasZeroBound) {
  TrajectoryConfig cfg;
  cfg.steps = 64;
  const auto rows = noise_floor_report({0.0, 0.5, 1.0}, {{2.0, 0.0}, {3.0, 0.2}}, cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.bound, 0.0);
    EXPECT_FALSE(r.defect);
    EXPECT_TRUE(r.satisfied);
  }
  EXPECT_THROW(noise_floor_report({1.0, 0.5}, {{2.0, 0.0}}, cfg), InvalidInputError);
}

}  // namespace
}  // namespace cprepair
