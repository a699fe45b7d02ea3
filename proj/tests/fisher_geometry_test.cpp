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

#include <gtest/gtest.h>

#include <cmath>

#include "cprepair/errors.hpp"
#include "test_util.hpp"

namespace cprepair {
namespace {

TEST(MetricRatio, FrozenValueAndLimit) {
  EXPECT_NEAR(metric_ratio(0.5), 0.2404491734814939012266, 1e-15);
  EXPECT_EQ(metric_ratio(1.0), 0.25);
  EXPECT_THROW(metric_ratio(0.0), InvalidInputError);
  EXPECT_THROW(metric_ratio(-1.0), InvalidInputError);
}

TEST(MetricRatio, SymmetricUnderInversion) {
  for (double t : {1e-6, 0.01, 0.3, 0.9, 0.9999}) {
    EXPECT_NEAR(metric_ratio(t), metric_ratio(1.0 / t), 1e-15);
  }
}

TEST(MetricRatio, SmoothAcrossSeriesSwitch) {
  // Direct formula and series agree on both sides of the switch point.
  for (double x : {-2e-4, -1.01e-4, -0.99e-4, 0.99e-4, 1.01e-4, 2e-4}) {
    const double t = std::exp(x);
    const double direct = 0.5 * (t - 1.0) / ((t + 1.0) * x);
    EXPECT_NEAR(metric_ratio(t), direct, 1e-12);
  }
}

TEST(CGeom, ChainAndRange) {
  EXPECT_NEAR(c_geom(3.0), 0.2404491734814939012266, 1e-15);
  double prev = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double nu = 1.0 + std::pow(10.0, -6.0 + 0.15 * k);
    const double c = c_geom(nu);
    EXPECT_NEAR(c, metric_ratio(lambda_ratio(nu)), 1e-12);
    EXPECT_GT(c, 0.0);
    EXPECT_LE(c, 0.25);
    EXPECT_GT(c, prev);  // increasing in nu
    prev = c;
  }
  EXPECT_NEAR(c_geom(1e3), 0.25, 1e-6);
  EXPECT_THROW(c_geom(1.0), NearPurityError);
}

TEST(BkmMetric, ThermalClosedForm) {
  for (double nu : {1.5, 2.0, 3.0, 4.0}) {
    const Matrix j = bkm_displacement_metric(squeezed_thermal_cov({nu, 0.0}));
    EXPECT_LT((j - std::log((nu + 1) / (nu - 1)) * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_NEAR(bkm_displacement_metric(squeezed_thermal_cov({3.0, 0.0}))(0, 0), std::log(2.0), 1e-14);
}

TEST(BkmMetric, OneModeIsScaledInverse) {
  // One mode: J = nu ln((nu+1)/(nu-1)) Gamma^{-1} for any covariance.
  testing::Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix g = rng.physical_covariance(1, 1.05, 4.0);
    const double nu = std::sqrt(g.determinant());
    const Matrix expected = nu * std::log((nu + 1) / (nu - 1)) * g.inverse();
    EXPECT_LT((bkm_displacement_metric(CovarianceMatrix(g)) - expected).cwiseAbs().maxCoeff(),
              1e-9 * expected.cwiseAbs().maxCoeff());
  }
}

TEST(BkmMetric, SymplecticCovariance) {
  testing::Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix g = rng.physical_covariance(2, 1.1, 3.0);
    const Matrix s = rng.random_symplectic(2);
    const Matrix s_inv = s.inverse();
    const Matrix moved = bkm_displacement_metric(CovarianceMatrix(Matrix(s * g * s.transpose())));
    const Matrix expected = s_inv.transpose() * bkm_displacement_metric(CovarianceMatrix(g)) * s_inv;
    EXPECT_LT((moved - expected).cwiseAbs().maxCoeff(), 1e-8 * (1 + expected.cwiseAbs().maxCoeff()));
  }
}

TEST(BkmMetric, DominatesBuresByCGeom) {
  // Bures <= BKM / 4 always; on one mode the ratio is exactly c_geom(nu).
  testing::Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix g = rng.physical_covariance(1, 1.05, 4.0);
    const double nu = std::sqrt(g.determinant());
    const Matrix bures = bures_displacement_metric(CovarianceMatrix(g));
    const Matrix bkm = bkm_displacement_metric(CovarianceMatrix(g));
    EXPECT_LT((bures - c_geom(nu) * bkm).cwiseAbs().maxCoeff(), 1e-9 * bkm.cwiseAbs().maxCoeff());
  }
}

TEST(BkmMetric, RejectsPureStates) {
  EXPECT_THROW(bkm_displacement_metric(CovarianceMatrix::vacuum(1)), NearPurityError);
  EXPECT_THROW(bkm_displacement_metric(squeezed_thermal_cov({1.0, 0.7})), NearPurityError);
}

TEST(BuresMetric, HalfInverse) {
  testing::Rng rng(54);
  const Matrix g = rng.physical_covariance(2);
  EXPECT_LT((bures_displacement_metric(CovarianceMatrix(g)) - 0.5 * g.inverse()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(bures_displacement_metric(squeezed_thermal_cov({3.0, 0.0}))(0, 0), 1.0 / 6.0, 1e-15);
}

TEST(EndpointBound, FrozenValuesAndOrdering) {
  const EndpointBound b = endpoint_bound(0.9);
  EXPECT_NEAR(b.neg2_log_f, 0.210721031315652553, 1e-15);
  EXPECT_NEAR(b.two_angle_sq, 0.207046838509093167, 1e-15);
  for (double f = 0.01; f <= 1.0; f += 0.01) {
    const EndpointBound e = endpoint_bound(f);
    EXPECT_GE(e.neg2_log_f, e.two_angle_sq - 1e-15);
  }
  EXPECT_TRUE(endpoint_bound(0.0).infinite);
  EXPECT_EQ(endpoint_bound(1.0).neg2_log_f, 0.0);
}

}  // namespace
}  // namespace cprepair
