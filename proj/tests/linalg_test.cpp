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


#include "cprepair/linalg.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace cprepair {
namespace {

TEST(SymplecticForm, BlockStructure) {
  const Matrix s = symplectic_form(3);
  ASSERT_EQ(s.rows(), 6);
  EXPECT_TRUE((s + s.transpose()).isZero(0.0));
  EXPECT_TRUE((s * s).isApprox(-Matrix::Identity(6, 6)));
  EXPECT_EQ(s(0, 1), 1.0);
  EXPECT_EQ(s(1, 0), -1.0);
  EXPECT_EQ(s(0, 3), 0.0);
}

TEST(HermitianEigen, TwoByTwoClosedFormMatchesEmbedding) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = rng.normal(), d = rng.normal();
    const Complex c(rng.normal(), rng.normal());
    CMatrix h(2, 2);
    h << a, c, std::conj(c), d;
    const Eigen::Vector2d ev = hermitian_eigenvalues_2x2(a, c, d);
    EXPECT_LT(testing::max_abs_diff(ev, testing::embedded_hermitian_eigenvalues(h)), 1e-13);
    EXPECT_LE(ev(0), ev(1));
  }
}

TEST(HermitianEigen, NearlyDegenerateSmallRoot) {
  // Small eigenvalue next to a large one: the determinant route keeps it.
  const double big = 1e8, tiny = 1e-9;
  CMatrix h(2, 2);
  h << big, 0.0, 0.0, tiny;
  const Vector ev = hermitian_eigenvalues(h);
  EXPECT_NEAR(ev(0) / tiny, 1.0, 1e-12);
  EXPECT_NEAR(ev(1) / big, 1.0, 1e-15);
}

TEST(HermitianEigen, GeneralSizesMatchEmbedding) {
  testing::Rng rng(12);
  for (int n : {3, 4, 6}) {
    for (int trial = 0; trial < 50; ++trial) {
      const CMatrix z = rng.gaussian_matrix(n, n) + kI * rng.gaussian_matrix(n, n);
      const CMatrix h = 0.5 * (z + z.adjoint());
      EXPECT_LT(testing::max_abs_diff(hermitian_eigenvalues(h),
                                      testing::embedded_hermitian_eigenvalues(h)),
                1e-12);
    }
  }
}

TEST(HermitianEigen, VectorsDiagonalise) {
  testing::Rng rng(13);
  const CMatrix z = rng.gaussian_matrix(4, 4) + kI * rng.gaussian_matrix(4, 4);
  const CMatrix h = 0.5 * (z + z.adjoint());
  const HermitianEigen e = hermitian_eigen(h);
  const CMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LT((rebuilt - h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SqrtPsd, SquaresBack) {
  testing::Rng rng(14);
  const Matrix s = rng.spd(4, 0.1, 5.0);
  const Matrix r = sqrt_psd(s);
  EXPECT_LT((r * r - s).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(asymmetry(r), 1e-14);
}

TEST(Defects, AsymmetryAndHermiticity) {
  Matrix a(2, 2);
  a << 1, 2, 2.5, 1;
  EXPECT_DOUBLE_EQ(asymmetry(a), 0.5);
  CMatrix h(2, 2);
  h << 1, Complex(0, 1), Complex(0, -1), 2;
  EXPECT_EQ(hermiticity_defect(h), 0.0);
  h(1, 0) = Complex(0, 1);
  EXPECT_DOUBLE_EQ(hermiticity_defect(h), 2.0);
}

TEST(MinEigenvalue, RealAndComplexOverloadsAgree) {
  testing::Rng rng(15);
  const Matrix s = rng.symmetric(4);
  EXPECT_NEAR(min_eigenvalue(s), min_eigenvalue(CMatrix(s.cast<Complex>())), 1e-13);
}

}  // namespace
}  // namespace cprepair
