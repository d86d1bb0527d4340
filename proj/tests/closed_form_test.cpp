// Copyright 2026 The rotvote Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "rotvote/closed_form.hpp"
#include "rotvote/error.hpp"
#include "rotvote/geometry.hpp"
#include "rotvote/jacobi.hpp"
#include "rotvote/quat_circle.hpp"

namespace rotvote {
namespace {

CorrespondenceSet Scene(const Mat3& r, int n, double delta,
                        std::uint64_t seed) {
  CounterRng rng(seed);
  CorrespondenceSet out;
  for (int i = 0; i < n; ++i) {
    const Vec3 x = RandomUnitVec3(rng);
    Vec3 noise(rng.Gaussian(), rng.Gaussian(), rng.Gaussian());
    out.push_back({x, (r * x + delta * noise).normalized()});
  }
  return out;
}

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kIo;
}

TEST(Jacobi, EigenMatchesEigenSolver) {
  CounterRng rng(1);
  for (int i = 0; i < 200; ++i) {
    Mat4 a;
    for (int k = 0; k < 16; ++k) a(k / 4, k % 4) = rng.Gaussian();
    const Mat4 s = a + a.transpose();
    const SymmetricEigen<4> mine = JacobiEigen<4>(s);
    Eigen::SelfAdjointEigenSolver<Mat4> oracle(s);
    EXPECT_LT((mine.values - oracle.eigenvalues()).norm(), 1e-12);
    EXPECT_LT((s * mine.vectors - mine.vectors * mine.values.asDiagonal())
                  .norm(),
              1e-12);
  }
}

TEST(StackSystem, Examples) {
  const Mat3 r = QuatToMatrix(RandomRotation(2));
  const CorrespondenceSet two = Scene(r, 2, 0.0, 3);
  const StackedSystem sys = StackSystem(two);
  ASSERT_EQ(sys.rows.rows(), 4);
  EXPECT_EQ(Eigen::JacobiSVD<Eigen::MatrixXd>(sys.rows)
                .setThreshold(1e-9)
                .rank(),
            3);
  EXPECT_EQ(KindOf([&] { StackSystem(std::span(two).first(1)); }),
            ErrorKind::kDegenerate);

  const CorrespondenceSet hundred = Scene(r, 100, 0.0, 4);
  const StackedSystem big = StackSystem(hundred);
  for (Eigen::Index i = 0; i < big.rows.rows(); ++i) {
    EXPECT_NEAR(big.rows.row(i).norm(), 1.0, 1e-10);
    if (i % 2 == 0) {
      EXPECT_NEAR(big.rows.row(i).dot(big.rows.row(i + 1)), 0.0, 1e-10);
    }
  }
  const Eigen::VectorXd sigma =
      Eigen::JacobiSVD<Eigen::MatrixXd>(big.rows).singularValues();
  EXPECT_LT(sigma[3] * sigma[3], 1e-18);
}

TEST(SolveHomogeneous, NoiseFreeRecoversRotation) {
  const UnitQuaternion q = RandomRotation(5);
  const CorrespondenceSet corrs = Scene(QuatToMatrix(q), 1000, 0.0, 6);
  const HomogeneousSolution s = SolveHomogeneous(StackSystem(corrs));
  EXPECT_LT(RotationErrorDeg(q, s.rotation), 1e-6);
  EXPECT_FALSE(s.degenerate);
  EXPECT_LE(s.rotation[3], 0.0);
}

TEST(SolveHomogeneous, NoisyMatchesSvd) {
  const Mat3 r = QuatToMatrix(RandomRotation(7));
  const CorrespondenceSet corrs = Scene(r, 500, 0.05, 8);
  const HomogeneousSolution s = SolveCircleStack(corrs);
  const Mat3 svd = SvdUmeyama(corrs);
  EXPECT_NEAR(RotationErrorDeg(r, QuatToMatrix(s.rotation)),
              RotationErrorDeg(r, svd), 1e-6);
  EXPECT_LT(RotationErrorDeg(QuatToMatrix(s.rotation), svd), 1e-6);
}

TEST(SolveHomogeneous, IdenticalPairsAreDegenerate) {
  const Correspondence c{RandomUnitVec3(9), RandomUnitVec3(10)};
  const CorrespondenceSet corrs(5, c);
  EXPECT_TRUE(SolveCircleStack(corrs).degenerate);
}

TEST(SolveHomogeneous, PermutationInvariant) {
  const Mat3 r = QuatToMatrix(RandomRotation(11));
  CorrespondenceSet corrs = Scene(r, 200, 0.02, 12);
  const HomogeneousSolution a = SolveCircleStack(corrs);
  CounterRng rng(13);
  std::shuffle(corrs.begin(), corrs.end(), rng);
  const HomogeneousSolution b = SolveCircleStack(corrs);
  EXPECT_LT(RotationErrorDeg(a.rotation, b.rotation), 1e-6);
  EXPECT_LT(std::min((a.rotation.coeffs() - b.rotation.coeffs()).norm(),
                     (a.rotation.coeffs() + b.rotation.coeffs()).norm()),
            1e-9);
}

TEST(SvdUmeyama, Examples) {
  const CorrespondenceSet same = Scene(Mat3::Identity(), 50, 0.0, 14);
  EXPECT_LT((SvdUmeyama(same) - Mat3::Identity()).norm(), 1e-12);

  const Mat3 r = QuatToMatrix(RandomRotation(15));
  EXPECT_LT(RotationErrorDeg(r, SvdUmeyama(Scene(r, 100, 0.0, 16))), 1e-9);

  CorrespondenceSet mirrored = Scene(Mat3::Identity(), 100, 0.0, 17);
  for (Correspondence& c : mirrored) c.y.x() = -c.y.x();
  const Mat3 fixed = SvdUmeyama(mirrored);
  EXPECT_NEAR(fixed.determinant(), 1.0, 1e-10);
  EXPECT_LT((fixed.transpose() * fixed - Mat3::Identity()).norm(), 1e-10);
}

TEST(SvdUmeyama, AgreesWithEigenSvdOracle) {
  const Mat3 r = QuatToMatrix(RandomRotation(18));
  const CorrespondenceSet corrs = Scene(r, 300, 0.1, 19);
  const Mat3 b = AttitudeProfile(corrs);
  Eigen::JacobiSVD<Mat3> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec3 d(1, 1, (svd.matrixU() * svd.matrixV().transpose()).determinant());
  const Mat3 oracle = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
  EXPECT_LT((SvdUmeyama(corrs) - oracle).norm(), 1e-10);
}

TEST(SvdUmeyama, RankOneIsDegenerate) {
  const Vec3 x = RandomUnitVec3(20);
  const CorrespondenceSet corrs(4, Correspondence{x, x});
  EXPECT_EQ(KindOf([&] { SvdUmeyama(corrs); }), ErrorKind::kDegenerate);
}

TEST(HornEigen, Examples) {
  const UnitQuaternion q = RandomRotation(21);
  const CorrespondenceSet corrs = Scene(QuatToMatrix(q), 300, 0.0, 22);
  const HornSolution horn = HornEigen(corrs);
  const HomogeneousSolution stack = SolveCircleStack(corrs);
  EXPECT_LT(std::min((horn.rotation.coeffs() - stack.rotation.coeffs()).norm(),
                     (horn.rotation.coeffs() + stack.rotation.coeffs()).norm()),
            1e-9);

  const CorrespondenceSet same = Scene(Mat3::Identity(), 50, 0.0, 23);
  EXPECT_LT((HornEigen(same).rotation.coeffs() - Vec4(1, 0, 0, 0)).norm(),
            1e-9);

  const Mat3 r = QuatToMatrix(RandomRotation(24));
  const CorrespondenceSet noisy = Scene(r, 500, 0.05, 25);
  EXPECT_NEAR(RotationErrorDeg(r, QuatToMatrix(HornEigen(noisy).rotation)),
              RotationErrorDeg(r, SvdUmeyama(noisy)), 1e-6);
}

TEST(ClosedForm, ConstraintSumIdentity) {
  CounterRng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    CorrespondenceSet corrs;
    for (int i = 0; i < 50; ++i) {
      corrs.push_back({RandomUnitVec3(rng), RandomUnitVec3(rng)});
    }
    Mat4 sum = Mat4::Zero();
    for (const Correspondence& c : corrs) sum += BuildConstraintMatrix(c.x, c.y);
    const StackedSystem sys = StackSystem(corrs);
    const Mat4 lhs = sum + 2.0 * sys.rows.transpose() * sys.rows;
    EXPECT_LT((lhs - 50.0 * Mat4::Identity()).norm(), 1e-9);
  }
}

TEST(GibbsLinear, Examples) {
  const Mat3 r30 = AxisAngleMatrix(RandomUnitVec3(27), 30.0 * kDegToRad);
  EXPECT_LT(RotationErrorDeg(r30, GibbsLinear(Scene(r30, 100, 0.0, 28))),
            1e-9);

  const CorrespondenceSet same = Scene(Mat3::Identity(), 50, 0.0, 29);
  EXPECT_LT((GibbsLinear(same) - Mat3::Identity()).norm(), 1e-12);

  const Mat3 r_near_pi =
      AxisAngleMatrix(RandomUnitVec3(30), 179.9 * kDegToRad);
  const CorrespondenceSet hard = Scene(r_near_pi, 100, 0.0, 31);
  bool singular = false;
  double err = 0.0;
  try {
    err = RotationErrorDeg(r_near_pi, GibbsLinear(hard));
  } catch (const Error& e) {
    singular = e.kind() == ErrorKind::kSingularity;
  }
  const CorrespondenceSet noisy_hard = Scene(r_near_pi, 100, 0.01, 31);
  double noisy_err = 0.0;
  try {
    noisy_err = RotationErrorDeg(r_near_pi, GibbsLinear(noisy_hard));
  } catch (const Error& e) {
    noisy_err = 180.0;
  }
  const double baseline = RotationErrorDeg(r_near_pi, SvdUmeyama(noisy_hard));
  EXPECT_TRUE(singular || err < 1e-3);
  EXPECT_GT(noisy_err, 2.0 * baseline);
}

TEST(ClosedForm, AllSolversRecoverNoiseFreeRotation) {
  CounterRng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const UnitQuaternion q = RandomRotation(rng);
    const Mat3 r = QuatToMatrix(q);
    const CorrespondenceSet corrs = Scene(r, 100, 0.0, rng.NextU64());
    EXPECT_LT(RotationErrorDeg(q, SolveCircleStack(corrs).rotation), 1e-6);
    EXPECT_LT(RotationErrorDeg(q, HornEigen(corrs).rotation), 1e-6);
    EXPECT_LT(RotationErrorDeg(r, SvdUmeyama(corrs)), 1e-6);
    if (RotationErrorDeg(Mat3::Identity(), r) < 170.0) {
      EXPECT_LT(RotationErrorDeg(r, GibbsLinear(corrs)), 1e-6);
    }
  }
}

TEST(ClosedForm, WeightsMatchRepetition) {
  const Mat3 r = QuatToMatrix(RandomRotation(33));
  const CorrespondenceSet corrs = Scene(r, 20, 0.05, 34);
  std::vector<double> weights(corrs.size(), 1.0);
  weights[0] = 3.0;
  CorrespondenceSet repeated = corrs;
  repeated.push_back(corrs[0]);
  repeated.push_back(corrs[0]);
  EXPECT_LT(RotationErrorDeg(SolveCircleStack(corrs, weights).rotation,
                             SolveCircleStack(repeated).rotation),
            1e-9);
  EXPECT_LT(RotationErrorDeg(SvdUmeyama(corrs, weights), SvdUmeyama(repeated)),
            1e-9);
}

TEST(FitRigid, RecoversTransform) {
  const Mat3 r = QuatToMatrix(RandomRotation(35));
  const Vec3 t(0.3, -0.2, 0.5);
  CounterRng rng(36);
  CorrespondenceSet corrs;
  for (int i = 0; i < 10; ++i) {
    const Vec3 x(rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1));
    corrs.push_back({x, r * x + t});
  }
  const RigidTransform fit = FitRigid(corrs);
  EXPECT_LT(RotationErrorDeg(r, fit.rotation), 1e-9);
  EXPECT_LT((fit.translation - t).norm(), 1e-12);
  EXPECT_EQ(KindOf([&] { FitRigid(std::span(corrs).first(2)); }),
            ErrorKind::kDegenerate);
}

}  // namespace
}  // namespace rotvote
