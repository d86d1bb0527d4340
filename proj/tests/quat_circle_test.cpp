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
#include <numbers>
#include <variant>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "rotvote/geometry.hpp"
#include "rotvote/quat_circle.hpp"

namespace rotvote {
namespace {

constexpr double kPi = std::numbers::pi;
const double kHalfSqrt2 = std::sqrt(2.0) / 2.0;

double SpanDistance(const Vec4& u, const Vec4& v, const Vec4& w1,
                    const Vec4& w2) {
  Eigen::Matrix<double, 4, 2> w;
  w << w1, w2;
  const Mat4 proj = w * w.transpose();
  return (u - proj * u).norm() + (v - proj * v).norm();
}

TEST(MinimalGeodesic, Examples) {
  const Vec3 ex(1, 0, 0);
  EXPECT_LT((MinimalGeodesicRotation(ex, ex).coeffs() - Vec4(1, 0, 0, 0))
                .norm(),
            1e-15);
  EXPECT_LT((MinimalGeodesicRotation(ex, Vec3(0, 1, 0)).coeffs() -
             Vec4(kHalfSqrt2, 0, 0, kHalfSqrt2))
                .norm(),
            1e-15);
  const UnitQuaternion flip = MinimalGeodesicRotation(ex, -ex);
  EXPECT_NEAR(flip[0], 0.0, 1e-15);
  EXPECT_NEAR(flip[1], 0.0, 1e-15);
  EXPECT_LT((QuatToMatrix(flip) * ex + ex).norm(), 1e-12);
}

TEST(MinimalGeodesic, RotatesAOntoB) {
  CounterRng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = RandomUnitVec3(rng);
    const Vec3 b = RandomUnitVec3(rng);
    EXPECT_LT((QuatToMatrix(MinimalGeodesicRotation(a, b)) * a - b).norm(),
              1e-10);
  }
}

TEST(CircleBasis, Examples) {
  const CircleBasis same = ComputeCircleBasis(Vec3(1, 0, 0), Vec3(1, 0, 0));
  EXPECT_LT((same.b1 - Vec4(1, 0, 0, 0)).norm(), 1e-15);
  EXPECT_LT((same.b2 - Vec4(0, 1, 0, 0)).norm(), 1e-15);
  const CircleBasis quarter =
      ComputeCircleBasis(Vec3(1, 0, 0), Vec3(0, 1, 0));
  EXPECT_LT((quarter.b1 - Vec4(kHalfSqrt2, 0, 0, kHalfSqrt2)).norm(), 1e-15);
  EXPECT_LT((quarter.b2 - Vec4(0, kHalfSqrt2, kHalfSqrt2, 0)).norm(), 1e-15);
}

TEST(ComplementBasis, Examples) {
  const ComplementBasis same =
      ComputeComplementBasis(Vec3(1, 0, 0), Vec3(1, 0, 0));
  EXPECT_LT(SpanDistance(same.c3, same.c4, Vec4(0, 0, 1, 0),
                         Vec4(0, 0, 0, 1)),
            1e-12);
  const ComplementBasis quarter =
      ComputeComplementBasis(Vec3(1, 0, 0), Vec3(0, 1, 0));
  EXPECT_LT(SpanDistance(quarter.c3, quarter.c4,
                         Vec4(0, kHalfSqrt2, -kHalfSqrt2, 0),
                         Vec4(-kHalfSqrt2, 0, 0, kHalfSqrt2)),
            1e-12);
}

TEST(QuaternionCircle, BasisIsOrthonormal) {
  CounterRng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const QuaternionCircle c =
        MakeCircle(RandomUnitVec3(rng), RandomUnitVec3(rng));
    Mat4 basis;
    basis << c.b1, c.b2, c.c3, c.c4;
    EXPECT_LT((basis.transpose() * basis - Mat4::Identity()).norm(), 1e-10);
  }
}

TEST(QuaternionCircle, GeneratingRotationLiesOnCircle) {
  CounterRng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const UnitQuaternion q = RandomRotation(rng);
    const Vec3 x = RandomUnitVec3(rng);
    const Vec3 y = QuatToMatrix(q) * x;
    const QuaternionCircle c = MakeCircle(x, y);
    EXPECT_LT(CircleResidual(c, q), 1e-10);
    EXPECT_LT((CayleyRows(x, y) * q.coeffs()).norm(), 1e-9);
  }
}

TEST(QuaternionCircle, AxisIsOrthogonalToDifference) {
  CounterRng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = RandomUnitVec3(rng);
    const Vec3 b = RandomUnitVec3(rng);
    const QuaternionCircle c = MakeCircle(a, b);
    const UnitQuaternion q = CirclePoint(c, rng.Uniform(-kPi, kPi));
    const Vec3 v = q.vec();
    const double angle = 2.0 * std::atan2(v.norm(), std::abs(q.w()));
    if (angle < 1e-6) continue;
    EXPECT_LT(std::abs(v.normalized().dot(a - b)), 1e-9);
  }
}

TEST(ConstraintMatrix, EigenvaluesAndComplementIdentity) {
  CounterRng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 a = RandomUnitVec3(rng);
    const Vec3 b = RandomUnitVec3(rng);
    const Mat4 m = BuildConstraintMatrix(a, b);
    EXPECT_LT((m - m.transpose()).norm(), 1e-15);
    const ComplementBasis comp = ComputeComplementBasis(a, b);
    const Mat4 id = m + 2.0 * (comp.c3 * comp.c3.transpose() +
                               comp.c4 * comp.c4.transpose());
    EXPECT_LT((id - Mat4::Identity()).norm(), 1e-9);
    if (i % 100 == 0) {
      Eigen::SelfAdjointEigenSolver<Mat4> eig(m);
      EXPECT_LT((eig.eigenvalues() - Vec4(-1, -1, 1, 1)).norm(), 1e-9);
    }
  }
}

TEST(ConstraintMatrix, Examples) {
  const UnitQuaternion q = RandomRotation(7);
  const Vec3 x = RandomUnitVec3(8);
  const Mat4 m = BuildConstraintMatrix(x, QuatToMatrix(q) * x);
  EXPECT_NEAR(q.coeffs().dot(m * q.coeffs()), 1.0, 1e-9);

  const Mat4 same = BuildConstraintMatrix(Vec3(1, 0, 0), Vec3(1, 0, 0));
  EXPECT_LT((same - Vec4(1, 1, -1, -1).asDiagonal().toDenseMatrix()).norm(),
            1e-12);
}

TEST(CirclePoint, Examples) {
  const QuaternionCircle c = MakeCircle(Vec3(1, 0, 0), Vec3(0, 1, 0));
  EXPECT_LT((CirclePoint(c, 0.0).coeffs() - c.b1).norm(), 1e-15);
  EXPECT_LT((CirclePoint(c, kPi).coeffs() - c.b2).norm(), 1e-15);
  EXPECT_LT((QuatToMatrix(CirclePoint(c, kPi / 2)) * Vec3(1, 0, 0) -
             Vec3(0, 1, 0))
                .norm(),
            1e-9);
}

TEST(CirclePoint, EveryPointRotatesAOntoB) {
  CounterRng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = RandomUnitVec3(rng);
    const Vec3 b = RandomUnitVec3(rng);
    const QuaternionCircle c = MakeCircle(a, b);
    const UnitQuaternion q = CirclePoint(c, rng.Uniform(-kPi, kPi));
    EXPECT_LT((QuatToMatrix(q) * a - b).norm(), 1e-9);
    EXPECT_LT(CircleResidual(c, q), 1e-12);
  }
}

TEST(CircleResidual, Examples) {
  const QuaternionCircle c = MakeCircle(RandomUnitVec3(1), RandomUnitVec3(2));
  EXPECT_NEAR(CircleResidual(c, c.c3), 1.0, 1e-12);
  const UnitQuaternion q = RandomRotation(3);
  EXPECT_DOUBLE_EQ(CircleResidual(c, q), CircleResidual(c, -q));
}

TEST(CayleyRows, Examples) {
  const Vec3 a = RandomUnitVec3(4);
  const Eigen::Matrix<double, 3, 4> same = CayleyRows(a, a);
  EXPECT_TRUE(same.col(0).isZero(0.0));
  EXPECT_EQ(Eigen::JacobiSVD<Eigen::MatrixXd>(same).setThreshold(1e-12).rank(),
            2);

  Eigen::Matrix<double, 3, 4> want;
  want << -1, 0, 0, 1,  //
      1, 0, 0, -1,      //
      0, -1, 1, 0;
  EXPECT_LT((CayleyRows(Vec3(1, 0, 0), Vec3(0, 1, 0)) - want).norm(), 1e-15);

  const Eigen::Matrix<double, 3, 4> opposite = CayleyRows(a, -a);
  EXPECT_LE(
      Eigen::JacobiSVD<Eigen::MatrixXd>(opposite).setThreshold(1e-12).rank(),
      2);
}

TEST(TwoViewSolve, CompatiblePairsRecoverRotation) {
  CounterRng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const UnitQuaternion q = RandomRotation(rng);
    const Mat3 r = QuatToMatrix(q);
    const Vec3 x1 = RandomUnitVec3(rng);
    const Vec3 x2 = RandomUnitVec3(rng);
    const TwoViewOutcome out = TwoViewSolve({x1, r * x1}, {x2, r * x2});
    const auto* ok = std::get_if<two_view::Compatible>(&out);
    ASSERT_NE(ok, nullptr);
    EXPECT_LT(RotationErrorDeg(q, ok->rotation), 1e-6);
    EXPECT_LE(ok->rotation[3], 0.0);
  }
}

TEST(TwoViewSolve, IdenticalPairIsUnderdetermined) {
  const Correspondence c{RandomUnitVec3(1), RandomUnitVec3(2)};
  EXPECT_TRUE(
      std::holds_alternative<two_view::Underdetermined>(TwoViewSolve(c, c)));
}

TEST(TwoViewSolve, SharedAxisDifferentAnglesIsIncompatible) {
  const Vec3 axis = RandomUnitVec3(3);
  const Vec3 x1 = RandomUnitVec3(4);
  const Vec3 x2 = RandomUnitVec3(5);
  const Vec3 y1 = AxisAngleMatrix(axis, 20.0 * kDegToRad) * x1;
  const Vec3 y2 = AxisAngleMatrix(axis, 60.0 * kDegToRad) * x2;
  const TwoViewOutcome out = TwoViewSolve({x1, y1}, {x2, y2});
  const auto* bad = std::get_if<two_view::Incompatible>(&out);
  ASSERT_NE(bad, nullptr);
  EXPECT_GT(bad->gap, kDefaultNullTolerance);
}

}  // namespace
}  // namespace rotvote
