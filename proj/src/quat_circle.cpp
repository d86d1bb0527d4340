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

#include "rotvote/quat_circle.hpp"

#include <array>
#include <cassert>
#include <cmath>

#include "rotvote/error.hpp"
#include "rotvote/jacobi.hpp"

namespace rotvote {

UnitQuaternion MinimalGeodesicRotation(const Vec3& a, const Vec3& b) {
  const Vec3 cross = a.cross(b);
  const double sin_theta = cross.norm();
  const double cos_theta = a.dot(b);
  if (sin_theta < 1e-9) {
    if (cos_theta >= 0.0) return UnitQuaternion::Identity();
    int k = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(a[i]) < std::abs(a[k])) k = i;
    }
    const Vec3 axis = a.cross(Vec3::Unit(k)).normalized();
    return UnitQuaternion(0.0, axis.x(), axis.y(), axis.z());
  }
  const double half = 0.5 * std::atan2(sin_theta, cos_theta);
  const Vec3 axis = cross / sin_theta;
  Vec4 q;
  q << std::cos(half), std::sin(half) * axis;
  return UnitQuaternion(q);
}

CircleBasis ComputeCircleBasis(const Vec3& a, const Vec3& b) {
  const UnitQuaternion q = MinimalGeodesicRotation(a, b);
  const double q0 = q[0];
  const Vec3 v = q.vec();
  CircleBasis basis;
  basis.b1 = q.coeffs();
  basis.b2 << -b.dot(v), q0 * b + b.cross(v);
  return basis;
}

ComplementBasis ComputeComplementBasis(const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  const Vec3 s = a + b;
  std::array<Vec4, 4> rows;
  rows[0] << 0.0, d;
  const Mat3 sx = Skew(s);
  for (int i = 0; i < 3; ++i) rows[i + 1] << -d[i], sx.row(i).transpose();

  int first = 0;
  for (int i = 1; i < 4; ++i) {
    if (rows[i].squaredNorm() > rows[first].squaredNorm()) first = i;
  }
  assert(rows[first].norm() >= 1e-9 && "a - b and a + b cannot both vanish");
  const Vec4 c3 = rows[first].normalized();

  double best = -1.0;
  Vec4 rejected_best = Vec4::Zero();
  for (int i = 0; i < 4; ++i) {
    if (i == first) continue;
    const Vec4 rejected = rows[i] - rows[i].dot(c3) * c3;
    const double n = rejected.squaredNorm();
    if (n > best) {
      best = n;
      rejected_best = rejected;
    }
  }
  // One more projection pass keeps c3.c4 at roundoff level.
  Vec4 c4 = rejected_best - rejected_best.dot(c3) * c3;
  return {c3, c4.normalized()};
}

QuaternionCircle MakeCircle(const Vec3& a, const Vec3& b,
                            std::size_t source_index) {
  const CircleBasis span = ComputeCircleBasis(a, b);
  const ComplementBasis comp = ComputeComplementBasis(a, b);
  return {span.b1, span.b2, comp.c3, comp.c4, source_index};
}

Mat4 BuildConstraintMatrix(const Vec3& a, const Vec3& b) {
  Mat4 left;
  left << 0.0, -a.x(), -a.y(), -a.z(),  //
      a.x(), 0.0, a.z(), -a.y(),        //
      a.y(), -a.z(), 0.0, a.x(),        //
      a.z(), a.y(), -a.x(), 0.0;
  Mat4 right;
  right << 0.0, -b.x(), -b.y(), -b.z(),  //
      b.x(), 0.0, -b.z(), b.y(),         //
      b.y(), b.z(), 0.0, -b.x(),         //
      b.z(), -b.y(), b.x(), 0.0;
  return left.transpose() * right;
}

UnitQuaternion CirclePoint(const QuaternionCircle& circle, double alpha) {
  const double h = 0.5 * alpha;
  return UnitQuaternion(circle.b1 * std::cos(h) + circle.b2 * std::sin(h));
}

double CircleResidual(const QuaternionCircle& circle, const Vec4& q) {
  const double u = circle.c3.dot(q);
  const double v = circle.c4.dot(q);
  return std::sqrt(u * u + v * v);
}

Eigen::Matrix<double, 3, 4> CayleyRows(const Vec3& a, const Vec3& b) {
  Eigen::Matrix<double, 3, 4> rows;
  rows.col(0) = b - a;
  rows.rightCols<3>() = Skew(a + b);
  return rows;
}

TwoViewOutcome TwoViewSolve(const Correspondence& first,
                            const Correspondence& second,
                            double null_tolerance) {
  const ComplementBasis c1 = ComputeComplementBasis(first.x, first.y);
  const ComplementBasis c2 = ComputeComplementBasis(second.x, second.y);
  Mat4 stack;
  stack.row(0) = c1.c3.transpose();
  stack.row(1) = c1.c4.transpose();
  stack.row(2) = c2.c3.transpose();
  stack.row(3) = c2.c4.transpose();

  const SmallSvd<4, 4> svd = JacobiSvd<4, 4>(stack);
  const double s1 = svd.sigma[0];
  const double r3 = svd.sigma[2] / s1;
  const double r4 = svd.sigma[3] / s1;
  if (r3 <= null_tolerance) return two_view::Underdetermined{};
  if (r4 <= null_tolerance) {
    return two_view::Compatible{
        CanonicalizeHemisphere(UnitQuaternion(Vec4(svd.v.col(3)))), r4};
  }
  return two_view::Incompatible{r4};
}

}  // namespace rotvote
