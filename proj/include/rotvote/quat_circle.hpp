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

// Quaternion circles.
//
// Every rotation taking unit a to unit b lies on one great circle of S^3,
//
//   q(alpha) = b1 cos(alpha / 2) + b2 sin(alpha / 2),
//
// where b1 is the minimal geodesic rotation from a to b and b2 composes a
// quarter of a further turn about b. The orthogonal complement {c3, c4} of
// span{b1, b2} turns the constraint R a = b into two homogeneous linear
// equations c3^T q = 0 and c4^T q = 0.

#pragma once

#include <cstddef>
#include <variant>

#include <Eigen/Core>

#include "rotvote/geometry.hpp"

namespace rotvote {

struct QuaternionCircle {
  Vec4 b1;  // circle span
  Vec4 b2;
  Vec4 c3;  // complement span
  Vec4 c4;
  std::size_t source_index = 0;
};

/// Rotation about a x b by the angle between a and b. When a ~ -b
/// (|a x b| < 1e-9 and a.b < 0) the axis is normalize(a x e_k) where e_k is
/// the standard basis vector with the smallest |a_k| (lowest k on ties).
UnitQuaternion MinimalGeodesicRotation(const Vec3& a, const Vec3& b);

struct CircleBasis {
  Vec4 b1;
  Vec4 b2;
};
CircleBasis ComputeCircleBasis(const Vec3& a, const Vec3& b);

struct ComplementBasis {
  Vec4 c3;
  Vec4 c4;
};

/// Orthonormal basis of the -1 eigenspace of the constraint matrix, built
/// from the four closed-form rows
///
///   r0 = [0, (a - b)^T],  [r1; r2; r3] = [-(a - b) | [a + b]_x].
///
/// The largest-norm row is taken first; the second is the row whose
/// component orthogonal to the first is largest. Both are then
/// Gram-Schmidt orthonormalized.
ComplementBasis ComputeComplementBasis(const Vec3& a, const Vec3& b);

QuaternionCircle MakeCircle(const Vec3& a, const Vec3& b,
                            std::size_t source_index = 0);

/// M with q^T M q = b^T R(q) a. Eigenvalues {1, 1, -1, -1}; the +1
/// eigenspace is the circle span.
Mat4 BuildConstraintMatrix(const Vec3& a, const Vec3& b);

UnitQuaternion CirclePoint(const QuaternionCircle& circle, double alpha);

/// sqrt((c3.q)^2 + (c4.q)^2): sine of the angle between q and the circle
/// plane. Zero on the circle, one in the complement, even in q.
double CircleResidual(const QuaternionCircle& circle, const Vec4& q);
inline double CircleResidual(const QuaternionCircle& circle,
                             const UnitQuaternion& q) {
  return CircleResidual(circle, q.coeffs());
}

/// Rows of [b - a | [a + b]_x]. Each row annihilates the quaternion of any
/// rotation taking a to b.
Eigen::Matrix<double, 3, 4> CayleyRows(const Vec3& a, const Vec3& b);

namespace two_view {

struct Compatible {
  UnitQuaternion rotation;  // hemisphere-canonical
  double gap;               // sigma4 / sigma1
};
struct Incompatible {
  double gap;  // sigma4 / sigma1
};
struct Underdetermined {};

}  // namespace two_view

using TwoViewOutcome = std::variant<two_view::Compatible,
                                    two_view::Incompatible,
                                    two_view::Underdetermined>;

inline constexpr double kDefaultNullTolerance = 1e-7;

/// Minimal solver for two constraints. Stacks both complement pairs into a
/// 4x4 matrix; a one-dimensional null space means the circles meet at +-q,
/// a two-dimensional one means they coincide, and full rank means no
/// rotation satisfies both.
TwoViewOutcome TwoViewSolve(const Correspondence& first,
                            const Correspondence& second,
                            double null_tolerance = kDefaultNullTolerance);

}  // namespace rotvote
