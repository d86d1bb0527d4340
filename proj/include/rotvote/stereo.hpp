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

// Stereographic projection of the canonical quaternion hemisphere (q3 <= 0)
// from the north pole [0, 0, 0, 1] onto the closed unit ball of R^3:
//
//   P(q)  = [q0, q1, q2] / (1 - q3)
//   P'(p) = [2 p, p.p - 1] / (1 + p.p)
//
// The south pole maps to the origin and the equator q3 = 0 to the unit
// sphere. Great circles map to circles or straight lines.

#pragma once

#include <array>
#include <variant>

#include "rotvote/geometry.hpp"
#include "rotvote/quat_circle.hpp"

namespace rotvote {

using BallPoint = Vec3;

/// Throws kContract at the north pole (q3 > 1 - 1e-12), which canonical
/// quaternions never reach.
BallPoint Project(const UnitQuaternion& q);
UnitQuaternion Unproject(const BallPoint& p);

struct SphereSurface {
  Vec3 center;
  double radius;
};
struct PlaneSurface {
  Vec3 normal;  // unit; the plane passes through the origin
};
using Surface = std::variant<SphereSurface, PlaneSurface>;

/// Image of a quaternion circle: the intersection of the two surfaces that
/// its complement rows c3 and c4 project to.
struct ProjectedCurve {
  std::array<Surface, 2> surfaces;
  bool IsLine() const;
};

inline constexpr double kDefaultPlaneTolerance = 1e-9;

/// Per complement vector c: a sphere centered at -[c0, c1, c2] / c3 with
/// radius 1 / |c3|, or the plane through the origin with normal
/// [c0, c1, c2] when |c3| <= plane_tolerance.
ProjectedCurve ClassifyCurve(const QuaternionCircle& circle,
                             double plane_tolerance = kDefaultPlaneTolerance);

/// Signed residual of p against one surface: |p - center| - radius for a
/// sphere, normal.p for a plane.
double SurfaceResidual(const Surface& surface, const BallPoint& p);

}  // namespace rotvote
