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

#include "rotvote/stereo.hpp"

#include <cmath>

#include "rotvote/error.hpp"

namespace rotvote {

BallPoint Project(const UnitQuaternion& q) {
  const double denom = 1.0 - q[3];
  if (denom < 1e-12) {
    throw Error(ErrorKind::kContract,
                "cannot project the north pole of the quaternion sphere");
  }
  return BallPoint(q[0], q[1], q[2]) / denom;
}

UnitQuaternion Unproject(const BallPoint& p) {
  const double pp = p.squaredNorm();
  const double inv = 1.0 / (1.0 + pp);
  return UnitQuaternion(2.0 * p.x() * inv, 2.0 * p.y() * inv, 2.0 * p.z() * inv,
                        (pp - 1.0) * inv);
}

bool ProjectedCurve::IsLine() const {
  return std::holds_alternative<PlaneSurface>(surfaces[0]) &&
         std::holds_alternative<PlaneSurface>(surfaces[1]);
}

namespace {

Surface SurfaceOf(const Vec4& c, double plane_tolerance) {
  const Vec3 head = c.head<3>();
  if (std::abs(c[3]) > plane_tolerance) {
    return SphereSurface{-head / c[3], 1.0 / std::abs(c[3])};
  }
  return PlaneSurface{head.normalized()};
}

}  // namespace

ProjectedCurve ClassifyCurve(const QuaternionCircle& circle,
                             double plane_tolerance) {
  return ProjectedCurve{{SurfaceOf(circle.c3, plane_tolerance),
                         SurfaceOf(circle.c4, plane_tolerance)}};
}

double SurfaceResidual(const Surface& surface, const BallPoint& p) {
  if (const auto* s = std::get_if<SphereSurface>(&surface)) {
    return (p - s->center).norm() - s->radius;
  }
  return std::get<PlaneSurface>(surface).normal.dot(p);
}

}  // namespace rotvote
