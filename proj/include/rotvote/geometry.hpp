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

// Minimal rotation algebra shared by every solver in the library.
//
// Quaternions are stored scalar-first: [q0, q1, q2, q3] with q0 the scalar
// part. This holds for every type, file, and JSON document in the project.
// Eigen::Quaterniond (which stores x, y, z, w) is deliberately not used.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "rotvote/random.hpp"

namespace rotvote {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using RotationMatrix = Eigen::Matrix3d;

/// Unit quaternion, scalar-first. q and -q denote the same rotation.
class UnitQuaternion {
 public:
  /// Identity rotation.
  UnitQuaternion() : v_(1.0, 0.0, 0.0, 0.0) {}

  /// Normalizes `v`. A zero vector is a contract violation.
  explicit UnitQuaternion(const Vec4& v);
  UnitQuaternion(double q0, double q1, double q2, double q3)
      : UnitQuaternion(Vec4(q0, q1, q2, q3)) {}

  static UnitQuaternion Identity() { return UnitQuaternion(); }

  double operator[](int i) const { return v_[i]; }
  double w() const { return v_[0]; }
  Vec3 vec() const { return v_.tail<3>(); }
  const Vec4& coeffs() const { return v_; }

  UnitQuaternion conjugate() const;
  UnitQuaternion operator-() const;

 private:
  struct NoNormalize {};
  UnitQuaternion(const Vec4& v, NoNormalize) : v_(v) {}

  Vec4 v_;
};

Mat3 Skew(const Vec3& v);

/// [cos(angle/2), sin(angle/2) * axis]. Throws kContract if |axis| is not
/// 1 within 1e-9.
UnitQuaternion QuatFromAxisAngle(const Vec3& axis, double angle);

/// Hamilton product; R(p * q) = R(p) R(q).
UnitQuaternion QuatCompose(const UnitQuaternion& p, const UnitQuaternion& q);

RotationMatrix QuatToMatrix(const UnitQuaternion& q);

/// Shepperd's method. Throws kContract when R^T R deviates from I (or det R
/// from 1) by more than 1e-6. The result is hemisphere-canonical.
UnitQuaternion MatrixToQuat(const RotationMatrix& r);

/// Rotation by `angle` about unit `axis` (Rodrigues formula).
RotationMatrix AxisAngleMatrix(const Vec3& axis, double angle);

/// Picks the representative of {q, -q} with q3 <= 0. When |q3| <= 1e-15 the
/// representative whose first nonzero entry among (q0, q1, q2) is positive
/// is returned.
UnitQuaternion CanonicalizeHemisphere(const UnitQuaternion& q);
Vec4 CanonicalizeHemisphere(const Vec4& q);

/// Geodesic angle in degrees, arccos((tr(R_gt^T R_est) - 1) / 2). Evaluated
/// as atan2(|sin|, cos) from the skew and trace parts of R_gt^T R_est, which
/// stays accurate for errors far below 1e-6 degrees where arccos does not.
double RotationErrorDeg(const RotationMatrix& r_gt, const RotationMatrix& r_est);
double RotationErrorDeg(const UnitQuaternion& q_gt, const UnitQuaternion& q_est);

/// Largest |entry| of R^T R - I, plus |det R - 1|.
double OrthonormalityDefect(const Mat3& r);

/// Uniform on S^3 via a normalized 4-d Gaussian.
UnitQuaternion RandomRotation(CounterRng& rng);
UnitQuaternion RandomRotation(std::uint64_t seed);
/// Uniform on S^2 via a normalized 3-d Gaussian.
Vec3 RandomUnitVec3(CounterRng& rng);
Vec3 RandomUnitVec3(std::uint64_t seed);

/// One constraint R x = y. Pure rotation problems expect unit x and y.
struct Correspondence {
  Vec3 x;
  Vec3 y;
};

/// Ordered correspondences; the provenance index of an entry is its
/// position, and every index list in the library refers to it.
using CorrespondenceSet = std::vector<Correspondence>;

inline constexpr double kRadToDeg = 57.295779513082320876798;
inline constexpr double kDegToRad = 0.017453292519943295769237;

}  // namespace rotvote
