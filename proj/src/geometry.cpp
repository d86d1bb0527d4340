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

#include "rotvote/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "rotvote/error.hpp"

namespace rotvote {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kContract:
      return "contract";
    case ErrorKind::kConfig:
      return "config";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kDegenerate:
      return "degenerate";
    case ErrorKind::kSingularity:
      return "singularity";
    case ErrorKind::kDomain:
      return "domain";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

UnitQuaternion::UnitQuaternion(const Vec4& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::kContract, "quaternion must be finite and nonzero");
  }
  v_ = v / n;
}

UnitQuaternion UnitQuaternion::conjugate() const {
  return UnitQuaternion(Vec4(v_[0], -v_[1], -v_[2], -v_[3]), NoNormalize{});
}

UnitQuaternion UnitQuaternion::operator-() const {
  return UnitQuaternion(Vec4(-v_), NoNormalize{});
}

Mat3 Skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),  //
      v.z(), 0.0, -v.x(),   //
      -v.y(), v.x(), 0.0;
  return s;
}

UnitQuaternion QuatFromAxisAngle(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "rotation axis must be unit length (|axis| = " << axis.norm() << ")";
    throw Error(ErrorKind::kContract, os.str());
  }
  const double h = 0.5 * angle;
  Vec4 v;
  v << std::cos(h), std::sin(h) * axis;
  return UnitQuaternion(v);
}

UnitQuaternion QuatCompose(const UnitQuaternion& p, const UnitQuaternion& q) {
  const double p0 = p[0], p1 = p[1], p2 = p[2], p3 = p[3];
  const double q0 = q[0], q1 = q[1], q2 = q[2], q3 = q[3];
  return UnitQuaternion(p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
                        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
                        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
                        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0);
}

RotationMatrix QuatToMatrix(const UnitQuaternion& q) {
  const double q0 = q[0], q1 = q[1], q2 = q[2], q3 = q[3];
  RotationMatrix r;
  r << q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2.0 * (q1 * q2 - q0 * q3),
      2.0 * (q1 * q3 + q0 * q2),  //
      2.0 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3,
      2.0 * (q2 * q3 - q0 * q1),  //
      2.0 * (q1 * q3 - q0 * q2), 2.0 * (q2 * q3 + q0 * q1),
      q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3;
  return r;
}

double OrthonormalityDefect(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() +
         std::abs(r.determinant() - 1.0);
}

UnitQuaternion MatrixToQuat(const RotationMatrix& r) {
  if (!r.allFinite() || OrthonormalityDefect(r) > 1e-6) {
    throw Error(ErrorKind::kContract, "matrix is not a rotation");
  }
  // Branch on the largest of (trace, r00, r11, r22) so the square root is
  // always taken of a quantity >= 1.
  const double tr = r.trace();
  Vec4 q;
  if (tr >= r(0, 0) && tr >= r(1, 1) && tr >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s,
        (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    q << (r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s,
        (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 - r(0, 0) + r(1, 1) - r(2, 2));
    q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s,
        (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 - r(0, 0) - r(1, 1) + r(2, 2));
    q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s,
        (r(1, 2) + r(2, 1)) / s, 0.25 * s;
  }
  return CanonicalizeHemisphere(UnitQuaternion(q));
}

RotationMatrix AxisAngleMatrix(const Vec3& axis, double angle) {
  return QuatToMatrix(QuatFromAxisAngle(axis, angle));
}

Vec4 CanonicalizeHemisphere(const Vec4& q) {
  constexpr double kTie = 1e-15;
  if (q[3] < -kTie) return q;
  if (q[3] > kTie) return -q;
  for (int i = 0; i < 3; ++i) {
    if (q[i] > 0.0) return q;
    if (q[i] < 0.0) return -q;
  }
  return q;
}

UnitQuaternion CanonicalizeHemisphere(const UnitQuaternion& q) {
  return CanonicalizeHemisphere(q.coeffs()) == q.coeffs() ? q : -q;
}

double RotationErrorDeg(const RotationMatrix& r_gt,
                        const RotationMatrix& r_est) {
  // Same angle as arccos((tr - 1) / 2), evaluated as atan2(sin, cos) so that
  // errors below ~1e-6 degrees are not lost to cancellation near cos = 1.
  const Mat3 d = r_gt.transpose() * r_est;
  const double c = std::clamp(0.5 * (d.trace() - 1.0), -1.0, 1.0);
  const Vec3 axis_sin(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  const double s = std::min(0.5 * axis_sin.norm(), 1.0);
  return std::atan2(s, c) * kRadToDeg;
}

double RotationErrorDeg(const UnitQuaternion& q_gt,
                        const UnitQuaternion& q_est) {
  return RotationErrorDeg(QuatToMatrix(q_gt), QuatToMatrix(q_est));
}

UnitQuaternion RandomRotation(CounterRng& rng) {
  Vec4 v;
  do {
    v << rng.Gaussian(), rng.Gaussian(), rng.Gaussian(), rng.Gaussian();
  } while (v.norm() < 1e-12);
  return UnitQuaternion(v);
}

UnitQuaternion RandomRotation(std::uint64_t seed) {
  CounterRng rng(seed);
  return RandomRotation(rng);
}

Vec3 RandomUnitVec3(CounterRng& rng) {
  Vec3 v;
  do {
    v << rng.Gaussian(), rng.Gaussian(), rng.Gaussian();
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Vec3 RandomUnitVec3(std::uint64_t seed) {
  CounterRng rng(seed);
  return RandomUnitVec3(rng);
}

}  // namespace rotvote
