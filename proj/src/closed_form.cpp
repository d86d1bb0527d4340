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

#include "rotvote/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "rotvote/error.hpp"
#include "rotvote/jacobi.hpp"
#include "rotvote/quat_circle.hpp"

namespace rotvote {
namespace {

void RequireAtLeastTwo(std::size_t n, const char* solver) {
  if (n < 2) {
    std::ostringstream os;
    os << solver << " needs at least 2 correspondences, got " << n;
    throw Error(ErrorKind::kDegenerate, os.str());
  }
}

double WeightAt(std::span<const double> weights, std::size_t i) {
  return weights.empty() ? 1.0 : weights[i];
}

void CheckWeights(std::span<const Correspondence> corrs,
                  std::span<const double> weights) {
  if (!weights.empty() && weights.size() != corrs.size()) {
    throw Error(ErrorKind::kContract, "weights must match correspondences");
  }
}

bool Ties(double lo, double hi, double scale) {
  return std::abs(hi - lo) <= 1e-12 * std::max(1.0, std::abs(scale));
}

}  // namespace

StackedSystem StackSystem(std::span<const Correspondence> corrs) {
  RequireAtLeastTwo(corrs.size(), "stacked circle system");
  StackedSystem sys;
  sys.rows.resize(2 * static_cast<Eigen::Index>(corrs.size()), 4);
  sys.row_source.resize(2 * corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const ComplementBasis c = ComputeComplementBasis(corrs[i].x, corrs[i].y);
    const auto r = static_cast<Eigen::Index>(2 * i);
    sys.rows.row(r) = c.c3.transpose();
    sys.rows.row(r + 1) = c.c4.transpose();
    sys.row_source[2 * i] = i;
    sys.row_source[2 * i + 1] = i;
  }
  return sys;
}

HomogeneousSolution SolveHomogeneous(const Mat4& gram) {
  const SymmetricEigen<4> eig = JacobiEigen<4>(gram);
  HomogeneousSolution out;
  out.rotation = CanonicalizeHemisphere(UnitQuaternion(Vec4(eig.vectors.col(0))));
  out.eigenvalues = eig.values;
  out.degenerate = Ties(eig.values[0], eig.values[1], eig.values[3]);
  return out;
}

HomogeneousSolution SolveHomogeneous(const StackedSystem& system) {
  const Mat4 gram = system.rows.transpose() * system.rows;
  return SolveHomogeneous(gram);
}

Mat4 CircleGram(std::span<const Correspondence> corrs,
                std::span<const double> weights) {
  CheckWeights(corrs, weights);
  Mat4 gram = Mat4::Zero();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const ComplementBasis c = ComputeComplementBasis(corrs[i].x, corrs[i].y);
    gram.noalias() +=
        WeightAt(weights, i) * (c.c3 * c.c3.transpose() + c.c4 * c.c4.transpose());
  }
  return gram;
}

HomogeneousSolution SolveCircleStack(std::span<const Correspondence> corrs,
                                     std::span<const double> weights) {
  RequireAtLeastTwo(corrs.size(), "circle-stack solver");
  return SolveHomogeneous(CircleGram(corrs, weights));
}

HomogeneousSolution SolveCircleStack(std::span<const Correspondence> corrs,
                                     std::span<const std::size_t> indices) {
  RequireAtLeastTwo(indices.size(), "circle-stack solver");
  Mat4 gram = Mat4::Zero();
  for (const std::size_t i : indices) {
    const ComplementBasis c = ComputeComplementBasis(corrs[i].x, corrs[i].y);
    gram.noalias() += c.c3 * c.c3.transpose() + c.c4 * c.c4.transpose();
  }
  return SolveHomogeneous(gram);
}

Mat3 AttitudeProfile(std::span<const Correspondence> corrs,
                     std::span<const double> weights) {
  CheckWeights(corrs, weights);
  Mat3 b = Mat3::Zero();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    b.noalias() += WeightAt(weights, i) * corrs[i].y * corrs[i].x.transpose();
  }
  return b;
}

RotationMatrix RotationFromProfile(const Mat3& profile) {
  const SmallSvd<3, 3> svd = JacobiSvd<3, 3>(profile);
  if (!(svd.sigma[0] > 0.0) || svd.sigma[1] <= 1e-12 * svd.sigma[0]) {
    throw Error(ErrorKind::kDegenerate,
                "attitude profile matrix has rank <= 1");
  }
  // With u3 := u1 x u2 (so det U = 1) the reflection-corrected optimum
  // U diag(1, 1, det(U V^T)) V^T reduces to the sum below. This also covers
  // rank(B) = 2, where the third left singular vector is undefined.
  const Vec3 u1 = svd.u.col(0), u2 = svd.u.col(1);
  const Vec3 u3 = u1.cross(u2);
  const double det_v = svd.v.determinant();
  return u1 * svd.v.col(0).transpose() + u2 * svd.v.col(1).transpose() +
         det_v * u3 * svd.v.col(2).transpose();
}

RotationMatrix SvdUmeyama(std::span<const Correspondence> corrs,
                          std::span<const double> weights) {
  RequireAtLeastTwo(corrs.size(), "SVD solver");
  return RotationFromProfile(AttitudeProfile(corrs, weights));
}

HornSolution HornEigen(std::span<const Correspondence> corrs,
                       std::span<const double> weights) {
  RequireAtLeastTwo(corrs.size(), "Horn solver");
  CheckWeights(corrs, weights);
  Mat4 m = Mat4::Zero();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    m.noalias() += WeightAt(weights, i) *
                   BuildConstraintMatrix(corrs[i].x, corrs[i].y);
  }
  const SymmetricEigen<4> eig = JacobiEigen<4>(m);
  HornSolution out;
  out.rotation = CanonicalizeHemisphere(UnitQuaternion(Vec4(eig.vectors.col(3))));
  out.eigenvalues = eig.values;
  out.degenerate = Ties(eig.values[2], eig.values[3], eig.values[3]);
  return out;
}

RotationMatrix CayleyToMatrix(const Vec3& gibbs) {
  const Mat3 g = Skew(gibbs);
  return (Mat3::Identity() - g).inverse() * (Mat3::Identity() + g);
}

RotationMatrix GibbsLinear(std::span<const Correspondence> corrs) {
  RequireAtLeastTwo(corrs.size(), "Gibbs solver");
  Mat3 normal = Mat3::Zero();
  Vec3 rhs = Vec3::Zero();
  for (const Correspondence& c : corrs) {
    const Mat3 a = Skew(c.x + c.y);
    normal.noalias() += a.transpose() * a;
    rhs.noalias() += a.transpose() * (c.x - c.y);
  }
  const SymmetricEigen<3> eig = JacobiEigen<3>(normal);
  const double lo = eig.values[0];
  const double hi = eig.values[2];
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw Error(ErrorKind::kSingularity,
                "Gibbs normal matrix is singular (rotation near 180 degrees)");
  }
  const Vec3 g = eig.vectors *
                 (eig.vectors.transpose() * rhs).cwiseQuotient(eig.values);
  return CayleyToMatrix(g);
}

RigidTransform FitRigid(std::span<const Correspondence> corrs) {
  if (corrs.size() < 3) {
    throw Error(ErrorKind::kDegenerate, "rigid fit needs at least 3 points");
  }
  Vec3 cx = Vec3::Zero(), cy = Vec3::Zero();
  for (const Correspondence& c : corrs) {
    cx += c.x;
    cy += c.y;
  }
  cx /= static_cast<double>(corrs.size());
  cy /= static_cast<double>(corrs.size());
  Mat3 b = Mat3::Zero();
  for (const Correspondence& c : corrs) {
    b.noalias() += (c.y - cy) * (c.x - cx).transpose();
  }
  RigidTransform out;
  out.rotation = RotationFromProfile(b);
  out.translation = cy - out.rotation * cx;
  return out;
}

}  // namespace rotvote
