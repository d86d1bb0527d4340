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

// Outlier-free rotation solvers.
//
// All of them minimize (or, for the Gibbs solver, linearize) the same
// Wahba-type objective; they differ only in the algebra used. The
// circle-stack solver is the one built on quaternion circles; the others
// serve as baselines and cross-checks.
//
// Optional per-correspondence weights default to 1. Accumulation runs in
// input order on the calling thread, so results are reproducible.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rotvote/geometry.hpp"

namespace rotvote {

/// 2N x 4 matrix Q of stacked complement rows; rows 2i and 2i+1 come from
/// correspondence row_source[2i].
struct StackedSystem {
  Eigen::Matrix<double, Eigen::Dynamic, 4> rows;
  std::vector<std::size_t> row_source;
};

/// Throws kDegenerate when fewer than two correspondences are given.
StackedSystem StackSystem(std::span<const Correspondence> corrs);

struct HomogeneousSolution {
  UnitQuaternion rotation;  // hemisphere-canonical
  /// Ascending eigenvalues of the 4x4 normal matrix.
  Vec4 eigenvalues;
  /// The two smallest eigenvalues tie, so the solution is not unique.
  bool degenerate = false;
};

/// Unit eigenvector of Q^T Q for its smallest eigenvalue.
HomogeneousSolution SolveHomogeneous(const StackedSystem& system);

/// Sum_i w_i (c3 c3^T + c4 c4^T) accumulated without materializing Q.
Mat4 CircleGram(std::span<const Correspondence> corrs,
                std::span<const double> weights = {});
HomogeneousSolution SolveHomogeneous(const Mat4& gram);

/// Circle-stack solve directly from correspondences. Throws kDegenerate for
/// fewer than two correspondences.
HomogeneousSolution SolveCircleStack(std::span<const Correspondence> corrs,
                                     std::span<const double> weights = {});

/// Same, over the subset `indices` of `corrs`.
HomogeneousSolution SolveCircleStack(std::span<const Correspondence> corrs,
                                     std::span<const std::size_t> indices);

/// B = sum_i w_i y_i x_i^T.
Mat3 AttitudeProfile(std::span<const Correspondence> corrs,
                     std::span<const double> weights = {});

/// R* = U diag(1, 1, det(U V^T)) V^T from the SVD of B. Throws kDegenerate
/// when rank(B) <= 1 or fewer than two correspondences are given.
RotationMatrix SvdUmeyama(std::span<const Correspondence> corrs,
                          std::span<const double> weights = {});

/// Rotation part of the SVD solver applied to an arbitrary profile matrix.
RotationMatrix RotationFromProfile(const Mat3& profile);

struct HornSolution {
  UnitQuaternion rotation;  // hemisphere-canonical
  Vec4 eigenvalues;         // ascending
  bool degenerate = false;  // two largest eigenvalues tie
};

/// Top eigenvector of sum_i w_i M_i, M_i the constraint matrix of (x_i, y_i).
HornSolution HornEigen(std::span<const Correspondence> corrs,
                       std::span<const double> weights = {});

/// Least-squares Gibbs vector from the stacked [x + y]_x g = x - y system,
/// mapped back through the Cayley transform. Throws kSingularity when the
/// normal matrix condition number exceeds 1e12 (rotation near 180 degrees)
/// and kDegenerate for fewer than two correspondences.
RotationMatrix GibbsLinear(std::span<const Correspondence> corrs);

/// Cayley transform (I - [g]_x)^-1 (I + [g]_x).
RotationMatrix CayleyToMatrix(const Vec3& gibbs);

struct RigidTransform {
  RotationMatrix rotation = RotationMatrix::Identity();
  Vec3 translation = Vec3::Zero();
};

/// Least-squares rigid fit of y = R x + t over arbitrary (non-unit) points:
/// centroid subtraction followed by the SVD rotation solver.
RigidTransform FitRigid(std::span<const Correspondence> corrs);

}  // namespace rotvote
