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

// Cyclic Jacobi solvers for the tiny fixed-size problems in this library
// (3x3 and 4x4). Both converge quadratically and need no workspace.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Core>

namespace rotvote {

template <int N>
struct SymmetricEigen {
  /// Ascending.
  Eigen::Matrix<double, N, 1> values;
  /// Column k is the unit eigenvector of values[k].
  Eigen::Matrix<double, N, N> vectors;
};

/// Two-sided cyclic Jacobi on a symmetric matrix (only the upper triangle is
/// read). Sweeps until every off-diagonal entry is negligible relative to
/// the diagonal, capped at 64 sweeps.
template <int N>
SymmetricEigen<N> JacobiEigen(const Eigen::Matrix<double, N, N>& input) {
  using Mat = Eigen::Matrix<double, N, N>;
  Mat a = input.template selfadjointView<Eigen::Upper>();
  Mat v = Mat::Identity();

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0 || off <= 1e-34 * a.diagonal().squaredNorm()) break;

    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < N; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < N; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i) < a(j, j); });
  SymmetricEigen<N> out;
  for (int k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// R may be Eigen::Dynamic (tall stacks); C is fixed.
template <int R, int C>
struct SmallSvd {
  Eigen::Matrix<double, R, C> u;  // thin: orthonormal columns where sigma > 0
  Eigen::Matrix<double, C, 1> sigma;  // descending
  Eigen::Matrix<double, C, C> v;
};

/// One-sided (Hestenes) Jacobi SVD, R >= C. Each rotation is a Jacobi step
/// on the Gram matrix A^T A applied implicitly, so singular values keep full
/// relative accuracy instead of the squared accuracy of an explicit A^T A.
/// Columns of `u` belonging to zero singular values are left as zero.
template <int R, int C>
SmallSvd<R, C> JacobiSvd(const Eigen::Matrix<double, R, C>& input) {
  static_assert(R == Eigen::Dynamic || R >= C,
                "JacobiSvd expects at least as many rows as columns");
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  Eigen::Matrix<double, R, C> a = input;
  const Eigen::Index rows = a.rows();
  Eigen::Matrix<double, C, C> v = Eigen::Matrix<double, C, C>::Identity();

  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < C; ++p) {
      for (int q = p + 1; q < C; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index k = 0; k < rows; ++k) {
          const double x = a(k, p), y = a(k, q);
          a(k, p) = c * x - s * y;
          a(k, q) = s * x + c * y;
        }
        for (int k = 0; k < C; ++k) {
          const double x = v(k, p), y = v(k, q);
          v(k, p) = c * x - s * y;
          v(k, q) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::array<int, C> order;
  std::iota(order.begin(), order.end(), 0);
  Eigen::Matrix<double, C, 1> norms;
  for (int k = 0; k < C; ++k) norms[k] = a.col(k).norm();
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return norms[i] > norms[j]; });

  SmallSvd<R, C> out;
  out.u.resize(rows, C);
  for (int k = 0; k < C; ++k) {
    const int src = order[k];
    out.sigma[k] = norms[src];
    out.v.col(k) = v.col(src);
    if (norms[src] > 0.0) {
      out.u.col(k) = a.col(src) / norms[src];
    } else {
      out.u.col(k).setZero();
    }
  }
  return out;
}

}  // namespace rotvote
