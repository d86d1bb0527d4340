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


// Rotation voting.
//
// Every correspondence (x, y) constrains the rotation to a great circle of
// unit quaternions. The circle is sampled at J angles alpha_j = -pi + 2 pi j
// / J, each sample is moved to the q3 <= 0 hemisphere, projected into the
// unit ball, and counted in an Accumulator3D. Bins crossed by many circles
// are rotation hypotheses; the best ones are refined by a least-squares
// circle-stack solve on the correspondences whose circles pass close by.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rotvote/accumulator.hpp"
#include "rotvote/geometry.hpp"
#include "rotvote/stereo.hpp"

namespace rotvote {

/// How repeated hits of one bin by the same correspondence are counted.
enum class DedupMode {
  /// Skip a sample whose bin equals the previous sample's bin.
  kConsecutive,
  /// Count every bin at most once per correspondence.
  kPerCorrespondence,
};

struct PeakSettings {
  std::size_t max_peaks = 1;
  /// Candidates below this fraction of the top count are dropped.
  double min_votes_fraction = 0.25;
  /// Chebyshev radius, in bins, of non-maximum suppression.
  int suppression_radius_bins = 3;
};

struct VotingConfig {
  double epsilon = 1.0 / 180.0;
  int samples = 180;
  bool refine = true;
  /// Circle residual below which a correspondence supports a rotation.
  double tau_ref = 0.02;
  PeakSettings peaks;
  DedupMode dedup = DedupMode::kConsecutive;
  int threads = 1;
  /// Largest dense grid (bytes) before falling back to sparse counters.
  std::uint64_t memory_budget_bytes = std::uint64_t{512} << 20;
  /// Refined multi-rotation estimates closer than this are merged.
  double duplicate_angle_deg = 1.0;

  /// Throws kConfig on any out-of-range field.
  void Validate() const;
};

struct VoteDiagnostics {
  bool sparse_fallback = false;
  /// Workers incremented one shared dense grid atomically because private
  /// grids would not fit the memory budget.
  bool atomic_merge = false;
  int workers = 1;
  std::uint64_t increments = 0;
};

struct VoteResult {
  Accumulator3D accumulator;
  VoteDiagnostics diagnostics;
};

/// Accumulates the circles of all correspondences. Counts do not depend on
/// cfg.threads. Expects unit vectors.
VoteResult Vote(std::span<const Correspondence> corrs, const VotingConfig& cfg);

/// Bin sequence that one correspondence's circle contributes, after
/// duplicate suppression.
std::vector<std::uint64_t> CircleBins(const Correspondence& corr,
                                      const Accumulator3D& grid,
                                      const VotingConfig& cfg);

struct Peak {
  std::uint64_t bin = 0;
  BallPoint center = BallPoint::Zero();
  std::uint32_t votes = 0;
};

/// Peaks in descending vote order (ties: lowest bin index first). A
/// candidate is suppressed when it lies within the suppression radius of an
/// accepted peak, or of that peak's mirror bin when either is close to the
/// ball boundary, where q and -q land on opposite sides. Throws kDegenerate
/// on an empty accumulator.
std::vector<Peak> ExtractPeaks(const Accumulator3D& acc,
                               const PeakSettings& settings);

struct RotationEstimate {
  UnitQuaternion rotation;
  /// Unprojected bin center before refinement.
  UnitQuaternion peak_rotation;
  std::uint32_t votes = 0;
  std::vector<std::size_t> inliers;
  bool refined = false;
  std::uint64_t bin_index = 0;
  BallPoint bin_center = BallPoint::Zero();
};

/// Vote, take the top peak and, if cfg.refine, alternate inlier collection
/// and circle-stack solves twice. Throws kDegenerate when N < 2 or nothing
/// was voted.
RotationEstimate SolveRotation(std::span<const Correspondence> corrs,
                               const VotingConfig& cfg);

/// Multiple rotations. With expected_models set, the strongest that many
/// separated peaks are taken regardless of min_votes_fraction; otherwise up
/// to cfg.peaks.max_peaks peaks above the fraction cutoff. Each correspondence supports at
/// most one estimate, the one with the smallest circle residual.
std::vector<RotationEstimate> SolveMultiRotation(
    std::span<const Correspondence> corrs, const VotingConfig& cfg,
    std::optional<std::size_t> expected_models = std::nullopt);

/// Indices whose circle residual against q is at most tau.
std::vector<std::size_t> CollectInliers(std::span<const Correspondence> corrs,
                                        const UnitQuaternion& q, double tau);

}  // namespace rotvote
