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


// Rigid motion y = R x + t by pairwise decomposition.
//
// Differences m = x_i - x_j and n = y_i - y_j cancel the translation, so
// n = R m. Pairs whose lengths disagree cannot come from one rigid motion
// and are dropped before their normalized directions vote for R. The
// translation is then voted from the candidates y_i - R x_i.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rotvote/geometry.hpp"
#include "rotvote/voting.hpp"

namespace rotvote {

struct PairConstraint {
  Vec3 m;  // x_i - x_j
  Vec3 n;  // y_i - y_j
  std::size_t i = 0;
  std::size_t j = 0;  // i < j
};

struct TranslationGrid {
  double lo = -5.0;
  double hi = 5.0;
  double step = 0.025;
};

struct RigidConfig {
  /// Length-check threshold |‖m‖ - ‖n‖| <= mu_t.
  double mu_t = 0.05;
  /// Pairs with ‖m‖ or ‖n‖ below this are not used.
  double min_len = 0.05;
  /// Above this many pairs a seeded uniform subset of this size is used.
  std::uint64_t k_max = 2'000'000;
  TranslationGrid translation;
  /// Residual ‖R x + t - y‖ bound for membership in a motion.
  double tau_assign = 0.05;
  VotingConfig voting;

  /// Throws kConfig on any out-of-range field.
  void Validate() const;
};

/// All i < j pairs, or a seeded uniform subset of k_max of them, minus pairs
/// shorter than min_len on either side. Throws kDegenerate for N < 2 or
/// when fewer than 2 pairs remain.
std::vector<PairConstraint> MakePairs(std::span<const Correspondence> corrs,
                                      const RigidConfig& cfg,
                                      std::uint64_t seed);

struct CheckedPairs {
  std::vector<PairConstraint> pairs;
  /// (m / ‖m‖, n / ‖n‖) for each kept pair, ready for rotation voting.
  CorrespondenceSet directions;
  std::vector<double> m_length;
  std::vector<double> n_length;
};

/// Keeps exactly the pairs with |‖m‖ - ‖n‖| <= mu_t.
CheckedPairs InlierCheck(std::span<const PairConstraint> pairs, double mu_t);

struct TranslationVote {
  Vec3 translation = Vec3::Zero();
  /// Candidates in the winning cell.
  std::uint32_t cell_votes = 0;
  /// Candidates averaged (winning cell and its 26 neighbours).
  std::size_t support = 0;
};

/// Bins t_i = y_i - R x_i on the translation grid, picks the fullest cell
/// (lowest index on ties), and returns the mean candidate of its 3x3x3
/// neighbourhood. Throws kDomain when no candidate falls inside the grid.
TranslationVote VoteTranslation(std::span<const Correspondence> corrs,
                                const RotationMatrix& r,
                                const TranslationGrid& grid);
TranslationVote VoteTranslation(std::span<const Correspondence> corrs,
                                std::span<const std::size_t> indices,
                                const RotationMatrix& r,
                                const TranslationGrid& grid);

struct RigidDiagnostics {
  std::uint64_t pairs_generated = 0;
  std::uint64_t pairs_surviving_check = 0;
  std::uint32_t votes = 0;
  std::uint32_t translation_votes = 0;
  bool refined = false;
};

struct RigidEstimate {
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();
  std::vector<std::size_t> inliers;
  RigidDiagnostics diagnostics;
};

/// Pairs, length check, rotation voting on pair directions, translation
/// voting, then inliers by residual. Throws kDegenerate for N < 3.
RigidEstimate SolveRigid(std::span<const Correspondence> corrs,
                         const RigidConfig& cfg, std::uint64_t seed);

/// Several rigid motions. Rotation peaks from the pair directions each get a
/// translation voted over all correspondences; every correspondence then
/// joins the motion with the smallest residual (if <= tau_assign). Motions
/// with fewer than 3 members are dropped, and the survivors are refit on
/// their own members: rotation from the pairs inside the set, translation
/// by voting again.
std::vector<RigidEstimate> SolveMultiRigid(
    std::span<const Correspondence> corrs, const RigidConfig& cfg,
    std::optional<std::size_t> expected_models, std::uint64_t seed);

/// ‖R x + t - y‖.
double RigidResidual(const Correspondence& c, const RotationMatrix& r,
                     const Vec3& t);

}  // namespace rotvote
