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


// Seeded synthetic scenes, baseline solvers and the trial runner.
//
// Every scene is a pure function of its parameters and seed. Labels are
// carried alongside the shuffled correspondences.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotvote/geometry.hpp"
#include "rotvote/rigid.hpp"
#include "rotvote/voting.hpp"

namespace rotvote::bench {

/// Ground-truth role of a rotation-scene correspondence.
enum class Label : int { kInlier = 0, kOutlier = 1, kStructured = 2 };

struct RotationSceneParams {
  std::size_t n = 10000;
  double delta = 0.01;
  /// Outlier ratio; ceil((1 - rho) n) correspondences are inliers.
  double rho = 0.95;
  /// Same-axis outlier ratio; floor(eta n) outliers share one rotation axis.
  double eta = 0.0;
  /// Structured outliers closer than this to R_gt x are redrawn.
  double structured_exclusion_deg = 5.0;

  void Validate() const;
};

struct RotationScenario {
  RotationSceneParams params;
  std::uint64_t seed = 0;
  UnitQuaternion rotation;
  /// Shared axis of the structured outliers (zero when eta = 0).
  Vec3 structured_axis = Vec3::Zero();
  CorrespondenceSet corrs;
  std::vector<Label> labels;
};

/// x uniform on S^2; inliers y = normalize(R x + delta g); structured
/// outliers y = exp(theta [r_s]_x) x with one shared axis r_s and random
/// theta; the remaining outliers have independent uniform y.
RotationScenario GenRotationScene(const RotationSceneParams& params,
                                  std::uint64_t seed);

struct Motion {
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();
};

struct RigidSceneParams {
  std::size_t n = 2000;
  double delta = 0.01;
  double rho = 0.9;

  void Validate() const;
};

struct MultiSceneParams {
  std::size_t models = 3;
  std::size_t points_per_model = 200;
  double delta = 0.01;
  /// Extra outliers as a fraction of the total.
  double rho = 0.0;

  void Validate() const;
};

struct RigidScenario {
  std::uint64_t seed = 0;
  std::vector<Motion> motions;
  CorrespondenceSet corrs;
  /// Motion index, or -1 for an outlier.
  std::vector<int> labels;
};

/// Points in [-1, 1]^3; inliers y = R x + t + delta g with t in [-1, 1]^3;
/// outliers have x and y independent in the box.
RigidScenario GenRigidScene(const RigidSceneParams& params, std::uint64_t seed);
/// One random motion per model, points_per_model points each.
RigidScenario GenMultiScene(const MultiSceneParams& params, std::uint64_t seed);

/// Two-correspondence hypotheses scored by circle-residual consensus; the
/// best is refit on its consensus set. Throws kDegenerate for N < 2 or when
/// no sample yields a hypothesis.
RotationEstimate RansacRotation(std::span<const Correspondence> corrs,
                                int iterations, double inlier_threshold,
                                std::uint64_t seed);

/// Sequential three-point RANSAC: fit, take the consensus, refit by least
/// squares, remove it, repeat for each model.
std::vector<RigidEstimate> SequentialRansacRigid(
    std::span<const Correspondence> corrs, std::size_t models, int iterations,
    double inlier_threshold, std::uint64_t seed);

/// Axis-first diagnostic: every correspondence's admissible rotation axes
/// (unit r with r.x = r.y) are binned on an equal-area hemisphere grid.
struct AxisHistogram {
  Vec3 peak_axis = Vec3::Zero();
  std::uint32_t peak_votes = 0;
  /// Votes in the bins containing the given axes.
  std::uint32_t true_axis_votes = 0;
  std::uint32_t structured_axis_votes = 0;
  double peak_to_true_deg = 0.0;
  double peak_to_structured_deg = 0.0;
};
AxisHistogram AxisVoteDiagnostic(std::span<const Correspondence> corrs,
                                 const Vec3& true_axis,
                                 const Vec3& structured_axis,
                                 int bins_z = 90, int bins_phi = 180,
                                 int samples = 360);

enum class SceneKind { kRotation, kRigid, kMulti };

struct ScenarioSpec {
  SceneKind kind = SceneKind::kRotation;
  RotationSceneParams rotation;
  RigidSceneParams rigid;
  MultiSceneParams multi;

  std::string Describe() const;
};

enum class Method {
  kVoting,
  kRansac,
  kSvd,
  kHorn,
  kCircleStack,
  kGibbs,
};
std::string MethodName(Method m);
/// Throws kConfig for unknown names.
Method ParseMethod(const std::string& name);

struct Thresholds {
  double rotation_deg = 5.0;
  double rigid_translation = 0.1;
  double multi_rotation_deg = 2.0;
  double multi_translation = 0.02;
};

struct BenchConfig {
  VotingConfig voting;
  RigidConfig rigid;
  int ransac_iterations = 5000;
  double ransac_rotation_threshold = 0.02;
  double ransac_rigid_threshold = 0.05;
  Thresholds thresholds;
  std::uint64_t seed = 0;
  /// Trials run concurrently; each owns its scene and solver state.
  int trial_threads = 1;
};

struct TrialReport {
  std::string scenario;
  SceneKind kind = SceneKind::kRotation;
  std::size_t n = 0;
  double delta = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  std::size_t models = 1;
  std::uint64_t seed = 0;
  int trial = 0;
  std::string method;
  /// Degrees; for multi-motion scenes the mean over ground-truth motions.
  double e_r_deg = 0.0;
  /// Voting only: error of the unrefined peak (NaN otherwise).
  double e_r_raw_deg = 0.0;
  /// Translation error (NaN for rotation scenes).
  double e_t = 0.0;
  double runtime_s = 0.0;
  bool success = false;
  std::string error;
};

struct Aggregate {
  std::string scenario;
  std::string method;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;  // trials that raised an error
  double success_rate = 0.0;
  double median_e_r_deg = 0.0;
  double mean_e_r_deg = 0.0;
  double median_e_t = 0.0;
  double mean_e_t = 0.0;
  double median_runtime_s = 0.0;
  double mean_runtime_s = 0.0;
  /// Fraction of trials with e_R at or below each threshold.
  std::vector<double> recall_thresholds_deg;
  std::vector<double> recall;
};

struct MatrixReport {
  std::vector<TrialReport> trials;
  std::vector<Aggregate> aggregates;
};

/// Scene of trial t of scenario s is seeded by Derive(Derive(seed, s), t);
/// all methods see the same scene. Solver errors are recorded per trial.
MatrixReport RunMatrix(const std::vector<ScenarioSpec>& grid,
                       const std::vector<Method>& methods, int repeats,
                       const BenchConfig& cfg);

/// Matches estimated motions to ground truth (greedy on rotation error) and
/// fills e_r_deg, e_t (means over ground truth) and success.
void ScoreMotions(const std::vector<Motion>& truth,
                  const std::vector<Motion>& estimates,
                  const Thresholds& thresholds, TrialReport& report);

std::vector<Aggregate> AggregateTrials(const std::vector<TrialReport>& trials);

inline constexpr int kReportSchemaVersion = 1;

/// One row per trial behind a "# rotvote bench trials, schema v1" line.
void WriteTrialsCsv(std::ostream& out, const std::vector<TrialReport>& trials);
/// {"schema_version": 1, "aggregates": [...]}.
void WriteAggregatesJson(std::ostream& out,
                         const std::vector<Aggregate>& aggregates);

}  // namespace rotvote::bench
