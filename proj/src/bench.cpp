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


#include "rotvote/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iterator>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "rotvote/closed_form.hpp"
#include "rotvote/error.hpp"
#include "rotvote/quat_circle.hpp"
#include "rotvote/random.hpp"

namespace rotvote::bench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kConfig, what);
}

bool InUnit(double v) { return v >= 0.0 && v <= 1.0; }

Vec3 UniformBox(CounterRng& rng) {
  const double a = rng.Uniform(-1.0, 1.0);
  const double b = rng.Uniform(-1.0, 1.0);
  const double c = rng.Uniform(-1.0, 1.0);
  return {a, b, c};
}

Vec3 GaussianVec3(CounterRng& rng) {
  const double a = rng.Gaussian();
  const double b = rng.Gaussian();
  const double c = rng.Gaussian();
  return {a, b, c};
}

double AngleDeg(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b)) * kRadToDeg;
}

template <typename T>
void ShuffleTogether(CounterRng& rng, CorrespondenceSet& corrs,
                     std::vector<T>& labels) {
  for (std::size_t i = corrs.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.UniformIndex(i));
    std::swap(corrs[i - 1], corrs[j]);
    std::swap(labels[i - 1], labels[j]);
  }
}

Motion RandomMotion(CounterRng& rng) {
  Motion m;
  m.rotation = RandomRotation(rng);
  m.translation = UniformBox(rng);
  return m;
}

}  // namespace

void RotationSceneParams::Validate() const {
  Require(n >= 1, "scene needs at least one correspondence");
  Require(delta >= 0.0, "noise delta must be >= 0");
  Require(InUnit(rho), "rho must lie in [0, 1]");
  Require(InUnit(eta), "eta must lie in [0, 1]");
  Require(eta <= rho, "eta must not exceed rho");
  Require(structured_exclusion_deg >= 0.0 && structured_exclusion_deg < 90.0,
          "structured exclusion must lie in [0, 90) degrees");
}

void RigidSceneParams::Validate() const {
  Require(n >= 1, "scene needs at least one correspondence");
  Require(delta >= 0.0, "noise delta must be >= 0");
  Require(InUnit(rho), "rho must lie in [0, 1]");
}

void MultiSceneParams::Validate() const {
  Require(models >= 1, "multi scene needs at least one model");
  Require(points_per_model >= 1, "models need at least one point");
  Require(delta >= 0.0, "noise delta must be >= 0");
  Require(rho >= 0.0 && rho < 1.0, "multi-scene rho must lie in [0, 1)");
}

RotationScenario GenRotationScene(const RotationSceneParams& params,
                                  std::uint64_t seed) {
  params.Validate();
  CounterRng rng(seed);
  RotationScenario s;
  s.params = params;
  s.seed = seed;
  s.rotation = RandomRotation(rng);
  const RotationMatrix r = QuatToMatrix(s.rotation);

  const std::size_t n = params.n;
  const auto n_in = std::min<std::size_t>(
      n, static_cast<std::size_t>(
             std::ceil((1.0 - params.rho) * static_cast<double>(n) - 1e-9)));
  const auto n_struct = std::min<std::size_t>(
      n - n_in, static_cast<std::size_t>(
                    std::floor(params.eta * static_cast<double>(n) + 1e-9)));
  s.corrs.reserve(n);
  s.labels.reserve(n);

  for (std::size_t i = 0; i < n_in; ++i) {
    const Vec3 x = RandomUnitVec3(rng);
    const Vec3 y = (r * x + params.delta * GaussianVec3(rng)).normalized();
    s.corrs.push_back({x, y});
    s.labels.push_back(Label::kInlier);
  }

  if (n_struct > 0) {
    const Vec3 gt_axis = s.rotation.vec().norm() > 1e-12
                             ? Vec3(s.rotation.vec().normalized())
                             : Vec3::UnitZ();
    const double min_sep = std::cos(params.structured_exclusion_deg * kDegToRad);
    do {
      s.structured_axis = RandomUnitVec3(rng);
    } while (std::abs(s.structured_axis.dot(gt_axis)) > min_sep);
    for (std::size_t i = 0; i < n_struct; ++i) {
      Vec3 x, y;
      do {
        x = RandomUnitVec3(rng);
        const double theta = rng.Uniform(-std::numbers::pi, std::numbers::pi);
        y = AxisAngleMatrix(s.structured_axis, theta) * x;
      } while (AngleDeg(y, r * x) < params.structured_exclusion_deg);
      s.corrs.push_back({x, y});
      s.labels.push_back(Label::kStructured);
    }
  }

  for (std::size_t i = n_in + n_struct; i < n; ++i) {
    const Vec3 x = RandomUnitVec3(rng);
    const Vec3 y = RandomUnitVec3(rng);
    s.corrs.push_back({x, y});
    s.labels.push_back(Label::kOutlier);
  }
  ShuffleTogether(rng, s.corrs, s.labels);
  return s;
}

RigidScenario GenRigidScene(const RigidSceneParams& params, std::uint64_t seed) {
  params.Validate();
  CounterRng rng(seed);
  RigidScenario s;
  s.seed = seed;
  s.motions.push_back(RandomMotion(rng));
  const RotationMatrix r = QuatToMatrix(s.motions[0].rotation);
  const Vec3 t = s.motions[0].translation;
  const std::size_t n = params.n;
  const auto n_in = std::min<std::size_t>(
      n, static_cast<std::size_t>(
             std::ceil((1.0 - params.rho) * static_cast<double>(n) - 1e-9)));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 x = UniformBox(rng);
    if (i < n_in) {
      s.corrs.push_back({x, r * x + t + params.delta * GaussianVec3(rng)});
      s.labels.push_back(0);
    } else {
      s.corrs.push_back({x, UniformBox(rng)});
      s.labels.push_back(-1);
    }
  }
  ShuffleTogether(rng, s.corrs, s.labels);
  return s;
}

RigidScenario GenMultiScene(const MultiSceneParams& params, std::uint64_t seed) {
  params.Validate();
  CounterRng rng(seed);
  RigidScenario s;
  s.seed = seed;
  for (std::size_t m = 0; m < params.models; ++m) {
    s.motions.push_back(RandomMotion(rng));
  }
  for (std::size_t m = 0; m < params.models; ++m) {
    const RotationMatrix r = QuatToMatrix(s.motions[m].rotation);
    const Vec3 t = s.motions[m].translation;
    for (std::size_t i = 0; i < params.points_per_model; ++i) {
      const Vec3 x = UniformBox(rng);
      s.corrs.push_back({x, r * x + t + params.delta * GaussianVec3(rng)});
      s.labels.push_back(static_cast<int>(m));
    }
  }
  const double inliers = static_cast<double>(params.models * params.points_per_model);
  const auto n_out = static_cast<std::size_t>(
      std::llround(params.rho / (1.0 - params.rho) * inliers));
  for (std::size_t i = 0; i < n_out; ++i) {
    const Vec3 x = UniformBox(rng);
    s.corrs.push_back({x, UniformBox(rng)});
    s.labels.push_back(-1);
  }
  ShuffleTogether(rng, s.corrs, s.labels);
  return s;
}

RotationEstimate RansacRotation(std::span<const Correspondence> corrs,
                                int iterations, double inlier_threshold,
                                std::uint64_t seed) {
  const std::size_t n = corrs.size();
  if (n < 2) throw Error(ErrorKind::kDegenerate, "RANSAC needs 2 correspondences");
  std::vector<ComplementBasis> comps;
  comps.reserve(n);
  for (const Correspondence& c : corrs) {
    comps.push_back(ComputeComplementBasis(c.x, c.y));
  }
  auto residual = [&comps](std::size_t i, const Vec4& q) {
    const double u = comps[i].c3.dot(q);
    const double v = comps[i].c4.dot(q);
    return std::sqrt(u * u + v * v);
  };
  auto consensus = [&](const Vec4& q) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (residual(i, q) <= inlier_threshold) out.push_back(i);
    }
    return out;
  };
  auto gram_of = [&comps](std::span<const std::size_t> idx) {
    Mat4 g = Mat4::Zero();
    for (const std::size_t i : idx) {
      g.noalias() += comps[i].c3 * comps[i].c3.transpose() +
                     comps[i].c4 * comps[i].c4.transpose();
    }
    return g;
  };

  CounterRng rng(CounterRng::Derive(seed, 0x72616E736163ULL));
  std::size_t best_count = 0;
  Vec4 best = Vec4::Zero();
  for (int it = 0; it < iterations; ++it) {
    const std::size_t a = rng.UniformIndex(n);
    std::size_t b = rng.UniformIndex(n - 1);
    if (b >= a) ++b;
    // Noisy pairs are almost never exactly compatible, so the hypothesis is
    // the least-squares intersection of the two circles.
    const std::size_t pair[2] = {a, b};
    const HomogeneousSolution h = SolveHomogeneous(gram_of(pair));
    if (h.degenerate) continue;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (residual(i, h.rotation.coeffs()) <= inlier_threshold) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best = h.rotation.coeffs();
    }
  }
  if (best_count == 0) {
    throw Error(ErrorKind::kDegenerate, "RANSAC found no supported hypothesis");
  }
  RotationEstimate est;
  est.peak_rotation = UnitQuaternion(best);
  est.rotation = est.peak_rotation;
  est.votes = static_cast<std::uint32_t>(best_count);
  est.inliers = consensus(best);
  if (est.inliers.size() >= 2) {
    const HomogeneousSolution h = SolveHomogeneous(gram_of(est.inliers));
    if (!h.degenerate) {
      est.rotation = h.rotation;
      est.refined = true;
      est.inliers = consensus(h.rotation.coeffs());
    }
  }
  return est;
}

std::vector<RigidEstimate> SequentialRansacRigid(
    std::span<const Correspondence> corrs, std::size_t models, int iterations,
    double inlier_threshold, std::uint64_t seed) {
  if (corrs.size() < 3) {
    throw Error(ErrorKind::kDegenerate, "RANSAC needs 3 correspondences");
  }
  CounterRng rng(CounterRng::Derive(seed, 0x7365717261ULL));
  std::vector<std::size_t> remaining(corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) remaining[i] = i;

  auto consensus = [&](const RigidTransform& f) {
    std::vector<std::size_t> out;
    for (const std::size_t i : remaining) {
      if (RigidResidual(corrs[i], f.rotation, f.translation) <= inlier_threshold) {
        out.push_back(i);
      }
    }
    return out;
  };

  std::vector<RigidEstimate> out;
  for (std::size_t m = 0; m < models && remaining.size() >= 3; ++m) {
    const std::size_t r = remaining.size();
    std::vector<std::size_t> best_set;
    for (int it = 0; it < iterations; ++it) {
      const std::size_t a = rng.UniformIndex(r);
      std::size_t b = rng.UniformIndex(r - 1);
      if (b >= a) ++b;
      std::size_t c = rng.UniformIndex(r - 2);
      for (const std::size_t taken : {std::min(a, b), std::max(a, b)}) {
        if (c >= taken) ++c;
      }
      const Correspondence sample[3] = {corrs[remaining[a]], corrs[remaining[b]],
                                        corrs[remaining[c]]};
      RigidTransform f;
      try {
        f = FitRigid(sample);
      } catch (const Error&) {
        continue;
      }
      std::vector<std::size_t> set = consensus(f);
      if (set.size() > best_set.size()) best_set = std::move(set);
    }
    if (best_set.size() < 3) break;
    CorrespondenceSet members;
    for (const std::size_t i : best_set) members.push_back(corrs[i]);
    RigidTransform f;
    try {
      f = FitRigid(members);
    } catch (const Error&) {
      break;
    }
    const std::vector<std::size_t> refit_set = consensus(f);
    RigidEstimate est;
    est.rotation = MatrixToQuat(f.rotation);
    est.translation = f.translation;
    est.inliers = refit_set.size() >= best_set.size() ? refit_set : best_set;
    est.diagnostics.votes = static_cast<std::uint32_t>(best_set.size());
    std::vector<std::size_t> next;
    std::set_difference(remaining.begin(), remaining.end(), est.inliers.begin(),
                        est.inliers.end(), std::back_inserter(next));
    remaining = std::move(next);
    out.push_back(std::move(est));
  }
  return out;
}

AxisHistogram AxisVoteDiagnostic(std::span<const Correspondence> corrs,
                                 const Vec3& true_axis,
                                 const Vec3& structured_axis, int bins_z,
                                 int bins_phi, int samples) {
  if (bins_z < 1 || bins_phi < 1 || samples < 8) {
    throw Error(ErrorKind::kConfig, "invalid axis histogram resolution");
  }
  auto canonical = [](Vec3 r) {
    if (r.z() < 0.0) r = -r;
    return r;
  };
  auto bin_of = [&](const Vec3& axis) {
    const Vec3 r = canonical(axis.normalized());
    const int iz = std::clamp(static_cast<int>(std::floor(r.z() * bins_z)), 0,
                              bins_z - 1);
    const double phi = std::atan2(r.y(), r.x()) + std::numbers::pi;
    const int ip = std::clamp(
        static_cast<int>(std::floor(phi / (2.0 * std::numbers::pi) * bins_phi)),
        0, bins_phi - 1);
    return iz * bins_phi + ip;
  };
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(bins_z) * bins_phi, 0);
  std::vector<int> seen;
  for (const Correspondence& c : corrs) {
    // Admissible axes r satisfy r.x = r.y: the great circle orthogonal to
    // x - y.
    const Vec3 d = c.x - c.y;
    if (d.norm() < 1e-12) continue;
    const Vec3 w = d.normalized();
    const Vec3 u = w.unitOrthogonal();
    const Vec3 v = w.cross(u);
    seen.clear();
    for (int k = 0; k < samples; ++k) {
      const double phi = std::numbers::pi * k / samples;
      seen.push_back(bin_of(std::cos(phi) * u + std::sin(phi) * v));
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const int b : seen) ++counts[b];
  }
  AxisHistogram h;
  const auto peak = std::max_element(counts.begin(), counts.end());
  const int pb = static_cast<int>(peak - counts.begin());
  h.peak_votes = *peak;
  const double z = (pb / bins_phi + 0.5) / bins_z;
  const double phi =
      (pb % bins_phi + 0.5) / bins_phi * 2.0 * std::numbers::pi - std::numbers::pi;
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  h.peak_axis = Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
  h.true_axis_votes = counts[bin_of(true_axis)];
  h.structured_axis_votes = counts[bin_of(structured_axis)];
  auto axis_angle = [](const Vec3& a, const Vec3& b) {
    const double deg = AngleDeg(a, b);
    return std::min(deg, 180.0 - deg);
  };
  h.peak_to_true_deg = axis_angle(h.peak_axis, true_axis);
  h.peak_to_structured_deg = axis_angle(h.peak_axis, structured_axis);
  return h;
}

std::string ScenarioSpec::Describe() const {
  char buf[160];
  switch (kind) {
    case SceneKind::kRotation:
      std::snprintf(buf, sizeof(buf), "rotation:n=%zu,delta=%g,rho=%g,eta=%g",
                    rotation.n, rotation.delta, rotation.rho, rotation.eta);
      break;
    case SceneKind::kRigid:
      std::snprintf(buf, sizeof(buf), "rigid:n=%zu,delta=%g,rho=%g", rigid.n,
                    rigid.delta, rigid.rho);
      break;
    case SceneKind::kMulti:
      std::snprintf(buf, sizeof(buf), "multi:models=%zu,points=%zu,delta=%g,rho=%g",
                    multi.models, multi.points_per_model, multi.delta, multi.rho);
      break;
  }
  return buf;
}

std::string MethodName(Method m) {
  switch (m) {
    case Method::kVoting: return "voting";
    case Method::kRansac: return "ransac";
    case Method::kSvd: return "svd";
    case Method::kHorn: return "horn";
    case Method::kCircleStack: return "circle-stack";
    case Method::kGibbs: return "gibbs";
  }
  return "unknown";
}

Method ParseMethod(const std::string& name) {
  for (const Method m : {Method::kVoting, Method::kRansac, Method::kSvd,
                         Method::kHorn, Method::kCircleStack, Method::kGibbs}) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorKind::kConfig, "unknown method '" + name + "'");
}

void ScoreMotions(const std::vector<Motion>& truth,
                  const std::vector<Motion>& estimates,
                  const Thresholds& thresholds, TrialReport& report) {
  struct Cand {
    double cost, e_r, e_t;
    std::size_t g, e;
  };
  std::vector<Cand> cands;
  for (std::size_t g = 0; g < truth.size(); ++g) {
    for (std::size_t e = 0; e < estimates.size(); ++e) {
      const double e_r = RotationErrorDeg(truth[g].rotation, estimates[e].rotation);
      const double e_t = (truth[g].translation - estimates[e].translation).norm();
      cands.push_back({e_r / thresholds.multi_rotation_deg +
                           e_t / thresholds.multi_translation,
                       e_r, e_t, g, e});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.cost != b.cost ? a.cost < b.cost
                            : (a.g != b.g ? a.g < b.g : a.e < b.e);
  });
  std::vector<bool> g_used(truth.size(), false), e_used(estimates.size(), false);
  double sum_r = 0.0, sum_t = 0.0;
  std::size_t matched = 0;
  for (const Cand& c : cands) {
    if (g_used[c.g] || e_used[c.e]) continue;
    g_used[c.g] = e_used[c.e] = true;
    sum_r += c.e_r;
    sum_t += c.e_t;
    ++matched;
  }
  // An unmatched motion counts as a 180 degree miss with the translation
  // error of a zero estimate.
  for (std::size_t g = 0; g < truth.size(); ++g) {
    if (g_used[g]) continue;
    sum_r += 180.0;
    sum_t += truth[g].translation.norm();
  }
  const auto m = static_cast<double>(truth.size());
  report.e_r_deg = sum_r / m;
  report.e_t = sum_t / m;
  report.success = matched == truth.size() &&
                   report.e_r_deg < thresholds.multi_rotation_deg &&
                   report.e_t < thresholds.multi_translation;
}

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool Supports(SceneKind kind, Method m) {
  switch (kind) {
    case SceneKind::kRotation: return true;
    case SceneKind::kRigid:
      return m == Method::kVoting || m == Method::kRansac || m == Method::kSvd;
    case SceneKind::kMulti:
      return m == Method::kVoting || m == Method::kRansac;
  }
  return false;
}

void RunRotationMethod(const RotationScenario& scene, Method method,
                       std::uint64_t trial_seed, const BenchConfig& cfg,
                       TrialReport& rep) {
  const CorrespondenceSet& c = scene.corrs;
  UnitQuaternion q;
  const auto t0 = Clock::now();
  switch (method) {
    case Method::kVoting: {
      const RotationEstimate est = SolveRotation(c, cfg.voting);
      rep.runtime_s = Seconds(t0);
      q = est.rotation;
      rep.e_r_raw_deg = RotationErrorDeg(scene.rotation, est.peak_rotation);
      break;
    }
    case Method::kRansac:
      q = RansacRotation(c, cfg.ransac_iterations, cfg.ransac_rotation_threshold,
                         CounterRng::Derive(trial_seed, 1))
              .rotation;
      break;
    case Method::kSvd: q = MatrixToQuat(SvdUmeyama(c)); break;
    case Method::kHorn: q = HornEigen(c).rotation; break;
    case Method::kCircleStack: q = SolveCircleStack(c).rotation; break;
    case Method::kGibbs: q = MatrixToQuat(GibbsLinear(c)); break;
  }
  if (method != Method::kVoting) rep.runtime_s = Seconds(t0);
  rep.e_r_deg = RotationErrorDeg(scene.rotation, q);
  rep.success = rep.e_r_deg <= cfg.thresholds.rotation_deg;
}

void RunRigidMethod(const RigidScenario& scene, bool multi, Method method,
                    std::uint64_t trial_seed, const BenchConfig& cfg,
                    TrialReport& rep) {
  const CorrespondenceSet& c = scene.corrs;
  const std::size_t models = scene.motions.size();
  std::vector<Motion> found;
  auto add = [&found](const RigidEstimate& e) {
    found.push_back({e.rotation, e.translation});
  };
  const std::uint64_t solver_seed = CounterRng::Derive(trial_seed, 2);
  const auto t0 = Clock::now();
  switch (method) {
    case Method::kVoting:
      if (multi) {
        for (const auto& e : SolveMultiRigid(c, cfg.rigid, models, solver_seed)) add(e);
      } else {
        add(SolveRigid(c, cfg.rigid, solver_seed));
      }
      break;
    case Method::kRansac:
      for (const auto& e : SequentialRansacRigid(c, models, cfg.ransac_iterations,
                                                 cfg.ransac_rigid_threshold,
                                                 solver_seed)) {
        add(e);
      }
      break;
    case Method::kSvd: {
      const RigidTransform f = FitRigid(c);
      found.push_back({MatrixToQuat(f.rotation), f.translation});
      break;
    }
    default:
      throw Error(ErrorKind::kContract, "method not available for rigid scenes");
  }
  rep.runtime_s = Seconds(t0);
  if (multi) {
    ScoreMotions(scene.motions, found, cfg.thresholds, rep);
    return;
  }
  if (found.empty()) {
    rep.e_r_deg = 180.0;
    rep.e_t = scene.motions[0].translation.norm();
    rep.success = false;
    return;
  }
  rep.e_r_deg = RotationErrorDeg(scene.motions[0].rotation, found[0].rotation);
  rep.e_t = (scene.motions[0].translation - found[0].translation).norm();
  rep.success = rep.e_r_deg < cfg.thresholds.rotation_deg &&
                rep.e_t < cfg.thresholds.rigid_translation;
}

std::vector<TrialReport> RunTrial(const ScenarioSpec& spec,
                                  const std::vector<Method>& methods, int trial,
                                  std::uint64_t trial_seed,
                                  const BenchConfig& cfg) {
  TrialReport base;
  base.scenario = spec.Describe();
  base.kind = spec.kind;
  base.seed = trial_seed;
  base.trial = trial;
  base.e_r_raw_deg = kNaN;
  base.e_t = kNaN;

  std::optional<RotationScenario> rot;
  std::optional<RigidScenario> rigid;
  switch (spec.kind) {
    case SceneKind::kRotation:
      rot = GenRotationScene(spec.rotation, trial_seed);
      base.n = spec.rotation.n;
      base.delta = spec.rotation.delta;
      base.rho = spec.rotation.rho;
      base.eta = spec.rotation.eta;
      break;
    case SceneKind::kRigid:
      rigid = GenRigidScene(spec.rigid, trial_seed);
      base.n = spec.rigid.n;
      base.delta = spec.rigid.delta;
      base.rho = spec.rigid.rho;
      break;
    case SceneKind::kMulti:
      rigid = GenMultiScene(spec.multi, trial_seed);
      base.n = rigid->corrs.size();
      base.delta = spec.multi.delta;
      base.rho = spec.multi.rho;
      base.models = spec.multi.models;
      break;
  }

  std::vector<TrialReport> out;
  for (const Method m : methods) {
    if (!Supports(spec.kind, m)) continue;
    TrialReport rep = base;
    rep.method = MethodName(m);
    try {
      if (rot) {
        RunRotationMethod(*rot, m, trial_seed, cfg, rep);
      } else {
        RunRigidMethod(*rigid, spec.kind == SceneKind::kMulti, m, trial_seed, cfg,
                       rep);
      }
    } catch (const Error& e) {
      rep.e_r_deg = kNaN;
      rep.e_t = kNaN;
      rep.success = false;
      rep.error = std::string(ToString(e.kind())) + ": " + e.what();
    }
    out.push_back(std::move(rep));
  }
  return out;
}

double Median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }),
          v.end());
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  std::size_t n = 0;
  for (const double x : v) {
    if (!std::isfinite(x)) continue;
    s += x;
    ++n;
  }
  return n ? s / static_cast<double>(n) : kNaN;
}

}  // namespace

std::vector<Aggregate> AggregateTrials(const std::vector<TrialReport>& trials) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialReport*>> groups;
  for (const TrialReport& t : trials) {
    const auto key = std::make_pair(t.scenario, t.method);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&t);
  }
  std::vector<Aggregate> out;
  for (const auto& key : order) {
    const auto& members = groups[key];
    Aggregate a;
    a.scenario = key.first;
    a.method = key.second;
    a.trials = members.size();
    std::vector<double> er, et, rt;
    for (const TrialReport* t : members) {
      a.successes += t->success ? 1 : 0;
      a.failures += t->error.empty() ? 0 : 1;
      er.push_back(t->e_r_deg);
      et.push_back(t->e_t);
      rt.push_back(t->runtime_s);
    }
    a.success_rate = static_cast<double>(a.successes) / static_cast<double>(a.trials);
    a.median_e_r_deg = Median(er);
    a.mean_e_r_deg = Mean(er);
    a.median_e_t = Median(et);
    a.mean_e_t = Mean(et);
    a.median_runtime_s = Median(rt);
    a.mean_runtime_s = Mean(rt);
    for (int k = 1; k <= 20; ++k) {
      const double thr = 0.5 * k;
      std::size_t hit = 0;
      for (const double e : er) hit += (e <= thr) ? 1 : 0;
      a.recall_thresholds_deg.push_back(thr);
      a.recall.push_back(static_cast<double>(hit) / static_cast<double>(a.trials));
    }
    out.push_back(std::move(a));
  }
  return out;
}

MatrixReport RunMatrix(const std::vector<ScenarioSpec>& grid,
                       const std::vector<Method>& methods, int repeats,
                       const BenchConfig& cfg) {
  MatrixReport report;
  if (grid.empty() || methods.empty() || repeats <= 0) return report;
  for (const ScenarioSpec& s : grid) {
    switch (s.kind) {
      case SceneKind::kRotation: s.rotation.Validate(); break;
      case SceneKind::kRigid: s.rigid.Validate(); break;
      case SceneKind::kMulti: s.multi.Validate(); break;
    }
  }
  struct Job {
    std::size_t scenario;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    for (int t = 0; t < repeats; ++t) jobs.push_back({s, t});
  }
  std::vector<std::vector<TrialReport>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const std::uint64_t seed = CounterRng::Derive(
          CounterRng::Derive(cfg.seed, job.scenario),
          static_cast<std::uint64_t>(job.trial));
      slots[j] = RunTrial(grid[job.scenario], methods, job.trial, seed, cfg);
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.trial_threads,
                                                static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (auto& slot : slots) {
    for (auto& r : slot) report.trials.push_back(std::move(r));
  }
  report.aggregates = AggregateTrials(report.trials);
  return report;
}

void WriteTrialsCsv(std::ostream& out, const std::vector<TrialReport>& trials) {
  out << "# rotvote bench trials, schema v" << kReportSchemaVersion << "\n";
  out << "scenario,kind,n,delta,rho,eta,models,seed,trial,method,e_r_deg,"
         "e_r_raw_deg,e_t,runtime_s,success,error\n";
  static const char* kKinds[] = {"rotation", "rigid", "multi"};
  char buf[512];
  for (const TrialReport& t : trials) {
    std::snprintf(buf, sizeof(buf),
                  "\"%s\",%s,%zu,%.17g,%.17g,%.17g,%zu,%llu,%d,%s,%.17g,%.17g,"
                  "%.17g,%.6f,%d,",
                  t.scenario.c_str(), kKinds[static_cast<int>(t.kind)], t.n,
                  t.delta, t.rho, t.eta, t.models,
                  static_cast<unsigned long long>(t.seed), t.trial,
                  t.method.c_str(), t.e_r_deg, t.e_r_raw_deg, t.e_t, t.runtime_s,
                  t.success ? 1 : 0);
    std::string err = t.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out << buf << '"' << err << "\"\n";
  }
}

void WriteAggregatesJson(std::ostream& out,
                         const std::vector<Aggregate>& aggregates) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["aggregates"] = nlohmann::ordered_json::array();
  for (const Aggregate& a : aggregates) {
    nlohmann::ordered_json j;
    j["scenario"] = a.scenario;
    j["method"] = a.method;
    j["trials"] = a.trials;
    j["successes"] = a.successes;
    j["failures"] = a.failures;
    j["success_rate"] = a.success_rate;
    j["median_e_r_deg"] = a.median_e_r_deg;
    j["mean_e_r_deg"] = a.mean_e_r_deg;
    j["median_e_t"] = a.median_e_t;
    j["mean_e_t"] = a.mean_e_t;
    j["median_runtime_s"] = a.median_runtime_s;
    j["mean_runtime_s"] = a.mean_runtime_s;
    j["recall_thresholds_deg"] = a.recall_thresholds_deg;
    j["recall"] = a.recall;
    doc["aggregates"].push_back(std::move(j));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace rotvote::bench
