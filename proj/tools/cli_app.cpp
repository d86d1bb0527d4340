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


#include "cli_app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rotvote/bench.hpp"
#include "rotvote/error.hpp"
#include "rotvote/io.hpp"
#include "rotvote/rigid.hpp"
#include "rotvote/voting.hpp"

namespace rotvote::cli {

using json = nlohmann::ordered_json;

json RotationJson(const UnitQuaternion& q) {
  const RotationMatrix r = QuatToMatrix(q);
  json j;
  j["quaternion"] = {q[0], q[1], q[2], q[3]};
  j["matrix"] = json::array();
  for (int i = 0; i < 3; ++i) j["matrix"].push_back({r(i, 0), r(i, 1), r(i, 2)});
  const Vec3 v = q.vec();
  const double s = v.norm();
  j["angle_deg"] = 2.0 * std::atan2(s, std::abs(q.w())) * kRadToDeg;
  // Axis oriented so that the angle lies in [0, 180]; [1, 0, 0] for identity.
  const Vec3 axis = s > 0.0 ? Vec3((q.w() < 0.0 ? -v : v) / s) : Vec3::UnitX();
  j["axis"] = {axis.x(), axis.y(), axis.z()};
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::string input;
  std::string output = "json";
  std::string out_path;
  bool timing = false;
  bool inliers = false;
};

struct VotingFlags {
  VotingConfig cfg;
  std::string dedup = "consecutive";
  double budget_mb = 512.0;

  VotingConfig Resolve() const {
    VotingConfig c = cfg;
    c.dedup = dedup == "per-correspondence" ? DedupMode::kPerCorrespondence
                                            : DedupMode::kConsecutive;
    if (!(budget_mb >= 0.0)) {
      throw Error(ErrorKind::kConfig, "memory budget must be >= 0");
    }
    c.memory_budget_bytes = static_cast<std::uint64_t>(budget_mb * 1024.0 * 1024.0);
    c.Validate();
    return c;
  }
};

struct RigidFlags {
  RigidConfig cfg;
  std::string grid = "-5,5,0.025";
  std::uint64_t seed = 0;

  RigidConfig Resolve(const VotingConfig& voting) const {
    RigidConfig c = cfg;
    c.voting = voting;
    double v[3];
    int n = 0;
    std::stringstream ss(grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (n == 3) break;
      try {
        std::size_t used = 0;
        v[n] = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(ErrorKind::kConfig, "--translation-grid expects lo,hi,step");
      }
      ++n;
    }
    if (n != 3 || std::getline(ss, item, ',')) {
      throw Error(ErrorKind::kConfig, "--translation-grid expects lo,hi,step");
    }
    c.translation = {v[0], v[1], v[2]};
    c.Validate();
    return c;
  }
};

void AddCommon(CLI::App* app, Common& c, bool with_input) {
  if (with_input) {
    app->add_option("input", c.input, "Correspondence file (x1 x2 x3 y1 y2 y3 per row)")
        ->required();
  }
  app->add_option("--output", c.output, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app->add_option("--out", c.out_path, "Write output to PATH instead of stdout");
  app->add_flag("--timing", c.timing, "Report wall-clock runtime (not deterministic)");
}

void AddVoting(CLI::App* app, VotingFlags& f) {
  VotingConfig& c = f.cfg;
  app->add_option("--epsilon", c.epsilon, "Accumulator bin width")->capture_default_str();
  app->add_option("--samples", c.samples, "Samples per quaternion circle")
      ->capture_default_str();
  app->add_flag("--refine,!--no-refine", c.refine, "Least-squares refinement of peaks")
      ->capture_default_str();
  app->add_option("--tau-ref", c.tau_ref, "Circle residual bound for refinement inliers")
      ->capture_default_str();
  app->add_option("--max-peaks", c.peaks.max_peaks, "Peaks to extract")
      ->capture_default_str();
  app->add_option("--min-votes-fraction", c.peaks.min_votes_fraction,
                  "Drop peaks below this fraction of the top peak")
      ->capture_default_str();
  app->add_option("--suppression-radius", c.peaks.suppression_radius_bins,
                  "Non-maximum suppression radius in bins")
      ->capture_default_str();
  app->add_option("--duplicate-angle", c.duplicate_angle_deg,
                  "Merge refined rotations closer than this (degrees)")
      ->capture_default_str();
  app->add_option("--dedup", f.dedup, "Repeated-bin rule per correspondence")
      ->check(CLI::IsMember({"consecutive", "per-correspondence"}))
      ->capture_default_str();
  app->add_option("--threads", c.threads, "Voting worker threads")->capture_default_str();
  app->add_option("--memory-budget-mb", f.budget_mb,
                  "Dense accumulator budget before sparse fallback")
      ->capture_default_str();
}

void AddRigid(CLI::App* app, RigidFlags& f, bool with_seed = true) {
  RigidConfig& c = f.cfg;
  app->add_option("--mu-t", c.mu_t, "Pair length-check threshold")->capture_default_str();
  app->add_option("--min-len", c.min_len, "Minimum pair difference length")
      ->capture_default_str();
  app->add_option("--k-max", c.k_max, "Pair budget")->capture_default_str();
  app->add_option("--translation-grid", f.grid, "Translation grid lo,hi,step")
      ->capture_default_str();
  app->add_option("--tau-assign", c.tau_assign, "Residual bound for motion membership")
      ->capture_default_str();
  if (with_seed) {
    app->add_option("--seed", f.seed, "Seed for pair subsampling")->capture_default_str();
  }
}

const char* DedupName(DedupMode m) {
  return m == DedupMode::kPerCorrespondence ? "per-correspondence" : "consecutive";
}

// Thread count is deliberately not echoed: results do not depend on it.
json VotingJson(const VotingConfig& c) {
  json j;
  j["epsilon"] = c.epsilon;
  j["samples"] = c.samples;
  j["refine"] = c.refine;
  j["tau_ref"] = c.tau_ref;
  j["max_peaks"] = c.peaks.max_peaks;
  j["min_votes_fraction"] = c.peaks.min_votes_fraction;
  j["suppression_radius_bins"] = c.peaks.suppression_radius_bins;
  j["duplicate_angle_deg"] = c.duplicate_angle_deg;
  j["dedup"] = DedupName(c.dedup);
  j["memory_budget_bytes"] = c.memory_budget_bytes;
  return j;
}

json RigidJson(const RigidConfig& c, std::uint64_t seed) {
  json j;
  j["mu_t"] = c.mu_t;
  j["min_len"] = c.min_len;
  j["k_max"] = c.k_max;
  j["translation_grid"] = {c.translation.lo, c.translation.hi, c.translation.step};
  j["tau_assign"] = c.tau_assign;
  j["seed"] = seed;
  j["voting"] = VotingJson(c.voting);
  return j;
}

void Emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f || !(f << text)) {
    throw Error(ErrorKind::kIo, "cannot write '" + c.out_path + "'");
  }
}

CorrespondenceSet LoadRotationInput(const std::string& path, std::ostream& err) {
  CorrespondenceSet corrs = ReadCorrespondenceFile(path).corrs;
  const std::size_t off = NormalizeCorrespondences(corrs);
  if (off > 0) {
    err << "warning: " << off
        << " vector(s) deviated from unit length by more than 1e-6 and were "
           "normalized\n";
  }
  return corrs;
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Row {
  UnitQuaternion q;
  std::optional<Vec3> t;
  std::uint64_t votes;
  std::size_t inliers;
};

std::string RowsCsv(const std::string& method, const std::vector<Row>& rows) {
  std::string s = "method,model,q0,q1,q2,q3,tx,ty,tz,votes,inlier_count\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    s += method + "," + std::to_string(k);
    for (int i = 0; i < 4; ++i) s += "," + Fmt(r.q[i]);
    for (int i = 0; i < 3; ++i) s += "," + (r.t ? Fmt((*r.t)[i]) : std::string());
    s += "," + std::to_string(r.votes) + "," + std::to_string(r.inliers) + "\n";
  }
  return s;
}

json IndexArray(const std::vector<std::size_t>& v) {
  json a = json::array();
  for (const std::size_t i : v) a.push_back(i);
  return a;
}

json RotationModelJson(const RotationEstimate& e, bool with_inliers) {
  json j;
  j["rotation"] = RotationJson(e.rotation);
  j["votes"] = e.votes;
  j["inlier_count"] = e.inliers.size();
  if (with_inliers) j["inlier_indices"] = IndexArray(e.inliers);
  j["refined"] = e.refined;
  j["diagnostics"] = {
      {"bin_index", e.bin_index},
      {"bin_center", {e.bin_center.x(), e.bin_center.y(), e.bin_center.z()}},
      {"peak_value", e.votes},
      {"peak_quaternion",
       {e.peak_rotation[0], e.peak_rotation[1], e.peak_rotation[2],
        e.peak_rotation[3]}}};
  return j;
}

json RigidModelJson(const RigidEstimate& e, bool with_inliers) {
  json j;
  j["rotation"] = RotationJson(e.rotation);
  j["translation"] = {e.translation.x(), e.translation.y(), e.translation.z()};
  j["votes"] = e.diagnostics.votes;
  j["inlier_count"] = e.inliers.size();
  if (with_inliers) j["inlier_indices"] = IndexArray(e.inliers);
  j["refined"] = e.diagnostics.refined;
  j["diagnostics"] = {{"pairs_generated", e.diagnostics.pairs_generated},
                      {"pairs_surviving_check", e.diagnostics.pairs_surviving_check},
                      {"translation_votes", e.diagnostics.translation_votes}};
  return j;
}

std::string Finish(json doc, const Common& c, Clock::time_point t0) {
  if (c.timing) {
    doc["runtime_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
  }
  return doc.dump(2) + "\n";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return kExitConfig;
    case ErrorKind::kParse:
    case ErrorKind::kIo: return kExitInput;
    default: return kExitSolver;
  }
}

void ErrorJson(std::ostream& out, const std::string& kind, const std::string& msg,
               int code) {
  json j;
  j["error"] = {{"kind", kind}, {"message", msg}, {"exit_code", code}};
  out << j.dump(2) << "\n";
}

struct BenchFlags {
  std::size_t n = 0;
  double delta = 0.01;
  double rho = -1.0;
  double eta = 0.0;
  std::size_t models = 3;
  std::size_t points = 200;
  int repeats = 20;
  std::uint64_t seed = 0;
  std::string methods = "voting";
  int ransac_iterations = 5000;
  double ransac_rotation_threshold = 0.02;
  double ransac_rigid_threshold = 0.05;
  int trial_threads = 1;
  bench::Thresholds thresholds;
};

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust rotation and rigid-pose estimation by quaternion-circle voting.",
               "rotvote"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Common common;
  VotingFlags voting;
  RigidFlags rigid;
  std::optional<std::size_t> models;

  auto* solve_rot = app.add_subcommand("solve-rotation", "Single rotation by voting");
  AddCommon(solve_rot, common, true);
  AddVoting(solve_rot, voting);
  solve_rot->add_flag("--inliers", common.inliers, "Include inlier indices");

  auto* multi_rot = app.add_subcommand("multi-rotation", "Several rotations by voting");
  AddCommon(multi_rot, common, true);
  AddVoting(multi_rot, voting);
  multi_rot->add_flag("--inliers", common.inliers, "Include inlier indices");
  multi_rot->add_option("--models", models,
                        "Expected number of rotations (else --max-peaks with cutoff)");

  auto* solve_pose = app.add_subcommand("solve-pose", "Single rigid motion");
  AddCommon(solve_pose, common, true);
  AddVoting(solve_pose, voting);
  AddRigid(solve_pose, rigid);
  solve_pose->add_flag("--inliers", common.inliers, "Include inlier indices");

  auto* multi_pose = app.add_subcommand("multi-pose", "Several rigid motions");
  AddCommon(multi_pose, common, true);
  AddVoting(multi_pose, voting);
  AddRigid(multi_pose, rigid);
  multi_pose->add_flag("--inliers", common.inliers, "Include inlier indices");
  multi_pose->add_option("--models", models, "Expected number of motions");

  auto* project = app.add_subcommand(
      "project-debug", "Vote and dump the rotation accumulator (binary RVAC file)");
  project->add_option("input", common.input, "Correspondence file")->required();
  project->add_option("--out", common.out_path, "Dump file")->required();
  AddVoting(project, voting);

  BenchFlags bf;
  auto* bench_cmd = app.add_subcommand("bench", "Seeded synthetic benchmarks");
  bench_cmd->require_subcommand(1);
  bench_cmd->fallthrough();
  std::string bench_output = "csv";
  bench_cmd->add_option("--output", bench_output,
                        "csv: one row per trial; json: aggregates")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  bench_cmd->add_option("--out", common.out_path, "Write output to PATH");
  std::vector<CLI::App*> bench_kinds;
  for (const char* kind : {"rotation", "rigid", "multi"}) {
    auto* k = bench_cmd->add_subcommand(kind, std::string(kind) + " scenes");
    k->add_option("--n", bf.n, "Correspondences (rotation: 10000, rigid: 2000)");
    k->add_option("--delta", bf.delta, "Noise standard deviation")->capture_default_str();
    k->add_option("--rho", bf.rho, "Outlier ratio (rotation: 0.95, rigid: 0.9, multi: 0)");
    k->add_option("--eta", bf.eta, "Same-axis outlier ratio (rotation)")
        ->capture_default_str();
    k->add_option("--models", bf.models, "Motions (multi)")->capture_default_str();
    k->add_option("--points", bf.points, "Points per motion (multi)")
        ->capture_default_str();
    k->add_option("--repeats", bf.repeats, "Trials")->capture_default_str();
    k->add_option("--seed", bf.seed, "Master seed")->capture_default_str();
    k->add_option("--methods", bf.methods,
                  "Comma list: voting,ransac,svd,horn,circle-stack,gibbs")
        ->capture_default_str();
    k->add_option("--ransac-iterations", bf.ransac_iterations, "RANSAC iterations")
        ->capture_default_str();
    k->add_option("--ransac-rotation-threshold", bf.ransac_rotation_threshold,
                  "RANSAC circle-residual threshold")
        ->capture_default_str();
    k->add_option("--ransac-rigid-threshold", bf.ransac_rigid_threshold,
                  "RANSAC point residual threshold")
        ->capture_default_str();
    k->add_option("--trial-threads", bf.trial_threads, "Trials run concurrently")
        ->capture_default_str();
    k->add_option("--success-deg", bf.thresholds.rotation_deg,
                  "Single-motion rotation success threshold")
        ->capture_default_str();
    k->add_option("--success-t", bf.thresholds.rigid_translation,
                  "Single-motion translation success threshold")
        ->capture_default_str();
    k->add_option("--multi-success-deg", bf.thresholds.multi_rotation_deg,
                  "Multi-motion mean rotation success threshold")
        ->capture_default_str();
    k->add_option("--multi-success-t", bf.thresholds.multi_translation,
                  "Multi-motion mean translation success threshold")
        ->capture_default_str();
    AddVoting(k, voting);
    AddRigid(k, rigid, false);
    bench_kinds.push_back(k);
  }

  auto* gen = app.add_subcommand("generate", "Write a seeded synthetic scene file");
  gen->require_subcommand(1);
  gen->fallthrough();
  gen->add_option("--out", common.out_path, "Write output to PATH");
  std::vector<CLI::App*> gen_kinds;
  for (const char* kind : {"rotation", "rigid", "multi"}) {
    auto* k = gen->add_subcommand(kind, std::string(kind) + " scene");
    k->add_option("--n", bf.n, "Correspondences");
    k->add_option("--delta", bf.delta, "Noise standard deviation")->capture_default_str();
    k->add_option("--rho", bf.rho, "Outlier ratio");
    k->add_option("--eta", bf.eta, "Same-axis outlier ratio")->capture_default_str();
    k->add_option("--models", bf.models, "Motions (multi)")->capture_default_str();
    k->add_option("--points", bf.points, "Points per motion")->capture_default_str();
    k->add_option("--seed", bf.seed, "Seed")->capture_default_str();
    gen_kinds.push_back(k);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    ErrorJson(out, "usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  const auto t0 = Clock::now();
  try {
    if (solve_rot->parsed()) {
      const VotingConfig cfg = voting.Resolve();
      const CorrespondenceSet corrs = LoadRotationInput(common.input, err);
      const RotationEstimate est = SolveRotation(corrs, cfg);
      if (common.output == "csv") {
        Emit(common,
             RowsCsv("rotation-voting",
                     {{est.rotation, std::nullopt, est.votes, est.inliers.size()}}),
             out);
        return kExitOk;
      }
      json doc;
      doc["method"] = "rotation-voting";
      doc["correspondences"] = corrs.size();
      const json model = RotationModelJson(est, common.inliers);
      for (const auto& [k, v] : model.items()) doc[k] = v;
      doc["config"] = VotingJson(cfg);
      Emit(common, Finish(doc, common, t0), out);
    } else if (multi_rot->parsed()) {
      const VotingConfig cfg = voting.Resolve();
      const CorrespondenceSet corrs = LoadRotationInput(common.input, err);
      const std::vector<RotationEstimate> ests = SolveMultiRotation(corrs, cfg, models);
      if (common.output == "csv") {
        std::vector<Row> rows;
        for (const auto& e : ests) rows.push_back({e.rotation, std::nullopt, e.votes, e.inliers.size()});
        Emit(common, RowsCsv("multi-rotation-voting", rows), out);
        return kExitOk;
      }
      json doc;
      doc["method"] = "multi-rotation-voting";
      doc["correspondences"] = corrs.size();
      doc["models"] = json::array();
      for (const auto& e : ests) doc["models"].push_back(RotationModelJson(e, common.inliers));
      doc["config"] = VotingJson(cfg);
      if (models) doc["config"]["expected_models"] = *models;
      Emit(common, Finish(doc, common, t0), out);
    } else if (solve_pose->parsed() || multi_pose->parsed()) {
      const bool multi = multi_pose->parsed();
      const RigidConfig cfg = rigid.Resolve(voting.Resolve());
      const CorrespondenceSet corrs = ReadCorrespondenceFile(common.input).corrs;
      std::vector<RigidEstimate> ests;
      if (multi) {
        ests = SolveMultiRigid(corrs, cfg, models, rigid.seed);
      } else {
        ests.push_back(SolveRigid(corrs, cfg, rigid.seed));
      }
      const std::string method = multi ? "multi-pose-voting" : "pose-voting";
      if (common.output == "csv") {
        std::vector<Row> rows;
        for (const auto& e : ests) {
          rows.push_back({e.rotation, e.translation, e.diagnostics.votes, e.inliers.size()});
        }
        Emit(common, RowsCsv(method, rows), out);
        return kExitOk;
      }
      json doc;
      doc["method"] = method;
      doc["correspondences"] = corrs.size();
      if (multi) {
        doc["models"] = json::array();
        for (const auto& e : ests) doc["models"].push_back(RigidModelJson(e, common.inliers));
      } else {
        const json model = RigidModelJson(ests[0], common.inliers);
        for (const auto& [k, v] : model.items()) doc[k] = v;
      }
      doc["config"] = RigidJson(cfg, rigid.seed);
      if (multi && models) doc["config"]["expected_models"] = *models;
      Emit(common, Finish(doc, common, t0), out);
    } else if (project->parsed()) {
      const VotingConfig cfg = voting.Resolve();
      const CorrespondenceSet corrs = LoadRotationInput(common.input, err);
      const VoteResult vr = Vote(corrs, cfg);
      {
        std::ofstream f(common.out_path, std::ios::binary);
        if (!f) throw Error(ErrorKind::kIo, "cannot write '" + common.out_path + "'");
        vr.accumulator.WriteDump(f);
      }
      const auto [bin, top] = vr.accumulator.Max();
      json doc;
      doc["dump"] = common.out_path;
      doc["bins_per_axis"] = vr.accumulator.bins();
      doc["epsilon"] = vr.accumulator.step();
      doc["total_votes"] = vr.accumulator.Total();
      doc["increments"] = vr.diagnostics.increments;
      doc["sparse_fallback"] = vr.diagnostics.sparse_fallback;
      doc["max_votes"] = top;
      doc["max_bin"] = bin;
      if (top > 0) {
        doc["max_rotation"] = RotationJson(Unproject(vr.accumulator.BinCenter(bin)));
      }
      doc["config"] = VotingJson(cfg);
      out << doc.dump(2) << "\n";
    } else if (bench_cmd->parsed()) {
      bench::ScenarioSpec spec;
      for (std::size_t i = 0; i < bench_kinds.size(); ++i) {
        if (bench_kinds[i]->parsed()) spec.kind = static_cast<bench::SceneKind>(i);
      }
      spec.rotation = {bf.n ? bf.n : 10000, bf.delta, bf.rho >= 0 ? bf.rho : 0.95,
                       bf.eta};
      spec.rigid = {bf.n ? bf.n : 2000, bf.delta, bf.rho >= 0 ? bf.rho : 0.9};
      spec.multi = {bf.models, bf.points, bf.delta, bf.rho >= 0 ? bf.rho : 0.0};
      bench::BenchConfig cfg;
      cfg.voting = voting.Resolve();
      cfg.rigid = rigid.Resolve(cfg.voting);
      cfg.seed = bf.seed;
      cfg.ransac_iterations = bf.ransac_iterations;
      cfg.ransac_rotation_threshold = bf.ransac_rotation_threshold;
      cfg.ransac_rigid_threshold = bf.ransac_rigid_threshold;
      cfg.trial_threads = bf.trial_threads;
      cfg.thresholds = bf.thresholds;
      if (bf.repeats < 0) throw Error(ErrorKind::kConfig, "--repeats must be >= 0");
      if (bf.trial_threads < 1) throw Error(ErrorKind::kConfig, "--trial-threads must be >= 1");
      std::vector<bench::Method> methods;
      std::stringstream ss(bf.methods);
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (!name.empty()) methods.push_back(bench::ParseMethod(name));
      }
      const bench::MatrixReport rep = bench::RunMatrix({spec}, methods, bf.repeats, cfg);
      std::ostringstream os;
      if (bench_output == "json") {
        bench::WriteAggregatesJson(os, rep.aggregates);
      } else {
        bench::WriteTrialsCsv(os, rep.trials);
      }
      Emit(common, os.str(), out);
    } else if (gen->parsed()) {
      std::ostringstream os;
      os << std::setprecision(17);
      CorrespondenceSet corrs;
      const auto motion_line = [&os](std::size_t k, const bench::Motion& m) {
        os << "# motion " << k << " quaternion " << m.rotation[0] << " "
           << m.rotation[1] << " " << m.rotation[2] << " " << m.rotation[3]
           << " translation " << m.translation.x() << " " << m.translation.y()
           << " " << m.translation.z() << "\n";
      };
      os << "# seed " << bf.seed << "\n";
      if (gen_kinds[0]->parsed()) {
        bench::RotationScenario s = bench::GenRotationScene(
            {bf.n ? bf.n : 10000, bf.delta, bf.rho >= 0 ? bf.rho : 0.95, bf.eta},
            bf.seed);
        motion_line(0, {s.rotation, Vec3::Zero()});
        corrs = std::move(s.corrs);
      } else {
        bench::RigidScenario s =
            gen_kinds[1]->parsed()
                ? bench::GenRigidScene(
                      {bf.n ? bf.n : 2000, bf.delta, bf.rho >= 0 ? bf.rho : 0.9},
                      bf.seed)
                : bench::GenMultiScene(
                      {bf.models, bf.points, bf.delta, bf.rho >= 0 ? bf.rho : 0.0},
                      bf.seed);
        for (std::size_t k = 0; k < s.motions.size(); ++k) motion_line(k, s.motions[k]);
        corrs = std::move(s.corrs);
      }
      os << "# x1 x2 x3 y1 y2 y3\n";
      WriteCorrespondences(os, corrs);
      Emit(common, os.str(), out);
    }
  } catch (const Error& e) {
    const int code = ExitCodeFor(e.kind());
    err << "error: " << e.what() << "\n";
    ErrorJson(out, ToString(e.kind()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    ErrorJson(out, "internal", e.what(), kExitSolver);
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace rotvote::cli
