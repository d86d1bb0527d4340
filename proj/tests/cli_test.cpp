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


#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli_app.hpp"
#include "json.hpp"
#include "rotvote/accumulator.hpp"
#include "rotvote/bench.hpp"
#include "rotvote/io.hpp"
#include "rotvote/voting.hpp"

namespace rotvote::cli {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "rotvote");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "rotvote_cli_" + name;
}

std::string WriteScene(const std::string& name, const CorrespondenceSet& corrs) {
  const std::string path = TempPath(name);
  std::ofstream f(path);
  f << "# x1 x2 x3 y1 y2 y3\n";
  WriteCorrespondences(f, corrs);
  return path;
}

void ExpectConsistentRotation(const json& rot) {
  const Vec4 q(rot["quaternion"][0], rot["quaternion"][1], rot["quaternion"][2],
               rot["quaternion"][3]);
  EXPECT_NEAR(q.norm(), 1.0, 1e-9);
  EXPECT_LE(q[3], 0.0);
  const Mat3 from_q = QuatToMatrix(UnitQuaternion(q));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      EXPECT_NEAR(rot["matrix"][r][c].get<double>(), from_q(r, c), 1e-8);
    }
  }
}

UnitQuaternion QuatOf(const json& rot) {
  return UnitQuaternion(rot["quaternion"][0], rot["quaternion"][1],
                        rot["quaternion"][2], rot["quaternion"][3]);
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    rotation_ = bench::GenRotationScene({2000, 0.01, 0.8, 0.0}, 11);
    rotation_path_ = WriteScene("rotation.txt", rotation_.corrs);
    rigid_ = bench::GenRigidScene({400, 0.01, 0.5}, 12);
    rigid_path_ = WriteScene("rigid.txt", rigid_.corrs);
  }
  static void TearDownTestSuite() {
    std::remove(rotation_path_.c_str());
    std::remove(rigid_path_.c_str());
  }

  static bench::RotationScenario rotation_;
  static bench::RigidScenario rigid_;
  static std::string rotation_path_;
  static std::string rigid_path_;
};

bench::RotationScenario CliTest::rotation_;
bench::RigidScenario CliTest::rigid_;
std::string CliTest::rotation_path_;
std::string CliTest::rigid_path_;

TEST_F(CliTest, SolveRotation) {
  const Result r = RunCli({"solve-rotation", rotation_path_, "--epsilon",
                           "0.005555", "--samples", "180"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["method"], "rotation-voting");
  EXPECT_GT(doc["votes"].get<int>(), 0);
  EXPECT_EQ(doc["inlier_count"].get<int>(), 400);
  EXPECT_FALSE(doc.contains("runtime_s"));
  EXPECT_DOUBLE_EQ(doc["config"]["epsilon"].get<double>(), 0.005555);
  ExpectConsistentRotation(doc["rotation"]);
  EXPECT_LT(RotationErrorDeg(rotation_.rotation, QuatOf(doc["rotation"])), 1.0);
}

TEST_F(CliTest, SolveRotationOptions) {
  const Result r = RunCli({"solve-rotation", rotation_path_, "--no-refine",
                           "--inliers", "--timing"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_FALSE(doc["refined"].get<bool>());
  EXPECT_TRUE(doc.contains("runtime_s"));
  EXPECT_EQ(doc["inlier_indices"].size(), doc["inlier_count"].get<std::size_t>());

  const Result csv = RunCli({"solve-rotation", rotation_path_, "--output", "csv"});
  ASSERT_EQ(csv.code, kExitOk) << csv.err;
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 2);
}

TEST_F(CliTest, OutputIdenticalAcrossThreads) {
  const Result one = RunCli({"solve-rotation", rotation_path_, "--threads", "1"});
  ASSERT_EQ(one.code, kExitOk);
  for (const char* t : {"1", "4", "8"}) {
    const Result other = RunCli({"solve-rotation", rotation_path_, "--threads", t});
    EXPECT_EQ(other.out, one.out) << t;
  }
}

TEST_F(CliTest, ProjectDebugDump) {
  const std::string dump = TempPath("acc.bin");
  const Result r = RunCli({"project-debug", rotation_path_, "--out", dump,
                           "--epsilon", "0.02"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["bins_per_axis"], 100);
  std::ifstream f(dump, std::ios::binary);
  const Accumulator3D acc = Accumulator3D::ReadDump(f);
  std::remove(dump.c_str());
  VotingConfig cfg;
  cfg.epsilon = 0.02;
  CorrespondenceSet input = ReadCorrespondenceFile(rotation_path_).corrs;
  NormalizeCorrespondences(input);
  EXPECT_TRUE(acc == Vote(input, cfg).accumulator);
  EXPECT_EQ(doc["total_votes"].get<std::uint64_t>(), acc.Total());
}

TEST_F(CliTest, SolvePose) {
  const Result r = RunCli({"solve-pose", rigid_path_, "--mu-t", "0.05"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ExpectConsistentRotation(doc["rotation"]);
  const Vec3 t(doc["translation"][0], doc["translation"][1],
               doc["translation"][2]);
  EXPECT_LT(RotationErrorDeg(rigid_.motions[0].rotation, QuatOf(doc["rotation"])),
            5.0);
  EXPECT_LT((t - rigid_.motions[0].translation).norm(), 0.1);
}

TEST_F(CliTest, GenerateThenSolvePose) {
  const std::string path = TempPath("generated.txt");
  const Result g = RunCli({"generate", "rigid", "--n", "300", "--rho", "0.5",
                           "--seed", "21", "--out", path});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  const bench::RigidScenario truth = bench::GenRigidScene({300, 0.01, 0.5}, 21);
  const Result r = RunCli({"solve-pose", path});
  std::remove(path.c_str());
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_LT(RotationErrorDeg(truth.motions[0].rotation, QuatOf(doc["rotation"])),
            5.0);
}

TEST_F(CliTest, MultiCommands) {
  const bench::RigidScenario s = bench::GenMultiScene({2, 200, 0.01, 0.0}, 13);
  const std::string path = WriteScene("multi.txt", s.corrs);
  const Result pose = RunCli({"multi-pose", path, "--models", "2"});
  ASSERT_EQ(pose.code, kExitOk) << pose.err;
  EXPECT_EQ(json::parse(pose.out)["models"].size(), 2u);

  CorrespondenceSet dirs;
  const bench::RotationScenario a = bench::GenRotationScene({500, 0.01, 0.0, 0.0}, 14);
  const bench::RotationScenario b = bench::GenRotationScene({500, 0.01, 0.0, 0.0}, 15);
  dirs = a.corrs;
  dirs.insert(dirs.end(), b.corrs.begin(), b.corrs.end());
  const std::string rot_path = WriteScene("multi_rot.txt", dirs);
  const Result rot = RunCli({"multi-rotation", rot_path, "--models", "2"});
  std::remove(path.c_str());
  std::remove(rot_path.c_str());
  ASSERT_EQ(rot.code, kExitOk) << rot.err;
  const json doc = json::parse(rot.out);
  ASSERT_EQ(doc["models"].size(), 2u);
  for (const json& m : doc["models"]) ExpectConsistentRotation(m["rotation"]);
}

TEST(Cli, BenchRotationCsvRows) {
  const Result r = RunCli({"bench", "rotation", "--n", "10000", "--rho", "0.95",
                           "--repeats", "20", "--seed", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  ASSERT_EQ(rows.size(), 21u);  // header + 20 trials
  EXPECT_EQ(rows[0].rfind("scenario,", 0), 0u);
}

TEST(Cli, BenchJsonAggregates) {
  const Result r = RunCli({"bench", "rotation", "--n", "500", "--rho", "0.5",
                           "--repeats", "3", "--methods", "svd,horn",
                           "--output", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["aggregates"].size(), 2u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(RunCli({}).code, kExitUsage);
  EXPECT_EQ(RunCli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"solve-rotation"}).code, kExitUsage);

  const Result missing = RunCli({"solve-rotation", "/nonexistent/in.txt"});
  EXPECT_EQ(missing.code, kExitInput);
  const json err = json::parse(missing.out);
  EXPECT_EQ(err["error"]["kind"], "io");
  EXPECT_EQ(err["error"]["exit_code"], kExitInput);

  const std::string bad = TempPath("bad.txt");
  {
    std::ofstream f(bad);
    f << "1 0 0 0 1 0\n1 0 0 0 1\n";
  }
  const Result parse = RunCli({"solve-rotation", bad});
  EXPECT_EQ(parse.code, kExitInput);
  EXPECT_NE(parse.out.find("line 2"), std::string::npos);

  const std::string good = TempPath("good.txt");
  {
    std::ofstream f(good);
    f << "1 0 0 0 1 0\n0 1 0 -1 0 0\n0 0 1 0 0 1\n";
  }
  EXPECT_EQ(RunCli({"solve-rotation", good, "--epsilon", "2"}).code, kExitConfig);
  EXPECT_EQ(RunCli({"solve-rotation", good, "--bogus"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"solve-pose", good, "--translation-grid", "10,11,0.5"}).code,
            kExitSolver);
  EXPECT_EQ(RunCli({"solve-pose", good, "--translation-grid", "1,0"}).code,
            kExitConfig);
  EXPECT_EQ(RunCli({"solve-rotation", good}).code, kExitOk);
  std::remove(bad.c_str());
  std::remove(good.c_str());
}

TEST(Cli, OffUnitInputIsNormalizedWithWarning) {
  const std::string path = TempPath("scaled.txt");
  {
    std::ofstream f(path);
    f << "2 0 0 0 2 0\n0 3 0 -3 0 0\n0 0 1 0 0 1\n";
  }
  const Result r = RunCli({"solve-rotation", path});
  std::remove(path.c_str());
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("warning"), std::string::npos) << r.err;
}

TEST(Cli, RotationJsonFields) {
  const json j = RotationJson(
      CanonicalizeHemisphere(QuatFromAxisAngle(Vec3(0, 0, 1), 1.0)));
  EXPECT_NEAR(j["angle_deg"].get<double>(), 1.0 * kRadToDeg, 1e-9);
  ExpectConsistentRotation(j);
}

}  // namespace
}  // namespace rotvote::cli
