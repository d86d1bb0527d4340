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

#include <gtest/gtest.h>

#include "rotvote/error.hpp"
#include "rotvote/io.hpp"

namespace rotvote {
namespace {

ParsedCorrespondences Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseCorrespondences(in);
}

Error ParseError(const std::string& text) {
  try {
    Parse(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an error";
  return Error(ErrorKind::kIo, "");
}

TEST(ParseCorrespondences, TwoRows) {
  const ParsedCorrespondences p = Parse("0 0 1 0 1 0\n1 0 0 0 0 1\n");
  ASSERT_EQ(p.corrs.size(), 2u);
  EXPECT_EQ(p.corrs[1].x, Vec3(1, 0, 0));
  EXPECT_EQ(p.corrs[1].y, Vec3(0, 0, 1));
}

TEST(ParseCorrespondences, CommasCommentsAndBlankLines) {
  const ParsedCorrespondences p =
      Parse("# x1 x2 x3 y1 y2 y3\n\n1,0,0,0,1,0\n  2.5e-1 ,\t-3  4 5,6 7\n");
  ASSERT_EQ(p.corrs.size(), 2u);
  EXPECT_EQ(p.corrs[0].x, Vec3(1, 0, 0));
  EXPECT_EQ(p.corrs[0].y, Vec3(0, 1, 0));
  EXPECT_EQ(p.corrs[1].x, Vec3(0.25, -3, 4));
  EXPECT_EQ(p.corrs[1].y, Vec3(5, 6, 7));
  EXPECT_EQ(p.lines, (std::vector<std::size_t>{3, 4}));
}

TEST(ParseCorrespondences, FiveFieldsNamesTheLine) {
  const Error e = ParseError("1 0 0 0 1 0\n# note\n1 0 0 0 1\n");
  EXPECT_EQ(e.kind(), ErrorKind::kParse);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
      << e.what();
}

TEST(ParseCorrespondences, RejectsGarbageAndNonFinite) {
  EXPECT_EQ(ParseError("1 0 0 0 1 x\n1 0 0 0 1 0\n").kind(), ErrorKind::kParse);
  EXPECT_EQ(ParseError("1 0 0 0 1 nan\n1 0 0 0 1 0\n").kind(),
            ErrorKind::kParse);
  EXPECT_EQ(ParseError("1 0 0 0 1 0 7\n1 0 0 0 1 0\n").kind(),
            ErrorKind::kParse);
}

TEST(ParseCorrespondences, NeedsTwoRows) {
  EXPECT_EQ(ParseError("1 0 0 0 1 0\n").kind(), ErrorKind::kParse);
  EXPECT_EQ(ParseError("# only a header\n").kind(), ErrorKind::kParse);
}

TEST(ReadCorrespondenceFile, MissingFileIsIoError) {
  try {
    ReadCorrespondenceFile("/nonexistent/rotvote.txt");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(ReadCorrespondenceFile, WriteThenReadIsExact) {
  CounterRng rng(1);
  CorrespondenceSet corrs;
  for (int i = 0; i < 50; ++i) {
    corrs.push_back({RandomUnitVec3(rng), RandomUnitVec3(rng) * 3.7});
  }
  const std::string path = ::testing::TempDir() + "rotvote_io_test.txt";
  {
    std::ofstream f(path);
    WriteCorrespondences(f, corrs);
  }
  const ParsedCorrespondences back = ReadCorrespondenceFile(path);
  std::remove(path.c_str());
  ASSERT_EQ(back.corrs.size(), corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    EXPECT_EQ(back.corrs[i].x, corrs[i].x);
    EXPECT_EQ(back.corrs[i].y, corrs[i].y);
  }
}

TEST(NormalizeCorrespondences, CountsOffUnitRows) {
  CorrespondenceSet corrs = {{Vec3(1, 0, 0), Vec3(0, 1, 0)},
                             {Vec3(2, 0, 0), Vec3(0, 1, 0)},
                             {Vec3(0, 1 + 1e-9, 0), Vec3(0, 0, 3)}};
  EXPECT_EQ(NormalizeCorrespondences(corrs), 2u);
  for (const Correspondence& c : corrs) {
    EXPECT_NEAR(c.x.norm(), 1.0, 1e-15);
    EXPECT_NEAR(c.y.norm(), 1.0, 1e-15);
  }
}

}  // namespace
}  // namespace rotvote
