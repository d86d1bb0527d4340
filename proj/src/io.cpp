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


#include "rotvote/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "rotvote/error.hpp"

namespace rotvote {
namespace {

bool IsSeparator(char c) {
  return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\v' ||
         c == '\f';
}

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  throw Error(ErrorKind::kParse, os.str());
}

}  // namespace

ParsedCorrespondences ParseCorrespondences(std::istream& in) {
  ParsedCorrespondences out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::string_view line(text);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    double v[6];
    int fields = 0;
    std::size_t pos = 0;
    while (true) {
      while (pos < line.size() && IsSeparator(line[pos])) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && !IsSeparator(line[end])) ++end;
      const std::string_view token = line.substr(pos, end - pos);
      if (fields == 6) Fail(line_no, "expected 6 fields, found more");
      double value = 0.0;
      const char* first = token.data();
      if (!token.empty() && token.front() == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        Fail(line_no, "field " + std::to_string(fields + 1) + " '" +
                          std::string(token) + "' is not a number");
      }
      if (!std::isfinite(value)) {
        Fail(line_no, "field " + std::to_string(fields + 1) + " is not finite");
      }
      v[fields++] = value;
      pos = end;
    }
    if (fields == 0) continue;
    if (fields != 6) {
      Fail(line_no, "expected 6 fields, found " + std::to_string(fields));
    }
    out.corrs.push_back({Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])});
    out.lines.push_back(line_no);
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read error");
  if (out.corrs.size() < 2) {
    throw Error(ErrorKind::kParse,
                "need at least 2 correspondences, found " +
                    std::to_string(out.corrs.size()));
  }
  return out;
}

ParsedCorrespondences ReadCorrespondenceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  try {
    return ParseCorrespondences(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::size_t NormalizeCorrespondences(CorrespondenceSet& corrs) {
  std::size_t off_unit = 0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    for (Vec3* v : {&corrs[i].x, &corrs[i].y}) {
      const double n = v->norm();
      if (!(n > 0.0)) {
        throw Error(ErrorKind::kParse,
                    "correspondence " + std::to_string(i) + " has a zero vector");
      }
      if (std::abs(n - 1.0) > 1e-6) ++off_unit;
      *v /= n;
    }
  }
  return off_unit;
}

void WriteCorrespondences(std::ostream& out, const CorrespondenceSet& corrs) {
  char buf[256];
  for (const Correspondence& c : corrs) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g %.17g\n",
                  c.x.x(), c.x.y(), c.x.z(), c.y.x(), c.y.y(), c.y.z());
    out << buf;
  }
}

}  // namespace rotvote
