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


// Command-line front end. Exit codes: 0 success, 2 usage error, 3 invalid
// configuration, 4 unreadable or malformed input, 5 solver failure. On
// failure a JSON error document is written to standard output.

#pragma once

#include <iosfwd>

#include "json.hpp"

#include "rotvote/geometry.hpp"

namespace rotvote::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitInput = 4;
inline constexpr int kExitSolver = 5;

/// Runs the command line `argv` writing results to `out` (unless --out is
/// given) and diagnostics to `err`. Returns the exit code.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// {"quaternion": [q0..q3], "matrix": [[row0], [row1], [row2]],
///  "angle_deg": a, "axis": [x, y, z]} for a hemisphere-canonical q.
nlohmann::ordered_json RotationJson(const UnitQuaternion& q);

}  // namespace rotvote::cli
