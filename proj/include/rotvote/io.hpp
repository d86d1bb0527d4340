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


// Correspondence text files.
//
// One correspondence per line: x1 x2 x3 y1 y2 y3, fields separated by any
// run of commas and whitespace. '#' starts a comment that runs to the end
// of the line; blank and comment-only lines are skipped.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "rotvote/geometry.hpp"

namespace rotvote {

struct ParsedCorrespondences {
  CorrespondenceSet corrs;
  /// 1-based source line of each correspondence.
  std::vector<std::size_t> lines;
};

/// Throws kParse naming the line for a malformed row, and kParse when fewer
/// than two rows are present.
ParsedCorrespondences ParseCorrespondences(std::istream& in);
/// Throws kIo when the file cannot be opened.
ParsedCorrespondences ReadCorrespondenceFile(const std::string& path);

/// Normalizes every x and y to unit length and returns how many of them
/// deviated from unit length by more than 1e-6. Throws kParse for a zero
/// vector.
std::size_t NormalizeCorrespondences(CorrespondenceSet& corrs);

/// Writes rows in the format read above, with 17 significant digits.
void WriteCorrespondences(std::ostream& out, const CorrespondenceSet& corrs);

}  // namespace rotvote
