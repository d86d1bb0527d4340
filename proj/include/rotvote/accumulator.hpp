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


// Integer vote grid over the cube [-1, 1]^3 that contains the unit ball.
//
// B = round(2 / step) bins per axis; a point p falls into bin
// floor((p + 1) / step) per axis, clamped to [0, B - 1]. Linear indices are
// (i * B + j) * B + k with i along x. Counts live either in a dense array
// of 32-bit counters or, when that array would exceed the memory budget,
// in a hash map keyed by linear index. Both storages compare equal when
// their counts do.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rotvote/geometry.hpp"

namespace rotvote {

class Accumulator3D {
 public:
  enum class Storage { kDense, kSparse };

  /// Throws kConfig unless 0 < step <= 0.5.
  Accumulator3D(double step, Storage storage);

  static int BinsForStep(double step);
  /// Bytes needed by a dense grid with `bins` per axis.
  static std::uint64_t DenseBytes(int bins);

  int bins() const { return bins_; }
  double step() const { return step_; }
  Storage storage() const { return storage_; }
  std::uint64_t cell_count() const;

  int AxisBin(double coordinate) const;
  std::uint64_t BinOf(const Vec3& p) const;
  std::uint64_t Ravel(int i, int j, int k) const;
  std::array<int, 3> Unravel(std::uint64_t index) const;
  Vec3 BinCenter(std::uint64_t index) const;
  /// Bin mirrored through the cube center.
  std::uint64_t MirrorBin(std::uint64_t index) const;

  std::uint32_t count(std::uint64_t index) const;
  void Add(std::uint64_t index, std::uint32_t n = 1);
  /// Adds `other` bin by bin; both must share step.
  void Merge(const Accumulator3D& other);
  std::uint64_t Total() const;

  /// (index, count) for every nonzero bin in ascending index order.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> Nonzero() const;
  /// Largest count and the lowest index holding it; (0, 0) when empty.
  std::pair<std::uint64_t, std::uint32_t> Max() const;

  /// Dense counters, or nullptr for sparse storage.
  std::uint32_t* dense_data() { return dense_.empty() ? nullptr : dense_.data(); }
  const std::uint32_t* dense_data() const {
    return dense_.empty() ? nullptr : dense_.data();
  }
  std::unordered_map<std::uint64_t, std::uint32_t>& sparse_map() {
    return sparse_;
  }

  /// Header {"RVAC", uint16 version, uint16 B, float64 step}, then B^3
  /// little-endian uint32 counts in linear-index order.
  void WriteDump(std::ostream& out) const;
  static Accumulator3D ReadDump(std::istream& in);

  friend bool operator==(const Accumulator3D& a, const Accumulator3D& b);

 private:
  double step_;
  int bins_;
  Storage storage_;
  std::vector<std::uint32_t> dense_;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
};

inline constexpr std::uint16_t kDumpVersion = 1;

}  // namespace rotvote
