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


#include "rotvote/accumulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "rotvote/error.hpp"

namespace rotvote {
namespace {

template <typename T>
void PutLe(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T GetLe(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorKind::kIo, "truncated accumulator dump");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

int Accumulator3D::BinsForStep(double step) {
  if (!(step > 0.0 && step <= 0.5)) {
    std::ostringstream os;
    os << "accumulator step must lie in (0, 0.5], got " << step;
    throw Error(ErrorKind::kConfig, os.str());
  }
  const double b = std::round(2.0 / step);
  if (b > 2.0e6) throw Error(ErrorKind::kConfig, "accumulator step too small");
  return static_cast<int>(b);
}

std::uint64_t Accumulator3D::DenseBytes(int bins) {
  const auto b = static_cast<std::uint64_t>(bins);
  return b * b * b * sizeof(std::uint32_t);
}

Accumulator3D::Accumulator3D(double step, Storage storage)
    : step_(step), bins_(BinsForStep(step)), storage_(storage) {
  if (storage_ == Storage::kDense) dense_.assign(cell_count(), 0u);
}

std::uint64_t Accumulator3D::cell_count() const {
  const auto b = static_cast<std::uint64_t>(bins_);
  return b * b * b;
}

int Accumulator3D::AxisBin(double coordinate) const {
  const double f = std::floor((coordinate + 1.0) / step_);
  if (!(f > 0.0)) return 0;
  if (f >= bins_ - 1) return bins_ - 1;
  return static_cast<int>(f);
}

std::uint64_t Accumulator3D::BinOf(const Vec3& p) const {
  return Ravel(AxisBin(p.x()), AxisBin(p.y()), AxisBin(p.z()));
}

std::uint64_t Accumulator3D::Ravel(int i, int j, int k) const {
  const auto b = static_cast<std::uint64_t>(bins_);
  return (static_cast<std::uint64_t>(i) * b + static_cast<std::uint64_t>(j)) *
             b +
         static_cast<std::uint64_t>(k);
}

std::array<int, 3> Accumulator3D::Unravel(std::uint64_t index) const {
  const auto b = static_cast<std::uint64_t>(bins_);
  const auto k = static_cast<int>(index % b);
  index /= b;
  const auto j = static_cast<int>(index % b);
  return {static_cast<int>(index / b), j, k};
}

Vec3 Accumulator3D::BinCenter(std::uint64_t index) const {
  const std::array<int, 3> ijk = Unravel(index);
  return {-1.0 + (ijk[0] + 0.5) * step_, -1.0 + (ijk[1] + 0.5) * step_,
          -1.0 + (ijk[2] + 0.5) * step_};
}

std::uint64_t Accumulator3D::MirrorBin(std::uint64_t index) const {
  const std::array<int, 3> ijk = Unravel(index);
  return Ravel(bins_ - 1 - ijk[0], bins_ - 1 - ijk[1], bins_ - 1 - ijk[2]);
}

std::uint32_t Accumulator3D::count(std::uint64_t index) const {
  if (storage_ == Storage::kDense) return dense_[index];
  const auto it = sparse_.find(index);
  return it == sparse_.end() ? 0u : it->second;
}

void Accumulator3D::Add(std::uint64_t index, std::uint32_t n) {
  if (storage_ == Storage::kDense) {
    dense_[index] += n;
  } else {
    sparse_[index] += n;
  }
}

void Accumulator3D::Merge(const Accumulator3D& other) {
  if (other.bins_ != bins_ || other.step_ != step_) {
    throw Error(ErrorKind::kContract, "merging accumulators of different shape");
  }
  if (storage_ == Storage::kDense && other.storage_ == Storage::kDense) {
    for (std::size_t i = 0; i < dense_.size(); ++i) dense_[i] += other.dense_[i];
    return;
  }
  for (const auto& [index, n] : other.Nonzero()) Add(index, n);
}

std::uint64_t Accumulator3D::Total() const {
  std::uint64_t total = 0;
  if (storage_ == Storage::kDense) {
    for (const std::uint32_t c : dense_) total += c;
  } else {
    for (const auto& entry : sparse_) total += entry.second;
  }
  return total;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> Accumulator3D::Nonzero()
    const {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  if (storage_ == Storage::kDense) {
    for (std::size_t i = 0; i < dense_.size(); ++i) {
      if (dense_[i] != 0) out.emplace_back(i, dense_[i]);
    }
  } else {
    out.reserve(sparse_.size());
    for (const auto& entry : sparse_) {
      if (entry.second != 0) out.push_back(entry);
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::pair<std::uint64_t, std::uint32_t> Accumulator3D::Max() const {
  std::pair<std::uint64_t, std::uint32_t> best{0, 0};
  if (storage_ == Storage::kDense) {
    for (std::size_t i = 0; i < dense_.size(); ++i) {
      if (dense_[i] > best.second) best = {i, dense_[i]};
    }
  } else {
    for (const auto& [index, n] : sparse_) {
      if (n > best.second || (n == best.second && n != 0 && index < best.first)) {
        best = {index, n};
      }
    }
  }
  return best;
}

void Accumulator3D::WriteDump(std::ostream& out) const {
  if (bins_ > 0xFFFF) {
    throw Error(ErrorKind::kContract, "too many bins for the dump header");
  }
  out.write("RVAC", 4);
  PutLe<std::uint16_t>(out, kDumpVersion);
  PutLe<std::uint16_t>(out, static_cast<std::uint16_t>(bins_));
  PutLe<double>(out, step_);
  const std::uint64_t cells = cell_count();
  if (storage_ == Storage::kDense) {
    for (std::uint64_t i = 0; i < cells; ++i) PutLe<std::uint32_t>(out, dense_[i]);
  } else {
    for (std::uint64_t i = 0; i < cells; ++i) PutLe<std::uint32_t>(out, count(i));
  }
  if (!out) throw Error(ErrorKind::kIo, "failed to write accumulator dump");
}

Accumulator3D Accumulator3D::ReadDump(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "RVAC", 4) != 0) {
    throw Error(ErrorKind::kIo, "not an accumulator dump");
  }
  const auto version = GetLe<std::uint16_t>(in);
  if (version != kDumpVersion) {
    throw Error(ErrorKind::kIo, "unsupported accumulator dump version");
  }
  const auto bins = GetLe<std::uint16_t>(in);
  const auto step = GetLe<double>(in);
  Accumulator3D acc(step, Storage::kSparse);
  if (acc.bins() != bins) {
    throw Error(ErrorKind::kIo, "accumulator dump header is inconsistent");
  }
  const std::uint64_t cells = acc.cell_count();
  for (std::uint64_t i = 0; i < cells; ++i) {
    const auto n = GetLe<std::uint32_t>(in);
    if (n != 0) acc.sparse_[i] = n;
  }
  return acc;
}

bool operator==(const Accumulator3D& a, const Accumulator3D& b) {
  if (a.bins_ != b.bins_ || a.step_ != b.step_) return false;
  if (a.storage_ == Accumulator3D::Storage::kDense &&
      b.storage_ == Accumulator3D::Storage::kDense) {
    return a.dense_ == b.dense_;
  }
  return a.Nonzero() == b.Nonzero();
}

}  // namespace rotvote
