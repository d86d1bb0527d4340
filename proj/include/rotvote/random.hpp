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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rotvote {

/// Counter-based SplitMix64 generator.
///
/// The k-th output (k = 0, 1, ...) of a stream with key `seed` is
///
///   z  = seed + (k + 1) * 0x9E3779B97F4A7C15   (mod 2^64)
///   z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   out = z ^ (z >> 31)
///
/// Uniform doubles take the top 53 bits: (out >> 11) * 2^-53, giving [0, 1).
/// Gaussians use Box-Muller on two consecutive uniforms (u1 mapped to (0, 1]),
/// one Gaussian per pair; no value is cached, so the stream position after
/// any call sequence is a pure function of that sequence.
///
/// Independent substreams are keyed with Derive(seed, stream_id), which mixes
/// both words through the same finalizer. Any implementation following these
/// formulas reproduces the same scenario streams bit for bit (up to libm
/// differences in log/cos/sin for Gaussians).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(seed) {}

  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t Derive(std::uint64_t seed,
                                        std::uint64_t stream) {
    return Mix(Mix(seed + 0x9E3779B97F4A7C15ULL) ^
               (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  }

  std::uint64_t NextU64() {
    ++counter_;
    return Mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }
  std::uint64_t operator()() { return NextU64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  /// Uniform integer in [0, n). Rejection keeps it exactly unbiased.
  std::uint64_t UniformIndex(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t v;
    do {
      v = NextU64();
    } while (v >= limit);
    return v % n;
  }

  double Gaussian() {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rotvote
