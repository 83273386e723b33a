// SPDX-License-Identifier: Apache-2.0
//
// fris-sim: link-level simulation and optimization for fluid reconfigurable
// intelligent surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace fris {

/// Counter-based pseudo-random stream (splitmix64 finalizer over a keyed
/// counter). The same (seed, draw index) pair yields the same value on every
/// platform, and independent substreams can be derived for parallel workers.
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  /// Independent child stream keyed by (this stream's seed, index).
  [[nodiscard]] RngStream substream(std::uint64_t index) const {
    return RngStream(mix(mix(seed_ ^ 0x6C62272E07BB0142ULL) + index));
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  double normal() { return normal_pair().first; }

  /// Circularly-symmetric complex normal with unit variance
  /// (real and imaginary parts each of variance 1/2).
  std::complex<double> complex_normal() {
    const auto [re, im] = normal_pair();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t draws() const { return counter_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

/// Matrix of i.i.d. CN(0,1) entries, filled column-major.
inline Eigen::MatrixXcd complex_gaussian(RngStream& rng, Eigen::Index rows,
                                         Eigen::Index cols) {
  Eigen::MatrixXcd out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = rng.complex_normal();
  return out;
}

}  // namespace fris
