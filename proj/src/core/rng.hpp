// Copyright 2026 The plmc-lab Authors
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

#include <array>
#include <cstdint>
#include <optional>

#include "error.hpp"

namespace plmc {

/// Philox4x32-10 block function (Salmon et al., Random123).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

inline constexpr const char* kGeneratorId = "philox4x32-10";
inline constexpr const char* kGaussianTransform = "box-muller(53-bit open-interval uniforms)";

/// What a stream is used for. Part of the counter, so streams with different
/// roles never overlap even under the same seed and replica id.
enum class StreamRole : std::uint32_t {
  Brownian = 1,
  Oracle = 2,
  Projections = 3,
  Warmstart = 4,
  Property = 5,
  Descent = 6,
};

/// Counter-based stream keyed by (seed, replica_id, role).
///
/// The 128-bit counter is laid out as (block_lo, block_hi, replica_id, role)
/// and the 64-bit key is the seed. Each block yields four 32-bit words.
/// Uniforms use two words (53 bits) and land in the open interval (0, 1).
/// Gaussians use the trigonometric Box-Muller transform and are emitted in
/// pairs; the second of each pair is cached.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t replica_id, StreamRole role);

  std::uint32_t next_u32();
  double uniform();
  double gaussian();
  void fill_gaussian(Eigen::Ref<Vector> out);

  std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  PhiloxKey key_;
  std::uint32_t replica_;
  std::uint32_t role_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int buffered_ = 0;
  std::optional<double> spare_;
};

}  // namespace plmc
