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

#include <cstdint>

#include "geometry.hpp"
#include "metrics.hpp"
#include "potentials.hpp"

// Exact iid samplers for the test targets. All are deterministic given the
// seed and emit exactly m points.
namespace plmc::oracles {

using metrics::SampleSet;

/// Uniform on Ball(0, R): Gaussian direction times R U^{1/n}.
SampleSet sample_uniform_ball(int n, double R, long m, std::uint64_t seed);

/// Uniform on a box, componentwise.
SampleSet sample_uniform_box(const Vector& lower, const Vector& upper, long m,
                             std::uint64_t seed);

/// Density proportional to e^{-L x} on [0, R] (R may be +inf), by inverse
/// CDF: x = -log(1 - u (1 - e^{-L R})) / L.
SampleSet sample_truncated_exponential(double L, double R, long m,
                                       std::uint64_t seed);

struct RejectionResult {
  SampleSet samples;
  double acceptance_rate;
  long proposals;
  /// false when inf phi came from descent; acceptance probabilities are then
  /// clipped at 1 and the draw is only approximately exact.
  bool infimum_exact;
};

/// Uniform proposals on a bounded box or ball, accepted with probability
/// e^{-(phi(x) - inf phi)}. Throws once proposals exceed m * max_tries.
RejectionResult rejection_sample(const potentials::Potential& p,
                                 const geometry::ConvexBody& body, long m,
                                 std::uint64_t seed, long max_tries = 1000);

/// N(x0, (n / L^2) Id).
SampleSet sample_gaussian_warmstart(const Vector& x0, int n, double L, long m,
                                    std::uint64_t seed);

}  // namespace plmc::oracles
