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

#include <vector>

#include "error.hpp"

namespace plmc::potentials {

struct MinNormResult {
  Vector point;
  std::vector<double> weights;  // convex weights, one per input point
  int major_cycles = 0;
};

/// Minimum-norm point of conv{points} by Wolfe's algorithm.
///
/// Terminates when the Wolfe gap |x|^2 - min_i <x, p_i> drops below
/// tol * max_i |p_i|^2. Throws NotConverged after `max_cycles` major cycles.
MinNormResult wolfe_min_norm_point(const std::vector<Vector>& points,
                                   double tol = 1e-10, int max_cycles = 1000);

}  // namespace plmc::potentials
