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
#include <string>
#include <vector>

#include "error.hpp"

namespace plmc::metrics {

enum class Provenance { Chain, Oracle };

/// Uniformly weighted point cloud; one point per row.
struct SampleSet {
  Eigen::MatrixXd points;
  Provenance provenance = Provenance::Oracle;

  SampleSet() = default;
  SampleSet(Eigen::MatrixXd pts, Provenance prov);
  static SampleSet from_rows(const std::vector<Vector>& rows, Provenance prov);

  Eigen::Index size() const noexcept { return points.rows(); }
  int dimension() const noexcept { return static_cast<int>(points.cols()); }
};

inline constexpr Eigen::Index kExactAssignmentCap = 512;

/// Squared-cost optimal assignment value / m, i.e. W2^2 between the two
/// empirical measures. O(m^3); m is capped at kExactAssignmentCap.
double w2_exact(const SampleSet& a, const SampleSet& b);

/// Optimal assignment for the cost matrix (rows to columns), minimizing the
/// total cost. Returns column index per row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

/// Mean squared difference of sorted samples (dimension 1).
double w2_1d(const SampleSet& a, const SampleSet& b);

/// Average of w2_1d over `n_proj` uniform random directions.
double w2_sliced(const SampleSet& a, const SampleSet& b, int n_proj,
                 std::uint64_t seed);

struct Moments {
  Vector mean;
  double second_moment;     // E|x|^2
  double covariance_trace;  // unbiased
  Vector mean_se;           // jackknife, per coordinate
  double second_moment_se;
  double covariance_trace_se;
};

/// Jackknife standard errors computed in O(m n) from leave-one-out sums.
Moments moments(const SampleSet& a);

}  // namespace plmc::metrics
