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

#include "minnorm.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <limits>
#include <numeric>

namespace plmc::potentials {

namespace {

// Minimizer of |sum mu_i p_i| over the affine hull (sum mu_i = 1) of the
// corral. Parametrized around the first point so rank deficiency is handled
// by the least-squares solve instead of a singular KKT system.
std::vector<double> affine_minimizer(const std::vector<Vector>& points,
                                     const std::vector<int>& corral) {
  const int k = static_cast<int>(corral.size());
  if (k == 1) return {1.0};
  const Vector& base = points[corral[0]];
  Eigen::MatrixXd diffs(base.size(), k - 1);
  for (int i = 1; i < k; ++i) diffs.col(i - 1) = points[corral[i]] - base;
  const Vector t = diffs.completeOrthogonalDecomposition().solve(-base);
  std::vector<double> mu(k);
  mu[0] = 1.0 - t.sum();
  for (int i = 1; i < k; ++i) mu[i] = t[i - 1];
  return mu;
}

Vector combine(const std::vector<Vector>& points, const std::vector<int>& corral,
               const std::vector<double>& weights) {
  Vector x = Vector::Zero(points[corral[0]].size());
  for (std::size_t i = 0; i < corral.size(); ++i) {
    x += weights[i] * points[corral[i]];
  }
  return x;
}

}  // namespace

MinNormResult wolfe_min_norm_point(const std::vector<Vector>& points,
                                   double tol, int max_cycles) {
  if (points.empty()) {
    throw Error(ErrorCode::InvalidArgument, "min-norm point of an empty set");
  }
  const int count = static_cast<int>(points.size());
  double scale = 0.0;
  int start = 0;
  for (int i = 0; i < count; ++i) {
    require_dimension(points[0].size(), points[i].size(), "min-norm point");
    const double sq = points[i].squaredNorm();
    scale = std::max(scale, sq);
    if (sq < points[start].squaredNorm()) start = i;
  }

  MinNormResult result;
  result.weights.assign(count, 0.0);
  if (scale == 0.0) {
    result.point = Vector::Zero(points[0].size());
    result.weights[0] = 1.0;
    return result;
  }

  std::vector<int> corral{start};
  std::vector<double> lambda{1.0};
  Vector x = points[start];
  auto finish = [&]() {
    result.point = x;
    for (std::size_t i = 0; i < corral.size(); ++i) {
      result.weights[corral[i]] = lambda[i];
    }
    return result;
  };

  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    result.major_cycles = cycle + 1;
    int best = 0;
    double best_dot = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
      const double d = x.dot(points[i]);
      if (d < best_dot) {
        best_dot = d;
        best = i;
      }
    }
    const bool in_corral =
        std::find(corral.begin(), corral.end(), best) != corral.end();
    if (x.squaredNorm() - best_dot <= tol * scale || in_corral) {
      return finish();
    }
    corral.push_back(best);
    lambda.push_back(0.0);

    // Minor cycles: each either accepts the affine minimizer or drops at
    // least one point from the corral.
    for (std::size_t guard = 0; guard <= points.size() + 1; ++guard) {
      const std::vector<double> mu = affine_minimizer(points, corral);
      if (std::all_of(mu.begin(), mu.end(), [](double m) { return m > 0.0; })) {
        lambda = mu;
        x = combine(points, corral, lambda);
        break;
      }
      double theta = 1.0;
      std::size_t blocking = 0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] <= 0.0) {
          const double step = lambda[i] / (lambda[i] - mu[i]);
          if (step < theta) {
            theta = step;
            blocking = i;
          }
        }
      }
      if (theta <= 0.0 && blocking + 1 == corral.size()) {
        // The entering point cannot move the iterate: rounding-level stall.
        corral.pop_back();
        lambda.pop_back();
        return finish();
      }
      for (std::size_t i = 0; i < mu.size(); ++i) {
        lambda[i] = (1.0 - theta) * lambda[i] + theta * mu[i];
      }
      lambda[blocking] = 0.0;
      std::vector<int> kept_corral;
      std::vector<double> kept_lambda;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (lambda[i] > 0.0) {
          kept_corral.push_back(corral[i]);
          kept_lambda.push_back(lambda[i]);
        }
      }
      const double total =
          std::accumulate(kept_lambda.begin(), kept_lambda.end(), 0.0);
      for (double& l : kept_lambda) l /= total;
      corral = std::move(kept_corral);
      lambda = std::move(kept_lambda);
      x = combine(points, corral, lambda);
    }
  }
  throw Error(ErrorCode::NotConverged,
              "min-norm subgradient: Wolfe iteration did not converge");
}

}  // namespace plmc::potentials
