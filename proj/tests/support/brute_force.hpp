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

// Slow, obviously-correct reference computations used only by tests. None of
// this shares code with the library.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace plmc::testing {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct HalfspaceRow {
  Vec a;
  double b;
};

/// Euclidean projection onto {y : <a_i, y> <= b_i} by enumerating every
/// active set: for each subset S with independent normals, project x onto
/// the affine set {<a_i, y> = b_i, i in S}; keep the feasible candidate
/// closest to x. Exponential in the constraint count.
inline Vec project_polytope_bruteforce(const std::vector<HalfspaceRow>& hs,
                                       const Vec& x) {
  const int m = static_cast<int>(hs.size());
  const long n = x.size();
  std::optional<Vec> best;
  double best_d = std::numeric_limits<double>::infinity();
  auto feasible = [&](const Vec& y) {
    for (const auto& h : hs) {
      if (h.a.dot(y) - h.b > 1e-9 * (1.0 + std::fabs(h.b))) return false;
    }
    return true;
  };
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    if (static_cast<long>(idx.size()) > n) continue;
    Vec y = x;
    if (!idx.empty()) {
      Mat A(idx.size(), n);
      Vec b(idx.size());
      for (std::size_t r = 0; r < idx.size(); ++r) {
        A.row(r) = hs[idx[r]].a.transpose();
        b[r] = hs[idx[r]].b;
      }
      Eigen::FullPivLU<Mat> rank_check(A);
      if (rank_check.rank() < static_cast<long>(idx.size())) continue;
      const Mat G = A * A.transpose();
      const Vec lambda = G.ldlt().solve(A * x - b);
      y = x - A.transpose() * lambda;
    }
    if (!feasible(y)) continue;
    const double d = (y - x).norm();
    if (d < best_d) {
      best_d = d;
      best = y;
    }
  }
  return *best;
}

/// Minimum-norm point of conv{points} by enumerating supports: for each
/// subset, the min-norm point of its affine hull, kept when its barycentric
/// weights are all non-negative.
inline Vec min_norm_hull_bruteforce(const std::vector<Vec>& points) {
  const int m = static_cast<int>(points.size());
  const long n = points.front().size();
  Vec best = points.front();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const long s = static_cast<long>(idx.size());
    // Minimize |P w|^2 subject to sum w = 1 through the KKT system.
    Mat P(n, s);
    for (long j = 0; j < s; ++j) P.col(j) = points[idx[j]];
    Mat K = Mat::Zero(s + 1, s + 1);
    K.topLeftCorner(s, s) = P.transpose() * P;
    K.block(0, s, s, 1).setOnes();
    K.block(s, 0, 1, s).setOnes();
    Vec rhs = Vec::Zero(s + 1);
    rhs[s] = 1.0;
    Eigen::FullPivLU<Mat> lu(K);
    if (!lu.isInvertible()) continue;
    const Vec sol = lu.solve(rhs);
    const Vec w = sol.head(s);
    if (w.minCoeff() < -1e-12) continue;
    const Vec y = P * w;
    if (y.norm() < best.norm()) best = y;
  }
  return best;
}

/// min of f over the box [lo, hi] on a uniform grid with `steps` cells per
/// axis (2-d only).
inline double grid_min_2d(const std::function<double(double, double)>& f, double lo1,
                          double hi1, double lo2, double hi2, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double x = lo1 + (hi1 - lo1) * i / steps;
      const double y = lo2 + (hi2 - lo2) * j / steps;
      best = std::min(best, f(x, y));
    }
  }
  return best;
}

/// Midpoint rule over a 2-d box.
inline double midpoint_2d(const std::function<double(double, double)>& f, double lo1,
                          double hi1, double lo2, double hi2, int cells) {
  const double h1 = (hi1 - lo1) / cells;
  const double h2 = (hi2 - lo2) / cells;
  double total = 0.0;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      total += f(lo1 + (i + 0.5) * h1, lo2 + (j + 0.5) * h2);
    }
  }
  return total * h1 * h2;
}

/// Mean and standard error of a scalar sample.
struct MeanSe {
  double mean;
  double se;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (v.size() - 1.0) / v.size())};
}

}  // namespace plmc::testing
