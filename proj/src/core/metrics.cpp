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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rng.hpp"

namespace plmc::metrics {

namespace {

void require_same_shape(const SampleSet& a, const SampleSet& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "sample sets must have equal sizes (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  require_dimension(a.dimension(), b.dimension(), "sample set");
  if (a.size() < 1) throw Error(ErrorCode::InvalidArgument, "empty sample set");
}

double sorted_msd(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    total += d * d;
  }
  return total / double(x.size());
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

double jackknife_se(const std::vector<double>& leave_one_out) {
  const double m = double(leave_one_out.size());
  double mean = 0.0;
  for (double v : leave_one_out) mean += v;
  mean /= m;
  double ss = 0.0;
  for (double v : leave_one_out) ss += (v - mean) * (v - mean);
  return std::sqrt((m - 1.0) / m * ss);
}

}  // namespace

SampleSet::SampleSet(Eigen::MatrixXd pts, Provenance prov)
    : points(std::move(pts)), provenance(prov) {}

SampleSet SampleSet::from_rows(const std::vector<Vector>& rows, Provenance prov) {
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty sample set");
  Eigen::MatrixXd pts(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_dimension(pts.cols(), rows[i].size(), "sample row");
    pts.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return {std::move(pts), prov};
}

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  // Hungarian method with row/column potentials, O(m^3). 1-based internally;
  // column 0 is a sentinel.
  const int m = static_cast<int>(cost.rows());
  if (cost.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "assignment cost must be square");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0), min_slack(m + 1);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (int row = 1; row <= m; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const int r = match[col0];
      double delta = kInf;
      int col1 = 0;
      for (int c = 1; c <= m; ++c) {
        if (used[c]) continue;
        const double slack = cost(r - 1, c - 1) - u[r] - v[c];
        if (slack < min_slack[c]) {
          min_slack[c] = slack;
          way[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= m; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(m);
  for (int c = 1; c <= m; ++c) assignment[match[c] - 1] = c - 1;
  return assignment;
}

double w2_exact(const SampleSet& a, const SampleSet& b) {
  require_same_shape(a, b);
  if (a.size() > kExactAssignmentCap) {
    throw Error(ErrorCode::InvalidArgument,
                "exact W2 is capped at m = " + std::to_string(kExactAssignmentCap) +
                    "; use the sliced estimator");
  }
  const Eigen::Index m = a.size();
  Eigen::MatrixXd cost(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      cost(i, j) = (a.points.row(i) - b.points.row(j)).squaredNorm();
    }
  }
  const auto assignment = solve_assignment(cost);
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) total += cost(i, assignment[i]);
  return total / double(m);
}

double w2_1d(const SampleSet& a, const SampleSet& b) {
  require_same_shape(a, b);
  if (a.dimension() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "w2_1d needs one-dimensional samples");
  }
  return sorted_msd(column(a.points, 0), column(b.points, 0));
}

double w2_sliced(const SampleSet& a, const SampleSet& b, int n_proj,
                 std::uint64_t seed) {
  require_same_shape(a, b);
  if (n_proj < 1) throw Error(ErrorCode::InvalidArgument, "n_proj must be >= 1");
  RandomStream stream(seed, 0, StreamRole::Projections);
  Vector direction(a.dimension());
  double total = 0.0;
  for (int p = 0; p < n_proj; ++p) {
    do {
      stream.fill_gaussian(direction);
    } while (direction.norm() == 0.0);
    direction.normalize();
    const Vector pa = a.points * direction;
    const Vector pb = b.points * direction;
    total += sorted_msd({pa.data(), pa.data() + pa.size()},
                        {pb.data(), pb.data() + pb.size()});
  }
  return total / n_proj;
}

Moments moments(const SampleSet& a) {
  const Eigen::Index m = a.size();
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "moments need m >= 2");
  const double md = double(m);
  Moments out;
  const Vector sum = a.points.colwise().sum().transpose();
  out.mean = sum / md;
  const Vector sq = a.points.rowwise().squaredNorm();
  const double sq_total = sq.sum();
  out.second_moment = sq_total / md;

  // Covariance trace is translation invariant: work with centered rows.
  const Eigen::MatrixXd centered = a.points.rowwise() - out.mean.transpose();
  const Vector csq = centered.rowwise().squaredNorm();
  const double csq_total = csq.sum();
  out.covariance_trace = csq_total / (md - 1.0);

  out.mean_se = Vector(a.dimension());
  std::vector<double> loo(m);
  for (int j = 0; j < a.dimension(); ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      loo[i] = (sum[j] - a.points(i, j)) / (md - 1.0);
    }
    out.mean_se[j] = jackknife_se(loo);
  }
  for (Eigen::Index i = 0; i < m; ++i) loo[i] = (sq_total - sq[i]) / (md - 1.0);
  out.second_moment_se = jackknife_se(loo);

  if (m < 3) {
    out.covariance_trace_se = std::numeric_limits<double>::quiet_NaN();
  } else {
    // Centered sum is zero, so the leave-one-out sum is -c_i.
    for (Eigen::Index i = 0; i < m; ++i) {
      loo[i] = (csq_total - csq[i] - csq[i] / (md - 1.0)) / (md - 2.0);
    }
    out.covariance_trace_se = jackknife_se(loo);
  }
  return out;
}

}  // namespace plmc::metrics
