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

#include "oracles.hpp"

#include <cmath>

#include "rng.hpp"

namespace plmc::oracles {

namespace {

using metrics::Provenance;

void require_count(long m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
}

void uniform_ball_point(RandomStream& stream, double R, Eigen::Ref<Vector> out) {
  do {
    stream.fill_gaussian(out);
  } while (out.norm() == 0.0);
  const double n = double(out.size());
  out *= R * std::pow(stream.uniform(), 1.0 / n) / out.norm();
}

}  // namespace

SampleSet sample_uniform_ball(int n, double R, long m, std::uint64_t seed) {
  require_count(m);
  if (n < 1 || !(R > 0.0) || !std::isfinite(R)) {
    throw Error(ErrorCode::InvalidArgument, "uniform ball: need n >= 1, R > 0");
  }
  RandomStream stream(seed, 0, StreamRole::Oracle);
  Eigen::MatrixXd pts(m, n);
  Vector x(n);
  for (long i = 0; i < m; ++i) {
    uniform_ball_point(stream, R, x);
    pts.row(i) = x.transpose();
  }
  return {std::move(pts), Provenance::Oracle};
}

SampleSet sample_uniform_box(const Vector& lower, const Vector& upper, long m,
                             std::uint64_t seed) {
  require_count(m);
  require_dimension(lower.size(), upper.size(), "uniform box");
  RandomStream stream(seed, 0, StreamRole::Oracle);
  Eigen::MatrixXd pts(m, lower.size());
  for (long i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
      pts(i, j) = lower[j] + (upper[j] - lower[j]) * stream.uniform();
    }
  }
  return {std::move(pts), Provenance::Oracle};
}

SampleSet sample_truncated_exponential(double L, double R, long m,
                                       std::uint64_t seed) {
  require_count(m);
  if (!(L > 0.0) || !(R > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "truncated exponential: need L, R > 0");
  }
  RandomStream stream(seed, 0, StreamRole::Oracle);
  // 1 - e^{-LR}, kept accurate for tiny L R.
  const double mass = std::isfinite(R) ? -std::expm1(-L * R) : 1.0;
  Eigen::MatrixXd pts(m, 1);
  for (long i = 0; i < m; ++i) {
    pts(i, 0) = -std::log1p(-stream.uniform() * mass) / L;
  }
  return {std::move(pts), Provenance::Oracle};
}

RejectionResult rejection_sample(const potentials::Potential& p,
                                 const geometry::ConvexBody& body, long m,
                                 std::uint64_t seed, long max_tries) {
  require_count(m);
  require_dimension(body.dimension(), p.dimension(), "rejection sampler");
  if (max_tries < 1) throw Error(ErrorCode::InvalidArgument, "max_tries must be >= 1");
  const auto* ball = std::get_if<geometry::Ball>(&body.shape());
  const auto* box = std::get_if<geometry::Box>(&body.shape());
  if (!ball && !box) {
    throw Error(ErrorCode::InvalidArgument,
                "rejection sampling needs a bounded box or ball");
  }
  const auto inf = potentials::infimum_over(p, body);
  RandomStream stream(seed, 0, StreamRole::Oracle);
  const int n = body.dimension();
  Eigen::MatrixXd pts(m, n);
  Vector x(n);
  long accepted = 0;
  long proposals = 0;
  const long limit = m * max_tries;
  while (accepted < m) {
    if (proposals >= limit) {
      throw Error(ErrorCode::Domain,
                  "rejection sampling: acceptance rate below 1/max_tries; the "
                  "target is too peaked for rejection at this scale");
    }
    ++proposals;
    if (ball) {
      uniform_ball_point(stream, ball->radius, x);
      x += ball->center;
    } else {
      for (int j = 0; j < n; ++j) {
        x[j] = box->lower[j] + (box->upper[j] - box->lower[j]) * stream.uniform();
      }
    }
    const double accept = std::exp(-(potentials::value(p, x) - inf.value));
    if (stream.uniform() < accept) pts.row(accepted++) = x.transpose();
  }
  return {SampleSet(std::move(pts), metrics::Provenance::Oracle),
          double(m) / double(proposals), proposals, inf.exact};
}

SampleSet sample_gaussian_warmstart(const Vector& x0, int n, double L, long m,
                                    std::uint64_t seed) {
  require_count(m);
  require_dimension(n, x0.size(), "warm start center");
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "warm start needs L > 0");
  RandomStream stream(seed, 0, StreamRole::Warmstart);
  const double scale = std::sqrt(double(n)) / L;
  Eigen::MatrixXd pts(m, n);
  Vector z(n);
  for (long i = 0; i < m; ++i) {
    stream.fill_gaussian(z);
    pts.row(i) = (x0 + scale * z).transpose();
  }
  return {std::move(pts), metrics::Provenance::Oracle};
}

}  // namespace plmc::oracles
