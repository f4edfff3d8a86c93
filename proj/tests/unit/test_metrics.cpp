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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metrics.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace plmc;
using metrics::Provenance;
using metrics::SampleSet;

namespace {

SampleSet line(std::vector<double> xs) {
  Eigen::MatrixXd m(xs.size(), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) m(i, 0) = xs[i];
  return {m, Provenance::Oracle};
}

SampleSet random_set(RandomStream& s, int m, int n) {
  Eigen::MatrixXd pts(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) pts(i, j) = s.gaussian() + 0.3 * j;
  }
  return {pts, Provenance::Oracle};
}

// Minimum over all permutations, for m <= 7.
double w2_permutations(const SampleSet& a, const SampleSet& b) {
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      total += (a.points.row(i) - b.points.row(perm[i])).squaredNorm();
    }
    best = std::min(best, total / a.size());
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("exact W2 small cases") {
  const auto a = line({0, 1});
  const auto b = line({1, 2});
  CHECK(w2_permutations(a, b) == 1.0);  // frozen: pairings cost 2 and 4
  CHECK(metrics::w2_exact(a, b) == 1.0);
  CHECK(metrics::w2_exact(a, a) == 0.0);
  CHECK(metrics::w2_1d(a, b) == 1.0);
}

TEST_CASE("assignment solver matches exhaustive search") {
  RandomStream s(8, 0, StreamRole::Property);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + trial % 7;
    const int n = 1 + trial % 3;
    const auto a = random_set(s, m, n);
    const auto b = random_set(s, m, n);
    const double exact = metrics::w2_exact(a, b);
    CHECK(exact == doctest::Approx(w2_permutations(a, b)).epsilon(1e-12));
    CHECK(exact == doctest::Approx(metrics::w2_exact(b, a)).epsilon(1e-12));
    if (n == 1) CHECK(exact == doctest::Approx(metrics::w2_1d(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("W2 is a metric on square roots") {
  RandomStream s(12, 0, StreamRole::Property);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_set(s, 20, 3);
    const auto b = random_set(s, 20, 3);
    const auto c = random_set(s, 20, 3);
    const double ab = std::sqrt(metrics::w2_exact(a, b));
    const double bc = std::sqrt(metrics::w2_exact(b, c));
    const double ac = std::sqrt(metrics::w2_exact(a, c));
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("one-dimensional W2") {
  RandomStream s(2, 0, StreamRole::Property);
  auto a = random_set(s, 50, 1);
  SampleSet shifted = a;
  shifted.points.array() += 1.5;
  CHECK(metrics::w2_1d(a, shifted) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(metrics::w2_1d(a, a) == 0.0);
  CHECK_THROWS_AS(metrics::w2_1d(random_set(s, 5, 2), random_set(s, 5, 2)), Error);
}

TEST_CASE("sliced W2") {
  RandomStream s(4, 0, StreamRole::Property);
  const auto a = random_set(s, 30, 1);
  const auto b = random_set(s, 30, 1);
  CHECK(metrics::w2_sliced(a, b, 7, 1) == doctest::Approx(metrics::w2_1d(a, b)).epsilon(1e-12));
  CHECK(metrics::w2_sliced(a, a, 7, 1) == 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + trial % 15;
    const int n = 1 + trial % 3;
    const auto x = random_set(s, m, n);
    const auto y = random_set(s, m, n);
    CHECK(metrics::w2_sliced(x, y, 16, trial) <= metrics::w2_exact(x, y) + 1e-9);
  }
  CHECK(metrics::w2_sliced(a, b, 5, 9) == metrics::w2_sliced(a, b, 5, 9));
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(metrics::w2_exact(line({0, 1}), line({0})), Error);
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(513, 1);
  const SampleSet huge(big, Provenance::Oracle);
  CHECK_THROWS_AS(metrics::w2_exact(huge, huge), Error);
  CHECK_THROWS_AS(metrics::moments(line({1})), Error);
}

TEST_CASE("moments and jackknife standard errors") {
  Eigen::MatrixXd same = Eigen::MatrixXd::Constant(5, 2, 3.0);
  const auto flat = metrics::moments({same, Provenance::Oracle});
  CHECK(flat.mean[0] == 3.0);
  CHECK(flat.covariance_trace == 0.0);

  const auto pm = metrics::moments(line({-1, 1}));
  CHECK(pm.mean[0] == 0.0);
  CHECK(pm.second_moment == 1.0);

  // Jackknife SE of a mean equals the classical s / sqrt(m).
  RandomStream s(6, 0, StreamRole::Property);
  const auto a = random_set(s, 200, 2);
  const auto mo = metrics::moments(a);
  const Eigen::VectorXd sq = a.points.rowwise().squaredNorm();
  const double mean_sq = sq.mean();
  const double var = (sq.array() - mean_sq).square().sum() / (sq.size() - 1);
  CHECK(mo.second_moment_se == doctest::Approx(std::sqrt(var / sq.size())).epsilon(1e-10));

  // Brute-force leave-one-out for the covariance trace.
  std::vector<double> loo;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    Eigen::MatrixXd rest(a.size() - 1, 2);
    for (Eigen::Index j = 0, r = 0; j < a.size(); ++j) {
      if (j != i) rest.row(r++) = a.points.row(j);
    }
    const Eigen::RowVectorXd mu = rest.colwise().mean();
    loo.push_back((rest.rowwise() - mu).squaredNorm() / (rest.rows() - 1));
  }
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / loo.size();
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  const double jack = std::sqrt((loo.size() - 1.0) / loo.size() * ss);
  CHECK(mo.covariance_trace_se == doctest::Approx(jack).epsilon(1e-9));
}

TEST_CASE("uniform ball second moment") {
  const auto s = oracles::sample_uniform_ball(8, 1.0, 4000, 21);
  const auto m = metrics::moments(s);
  CHECK(std::fabs(m.second_moment - 0.8) <= 3 * m.second_moment_se);
}
