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

#include <cmath>

#include "brute_force.hpp"
#include "metrics.hpp"
#include "oracles.hpp"

using namespace plmc;
using geometry::ConvexBody;
using potentials::Potential;

TEST_CASE("uniform ball") {
  const auto s = oracles::sample_uniform_ball(3, 2.0, 3000, 1);
  CHECK(s.size() == 3000);
  CHECK(s.points.rowwise().norm().maxCoeff() <= 2.0);
  const auto m = metrics::moments(s);
  CHECK(std::fabs(m.second_moment - 4.0 * 3 / 5) <= 3 * m.second_moment_se);

  const auto big = oracles::sample_uniform_ball(8, 1.5, 4000, 2);
  const auto mb = metrics::moments(big);
  CHECK(std::fabs(mb.second_moment - 2.25 * 8 / 10) <= 3 * mb.second_moment_se);

  const auto seg = oracles::sample_uniform_ball(1, 1.0, 4000, 3);
  const auto ms = metrics::moments(seg);
  CHECK(std::fabs(ms.mean[0]) <= 3 * ms.mean_se[0]);

  const auto again = oracles::sample_uniform_ball(3, 2.0, 3000, 1);
  CHECK(again.points == s.points);
}

TEST_CASE("truncated exponential") {
  const auto s = oracles::sample_truncated_exponential(1.0, 5.0, 5000, 4);
  CHECK(s.points.minCoeff() >= 0.0);
  CHECK(s.points.maxCoeff() <= 5.0);

  const auto flat = oracles::sample_truncated_exponential(1e-8, 3.0, 5000, 5);
  const auto mf = metrics::moments(flat);
  CHECK(std::fabs(mf.mean[0] - 1.5) <= 3 * mf.mean_se[0]);

  const auto tail = oracles::sample_truncated_exponential(1.0, INFINITY, 100000, 6);
  const auto mt = metrics::moments(tail);
  CHECK(std::fabs(mt.mean[0] - 1.0) <= 3 * mt.mean_se[0]);
}

TEST_CASE("rejection sampling") {
  const auto box = ConvexBody::box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  SUBCASE("zero potential accepts everything") {
    const auto r = oracles::rejection_sample(Potential::zero(2), box, 500, 7);
    CHECK(r.acceptance_rate == 1.0);
    CHECK(r.proposals == 500);
  }
  SUBCASE("|x1| on the square") {
    const Vector e = Vector::Unit(2, 0);
    const auto p = Potential::affine_max({{e, 0.0}, {-e, 0.0}});
    const long m = 20000;
    const auto r = oracles::rejection_sample(p, box, m, 8);
    REQUIRE(r.samples.size() == m);
    std::vector<double> abs_x1, x2;
    for (long i = 0; i < m; ++i) {
      abs_x1.push_back(std::fabs(r.samples.points(i, 0)));
      x2.push_back(r.samples.points(i, 1));
    }
    const double truth = (1 - 2 / std::exp(1.0)) / (1 - 1 / std::exp(1.0));
    const auto a = testing::mean_se(abs_x1);
    CHECK(std::fabs(a.mean - truth) <= 3 * a.se);
    const auto b = testing::mean_se(x2);
    CHECK(std::fabs(b.mean) <= 3 * b.se);

    // Acceptance rate against quadrature of e^{-(phi - inf phi)} / vol.
    const double expected =
        testing::midpoint_2d([](double x, double) { return std::exp(-std::fabs(x)); }, -1, 1,
                             -1, 1, 400) /
        4.0;
    const double se = std::sqrt(expected * (1 - expected) / r.proposals);
    CHECK(std::fabs(r.acceptance_rate - expected) <= 3 * se);
  }
  SUBCASE("too peaked a target is reported") {
    const auto steep = Potential::scaled_norm(Vector::Zero(2), 200.0);
    CHECK_THROWS_AS(oracles::rejection_sample(steep, box, 100, 9, 10), Error);
  }
  SUBCASE("unbounded bodies are refused") {
    CHECK_THROWS_AS(oracles::rejection_sample(Potential::zero(2), ConvexBody::whole_space(2),
                                              10, 1),
                    Error);
  }
}

TEST_CASE("Gaussian warm start") {
  const Vector x0 = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const double L = 2.0;
  const auto s = oracles::sample_gaussian_warmstart(x0, 3, L, 20000, 10);
  const auto m = metrics::moments(s);
  CHECK(std::fabs(m.covariance_trace - 9.0 / 4.0) <= 3 * m.covariance_trace_se);
  for (int j = 0; j < 3; ++j) CHECK(std::fabs(m.mean[j] - x0[j]) <= 3 * m.mean_se[j]);

  const auto unit = oracles::sample_gaussian_warmstart(Vector::Zero(1), 1, 1.0, 20000, 11);
  const auto mu = metrics::moments(unit);
  CHECK(std::fabs(mu.second_moment - 1.0) <= 3 * mu.second_moment_se);
}
