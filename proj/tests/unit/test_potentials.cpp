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
#include "potentials.hpp"
#include "rng.hpp"

using namespace plmc;
using geometry::ConvexBody;
using potentials::AffinePiece;
using potentials::Potential;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

Potential abs_x1(int n) {
  Vector e = Vector::Zero(n);
  e[0] = 1.0;
  return Potential::affine_max({{e, 0.0}, {-e, 0.0}});
}

// A sample of every variant in dimension 3.
std::vector<Potential> variants() {
  const Vector c = (Vector(3) << 0.5, -1.0, 2.0).finished();
  std::vector<AffinePiece> pieces{{Vector::Unit(3, 0), 0.0},
                                  {-Vector::Unit(3, 0), 0.1},
                                  {Vector::Ones(3), -0.5},
                                  {(Vector(3) << 0.0, -2.0, 1.0).finished(), 0.2}};
  return {Potential::zero(3), Potential::linear(c), Potential::affine_max(pieces),
          Potential::scaled_norm(c, 1.5), Potential::quadratic(3, 0.7), abs_x1(3)};
}

}  // namespace

TEST_CASE("values") {
  CHECK(potentials::value(Potential::zero(2), v2(5, 6)) == 0.0);
  CHECK(potentials::value(abs_x1(2), v2(-2, 5)) == 2.0);
  CHECK(potentials::value(Potential::linear(v2(1, 2)), v2(3, 4)) == 11.0);
  CHECK(potentials::value(Potential::scaled_norm(v2(1, 1), 2.0), v2(4, 5)) ==
        doctest::Approx(10.0));
  CHECK(potentials::value(Potential::quadratic(2, 2.0), v2(1, 2)) == doctest::Approx(5.0));
}

TEST_CASE("min-norm subgradients at kinks") {
  CHECK(potentials::min_norm_subgradient(Potential::scaled_norm(Vector::Zero(2), 3.0),
                                         v2(0, 0))
            .norm() == 0.0);
  const auto corner = Potential::affine_max({{v2(1, 0), 0.0}, {v2(0, 1), 0.0}});
  const Vector g = potentials::min_norm_subgradient(corner, v2(0, 0));
  const Vector oracle = testing::min_norm_hull_bruteforce({v2(1, 0), v2(0, 1)});
  CHECK((g - oracle).norm() < 1e-10);
  CHECK(potentials::min_norm_subgradient(abs_x1(2), v2(0, 7)).norm() < 1e-12);
  // A unique active piece returns its gradient exactly.
  CHECK(potentials::min_norm_subgradient(abs_x1(2), v2(-0.3, 7)) == v2(-1, 0));
  CHECK(potentials::min_norm_subgradient(Potential::linear(v2(2, -1)), v2(9, 9)) == v2(2, -1));
}

TEST_CASE("tie tolerance controls which pieces count as active") {
  const auto p = abs_x1(2);
  CHECK(potentials::min_norm_subgradient(p, v2(1e-12, 0)).norm() < 1e-12);
  CHECK(potentials::min_norm_subgradient(p, v2(1e-12, 0), 0.0) == v2(1, 0));
}

TEST_CASE("Lipschitz constants") {
  const auto ball3 = ConvexBody::ball(Vector::Zero(2), 3.0);
  CHECK(potentials::lipschitz_constant(
            Potential::affine_max({{v2(3, 4), 0.0}, {v2(1, 0), 0.0}}), ball3) == 5.0);
  CHECK(potentials::lipschitz_constant(Potential::linear(v2(0, 2)), ball3) == 2.0);
  CHECK(potentials::lipschitz_constant(Potential::quadratic(2, 2.0), ball3) == 6.0);
  CHECK(potentials::lipschitz_constant(Potential::zero(2), ball3) == 0.0);
  CHECK(potentials::lipschitz_constant(Potential::scaled_norm(v2(0, 0), 1.5),
                                       ConvexBody::whole_space(2)) == 1.5);
  CHECK_THROWS_AS(potentials::lipschitz_constant(Potential::quadratic(2, 1.0),
                                                 ConvexBody::whole_space(2)),
                  Error);
}

TEST_CASE("infima") {
  const auto box = ConvexBody::box(v2(0, 0), v2(1, 1));
  const auto lin = potentials::infimum_over(Potential::linear(v2(1, 0)), box);
  CHECK(lin.value == 0.0);
  CHECK(lin.exact);
  CHECK(potentials::infimum_over(abs_x1(2), ConvexBody::ball(Vector::Zero(2), 1.0)).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  const auto p = Potential::affine_max(
      {{v2(1, 1), 0.0}, {v2(-1, 0), 0.0}, {v2(0, -1), 0.0}});
  const auto square = ConvexBody::box(v2(-1, -1), v2(1, 1));
  const double oracle = testing::grid_min_2d(
      [](double x, double y) { return std::max({x + y, -x, -y}); }, -1, 1, -1, 1, 2000);
  CHECK(oracle == doctest::Approx(0.0).epsilon(1e-12));  // frozen: 0 at the origin
  const auto est = potentials::infimum_over(p, square);
  CHECK(est.value == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(est.value >= oracle - 1e-12);

  const auto known = Potential::linear(v2(1, 0)).with_known_infimum(-4.0);
  CHECK(potentials::infimum_over(known, ConvexBody::whole_space(2)).value == -4.0);
  CHECK_THROWS_AS(potentials::infimum_over(Potential::linear(v2(1, 0)),
                                           ConvexBody::whole_space(2)),
                  Error);
}

TEST_CASE("monotone subgradient map, subgradient inequality and |g| <= L") {
  RandomStream s(17, 0, StreamRole::Property);
  const auto body = ConvexBody::ball(Vector::Zero(3), 2.0);
  for (const auto& p : variants()) {
    const double L = potentials::lipschitz_constant(p, body);
    double worst_monotone = 0.0, worst_subgrad = 0.0, worst_norm = 0.0;
    for (int i = 0; i < 10000; ++i) {
      Vector x(3), y(3);
      s.fill_gaussian(x);
      s.fill_gaussian(y);
      if (x.norm() > 2.0) x *= 1.9 / x.norm();
      if (y.norm() > 2.0) y *= 1.9 / y.norm();
      // Land some samples exactly on kinks.
      if (i % 10 == 0) x[0] = 0.0;
      const Vector gx = potentials::min_norm_subgradient(p, x);
      const Vector gy = potentials::min_norm_subgradient(p, y);
      worst_monotone = std::min(worst_monotone, (x - y).dot(gx - gy));
      worst_subgrad = std::min(worst_subgrad, potentials::value(p, y) - potentials::value(p, x) -
                                                  gx.dot(y - x));
      worst_norm = std::max(worst_norm, gx.norm() - L);
    }
    INFO(p.kind());
    CHECK(worst_monotone >= -1e-9);
    CHECK(worst_subgrad >= -1e-9);
    CHECK(worst_norm <= 1e-12);
  }
}

TEST_CASE("invalid potentials are rejected") {
  CHECK_THROWS_AS(Potential::affine_max({}), Error);
  CHECK_THROWS_AS(Potential::scaled_norm(v2(0, 0), -1.0), Error);
  CHECK_THROWS_AS(potentials::value(Potential::zero(2), Vector::Zero(3)), Error);
}
