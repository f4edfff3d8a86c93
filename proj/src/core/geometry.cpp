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

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "overloaded.hpp"

namespace plmc::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite(const Vector& v) { return v.allFinite(); }

// Signed distance past the halfspace; positive means violated.
double excess(const Halfspace& h, const Vector& x) {
  return (h.normal.dot(x) - h.offset) / h.normal.norm();
}

Vector project_halfspace(const Halfspace& h, const Vector& z) {
  const double over = h.normal.dot(z) - h.offset;
  if (over <= 0.0) return z;
  return z - (over / h.normal.squaredNorm()) * h.normal;
}

double max_excess(const Polytope& p, const Vector& x) {
  double worst = -kInf;
  for (const auto& h : p.constraints) worst = std::max(worst, excess(h, x));
  return worst;
}

Vector dykstra(const Polytope& poly, const Vector& y,
               const ProjectionOptions& options) {
  const std::size_t m = poly.constraints.size();
  std::vector<Vector> increments(m, Vector::Zero(y.size()));
  Vector x = y;
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const Vector start = x;
    double increment_change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector z = x + increments[i];
      x = project_halfspace(poly.constraints[i], z);
      const Vector next = z - x;
      increment_change += (next - increments[i]).squaredNorm();
      increments[i] = next;
    }
    const double moved = (x - start).squaredNorm() + increment_change;
    if (moved < options.tol * options.tol &&
        max_excess(poly, x) <= options.tol) {
      return x;
    }
  }
  throw Error(ErrorCode::NotConverged,
              "Dykstra projection did not converge within " +
                  std::to_string(options.max_sweeps) +
                  " sweeps (ill-conditioned constraints?)");
}

}  // namespace

ConvexBody ConvexBody::whole_space(int dim) {
  if (dim <= 0) {
    throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  }
  return ConvexBody(WholeSpace{dim}, dim);
}

ConvexBody ConvexBody::ball(Vector center, double radius) {
  if (center.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "ball: empty center");
  }
  if (!(radius > 0.0) || !std::isfinite(radius) || !all_finite(center)) {
    throw Error(ErrorCode::InvalidArgument,
                "ball: radius must be positive and finite");
  }
  const int dim = static_cast<int>(center.size());
  return ConvexBody(Ball{std::move(center), radius}, dim);
}

ConvexBody ConvexBody::box(Vector lower, Vector upper) {
  require_dimension(lower.size(), upper.size(), "box bounds");
  if (lower.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "box: empty bounds");
  }
  if (!all_finite(lower) || !all_finite(upper) ||
      !(lower.array() < upper.array()).all()) {
    throw Error(ErrorCode::InvalidArgument,
                "box: need finite lower < upper componentwise");
  }
  const int dim = static_cast<int>(lower.size());
  return ConvexBody(Box{std::move(lower), std::move(upper)}, dim);
}

ConvexBody ConvexBody::polytope(std::vector<Halfspace> constraints,
                                Vector interior_point) {
  if (constraints.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "halfspace intersection needs at least one constraint");
  }
  const auto dim = interior_point.size();
  for (const auto& h : constraints) {
    require_dimension(dim, h.normal.size(), "halfspace normal");
    if (!(h.normal.norm() > 0.0) || !all_finite(h.normal) ||
        !std::isfinite(h.offset)) {
      throw Error(ErrorCode::InvalidArgument,
                  "halfspace normal must be finite and nonzero");
    }
    if (!(h.normal.dot(interior_point) < h.offset)) {
      throw Error(ErrorCode::InvalidArgument,
                  "certified interior point violates or touches a constraint");
    }
  }
  return ConvexBody(
      Polytope{std::move(constraints), std::move(interior_point)},
      static_cast<int>(dim));
}

std::string ConvexBody::kind() const {
  return std::visit(overloaded{[](const WholeSpace&) { return "whole_space"; },
                               [](const Ball&) { return "ball"; },
                               [](const Box&) { return "box"; },
                               [](const Polytope&) { return "halfspaces"; }},
                    shape_);
}

bool ConvexBody::bounded() const noexcept {
  return std::isfinite(diameter());
}

double ConvexBody::diameter() const noexcept {
  return std::visit(
      overloaded{[](const WholeSpace&) { return kInf; },
                 [](const Ball& b) { return 2.0 * b.radius; },
                 [](const Box& b) { return (b.upper - b.lower).norm(); },
                 // Boundedness of a halfspace intersection is not certified.
                 [](const Polytope&) { return kInf; }},
      shape_);
}

Vector ConvexBody::interior_point() const {
  return std::visit(
      overloaded{[&](const WholeSpace& w) -> Vector { return Vector::Zero(w.dim); },
                 [](const Ball& b) -> Vector { return b.center; },
                 [](const Box& b) -> Vector { return 0.5 * (b.lower + b.upper); },
                 [](const Polytope& p) -> Vector { return p.interior_point; }},
      shape_);
}

Vector project(const ConvexBody& body, const Vector& x,
               const ProjectionOptions& options) {
  require_dimension(body.dimension(), x.size(), "project");
  return std::visit(
      overloaded{
          [&](const WholeSpace&) -> Vector { return x; },
          [&](const Ball& b) -> Vector {
            const Vector d = x - b.center;
            const double r = d.norm();
            if (r <= b.radius) return x;
            return b.center + (b.radius / r) * d;
          },
          [&](const Box& b) -> Vector {
            return x.cwiseMax(b.lower).cwiseMin(b.upper);
          },
          [&](const Polytope& p) -> Vector {
            if (max_excess(p, x) <= 0.0) return x;
            if (p.constraints.size() == 1) {
              return project_halfspace(p.constraints.front(), x);
            }
            return dykstra(p, x, options);
          }},
      body.shape());
}

bool contains(const ConvexBody& body, const Vector& x, double tol) {
  require_dimension(body.dimension(), x.size(), "contains");
  return std::visit(
      overloaded{
          [&](const WholeSpace&) { return x.allFinite(); },
          [&](const Ball& b) { return (x - b.center).norm() <= b.radius + tol; },
          [&](const Box& b) {
            return ((x.array() >= b.lower.array() - tol) &&
                    (x.array() <= b.upper.array() + tol))
                .all();
          },
          [&](const Polytope& p) { return max_excess(p, x) <= tol; }},
      body.shape());
}

double boundary_distance(const ConvexBody& body, const Vector& x) {
  // Points produced by a projection may sit a rounding error outside.
  constexpr double kSlack = 1e-12;
  if (!contains(body, x, kSlack)) {
    throw Error(ErrorCode::Domain, "boundary_distance: point outside body");
  }
  const double d = std::visit(
      overloaded{
          [&](const WholeSpace&) { return kInf; },
          [&](const Ball& b) { return b.radius - (x - b.center).norm(); },
          [&](const Box& b) {
            return std::min((x - b.lower).minCoeff(), (b.upper - x).minCoeff());
          },
          [&](const Polytope& p) { return -max_excess(p, x); }},
      body.shape());
  return std::max(d, 0.0);
}

}  // namespace plmc::geometry
