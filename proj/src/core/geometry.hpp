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

#include <string>
#include <variant>
#include <vector>

#include "error.hpp"

namespace plmc::geometry {

struct WholeSpace {
  int dim;
};

struct Ball {
  Vector center;
  double radius;
};

struct Box {
  Vector lower;
  Vector upper;
};

/// The halfspace <normal, x> <= offset.
struct Halfspace {
  Vector normal;
  double offset;
};

struct Polytope {
  std::vector<Halfspace> constraints;
  Vector interior_point;
};

using Shape = std::variant<WholeSpace, Ball, Box, Polytope>;

/// A closed convex set with nonempty interior, immutable once built.
///
/// New body types plug in by adding a Shape alternative and providing the
/// three oracles below (project, contains, boundary_distance); nothing else
/// in the library looks inside the variant except interior_point() and
/// diameter().
class ConvexBody {
 public:
  static ConvexBody whole_space(int dim);
  static ConvexBody ball(Vector center, double radius);
  static ConvexBody box(Vector lower, Vector upper);
  /// Throws unless `interior_point` satisfies every constraint strictly.
  static ConvexBody polytope(std::vector<Halfspace> constraints,
                             Vector interior_point);

  int dimension() const noexcept { return dim_; }
  const Shape& shape() const noexcept { return shape_; }
  std::string kind() const;

  bool bounded() const noexcept;
  /// Upper bound on the diameter; +inf when the body is not known to be
  /// bounded.
  double diameter() const noexcept;
  Vector interior_point() const;

 private:
  ConvexBody(Shape shape, int dim) : shape_(std::move(shape)), dim_(dim) {}
  Shape shape_;
  int dim_;
};

struct ProjectionOptions {
  double tol = 1e-10;
  int max_sweeps = 10000;
};

/// Euclidean projection. Closed form for every shape except a polytope with
/// two or more constraints, which runs Dykstra's alternating projection.
Vector project(const ConvexBody& body, const Vector& x,
               const ProjectionOptions& options = {});

/// Every defining constraint holds within `tol` (measured as a distance).
bool contains(const ConvexBody& body, const Vector& x, double tol);

/// d(x, boundary). +inf for the whole space. Throws if x is outside.
double boundary_distance(const ConvexBody& body, const Vector& x);

}  // namespace plmc::geometry
