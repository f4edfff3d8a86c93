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

#include "potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minnorm.hpp"
#include "overloaded.hpp"

namespace plmc::potentials {

using geometry::ConvexBody;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double piece_value(const AffinePiece& piece, const Vector& x) {
  return piece.a.dot(x) + piece.b;
}

double max_piece_norm(const AffineMax& f) {
  double best = 0.0;
  for (const auto& piece : f.pieces) best = std::max(best, piece.a.norm());
  return best;
}

// Projected normalized subgradient descent. Step sizes s/sqrt(t) with s
// chosen so the steps sum to about ten diameters over the budget.
InfimumEstimate descend(const Potential& p, const ConvexBody& body,
                        int budget) {
  if (budget <= 0) {
    throw Error(ErrorCode::InvalidArgument, "infimum_over: budget must be > 0");
  }
  const double diameter = body.bounded() ? body.diameter() : 1.0;
  const double scale = 5.0 * diameter / std::sqrt(static_cast<double>(budget));
  const double runaway = 1e6 * (1.0 + body.interior_point().norm() + diameter);
  Vector x = body.interior_point();
  double best = value(p, x);
  for (int t = 1; t <= budget; ++t) {
    const Vector g = min_norm_subgradient(p, x);
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      // 0 in the subdifferential: x is a global minimizer lying in K.
      return {std::min(best, value(p, x)), true};
    }
    x = geometry::project(body, x - (scale / std::sqrt(double(t)) / gnorm) * g);
    best = std::min(best, value(p, x));
    if (!std::isfinite(best) || x.norm() > runaway) {
      throw Error(ErrorCode::Domain,
                  "infimum_over: descent diverged; body looks unbounded for "
                  "this potential and no known infimum was supplied");
    }
  }
  return {best, false};
}

}  // namespace

Potential Potential::zero(int dim) {
  if (dim <= 0) throw Error(ErrorCode::InvalidArgument, "dimension must be > 0");
  return Potential(Zero{dim}, dim);
}

Potential Potential::linear(Vector c) {
  if (c.size() == 0 || !c.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "linear: need a finite vector c");
  }
  const int dim = static_cast<int>(c.size());
  return Potential(Linear{std::move(c)}, dim);
}

Potential Potential::affine_max(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) {
    throw Error(ErrorCode::InvalidArgument, "affine_max: need at least one piece");
  }
  const auto dim = pieces.front().a.size();
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "affine_max: empty slope");
  for (const auto& piece : pieces) {
    require_dimension(dim, piece.a.size(), "affine_max piece");
    if (!piece.a.allFinite() || !std::isfinite(piece.b)) {
      throw Error(ErrorCode::InvalidArgument, "affine_max: non-finite piece");
    }
  }
  return Potential(AffineMax{std::move(pieces)}, static_cast<int>(dim));
}

Potential Potential::scaled_norm(Vector center, double slope) {
  if (center.size() == 0 || !center.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "scaled_norm: need a finite center");
  }
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw Error(ErrorCode::InvalidArgument, "scaled_norm: slope must be > 0");
  }
  const int dim = static_cast<int>(center.size());
  return Potential(ScaledNorm{std::move(center), slope}, dim);
}

Potential Potential::quadratic(int dim, double alpha) {
  if (dim <= 0) throw Error(ErrorCode::InvalidArgument, "dimension must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "quadratic: alpha must be > 0");
  }
  return Potential(Quadratic{dim, alpha}, dim);
}

Potential Potential::with_known_infimum(double infimum) const {
  if (!std::isfinite(infimum)) {
    throw Error(ErrorCode::InvalidArgument, "known infimum must be finite");
  }
  Potential copy = *this;
  copy.known_infimum_ = infimum;
  return copy;
}

std::string Potential::kind() const {
  return std::visit(overloaded{[](const Zero&) { return "zero"; },
                               [](const Linear&) { return "linear"; },
                               [](const AffineMax&) { return "affine_max"; },
                               [](const ScaledNorm&) { return "scaled_norm"; },
                               [](const Quadratic&) { return "quadratic"; }},
                    form_);
}

double value(const Potential& p, const Vector& x) {
  require_dimension(p.dimension(), x.size(), "potential value");
  return std::visit(
      overloaded{[](const Zero&) { return 0.0; },
                 [&](const Linear& f) { return f.c.dot(x); },
                 [&](const AffineMax& f) {
                   double best = -kInf;
                   for (const auto& piece : f.pieces) {
                     best = std::max(best, piece_value(piece, x));
                   }
                   return best;
                 },
                 [&](const ScaledNorm& f) { return f.slope * (x - f.center).norm(); },
                 [&](const Quadratic& f) { return 0.5 * f.alpha * x.squaredNorm(); }},
      p.form());
}

Vector min_norm_subgradient(const Potential& p, const Vector& x,
                            double tie_tol) {
  require_dimension(p.dimension(), x.size(), "subgradient");
  return std::visit(
      overloaded{
          [&](const Zero&) -> Vector { return Vector::Zero(x.size()); },
          [&](const Linear& f) -> Vector { return f.c; },
          [&](const AffineMax& f) -> Vector {
            const double top = value(p, x);
            std::vector<Vector> active;
            for (const auto& piece : f.pieces) {
              if (piece_value(piece, x) >= top - tie_tol) active.push_back(piece.a);
            }
            if (active.size() == 1) return active.front();
            return wolfe_min_norm_point(active).point;
          },
          [&](const ScaledNorm& f) -> Vector {
            const Vector d = x - f.center;
            const double r = d.norm();
            if (r == 0.0) return Vector::Zero(x.size());
            return (f.slope / r) * d;
          },
          [&](const Quadratic& f) -> Vector { return f.alpha * x; }},
      p.form());
}

double lipschitz_constant(const Potential& p, const ConvexBody& body) {
  require_dimension(p.dimension(), body.dimension(), "lipschitz_constant");
  return std::visit(
      overloaded{
          [](const Zero&) { return 0.0; },
          [](const Linear& f) { return f.c.norm(); },
          [](const AffineMax& f) { return max_piece_norm(f); },
          [](const ScaledNorm& f) { return f.slope; },
          [&](const Quadratic& f) {
            return std::visit(
                overloaded{
                    [&](const geometry::Ball& b) {
                      return f.alpha * (b.center.norm() + b.radius);
                    },
                    [&](const geometry::Box& b) {
                      const Vector corner =
                          b.lower.cwiseAbs().cwiseMax(b.upper.cwiseAbs());
                      return f.alpha * corner.norm();
                    },
                    [](const auto&) -> double {
                      throw Error(ErrorCode::Domain,
                                  "quadratic potential is only Lipschitz on a "
                                  "bounded body (ball or box)");
                    }},
                body.shape());
          }},
      p.form());
}

double growth_slope(const Potential& p) {
  return std::visit(overloaded{[](const Zero&) { return 0.0; },
                               [](const Linear& f) { return f.c.norm(); },
                               [](const AffineMax& f) { return max_piece_norm(f); },
                               [](const ScaledNorm& f) { return f.slope; },
                               [](const Quadratic& f) { return f.alpha; }},
                    p.form());
}

InfimumEstimate infimum_over(const Potential& p, const ConvexBody& body,
                             int budget) {
  require_dimension(p.dimension(), body.dimension(), "infimum_over");
  if (p.known_infimum()) return {*p.known_infimum(), true};
  return std::visit(
      overloaded{
          [](const Zero&) -> InfimumEstimate { return {0.0, true}; },
          [&](const ScaledNorm& f) -> InfimumEstimate {
            const Vector nearest = geometry::project(body, f.center);
            return {f.slope * (nearest - f.center).norm(), true};
          },
          [&](const Quadratic& f) -> InfimumEstimate {
            const Vector nearest =
                geometry::project(body, Vector::Zero(body.dimension()));
            return {0.5 * f.alpha * nearest.squaredNorm(), true};
          },
          [&](const Linear& f) -> InfimumEstimate {
            return std::visit(
                overloaded{
                    [&](const geometry::WholeSpace&) -> InfimumEstimate {
                      if (f.c.norm() == 0.0) return {0.0, true};
                      throw Error(ErrorCode::Domain,
                                  "infimum_over: linear potential is unbounded "
                                  "below on the whole space");
                    },
                    [&](const geometry::Ball& b) -> InfimumEstimate {
                      return {f.c.dot(b.center) - b.radius * f.c.norm(), true};
                    },
                    [&](const geometry::Box& b) -> InfimumEstimate {
                      return {f.c.cwiseProduct(b.lower)
                                  .cwiseMin(f.c.cwiseProduct(b.upper))
                                  .sum(),
                              true};
                    },
                    [&](const geometry::Polytope&) -> InfimumEstimate {
                      return descend(p, body, budget);
                    }},
                body.shape());
          },
          [&](const AffineMax&) -> InfimumEstimate {
            const InfimumEstimate found = descend(p, body, budget);
            // On the whole space only a zero subgradient certifies the value.
            if (!found.exact &&
                std::holds_alternative<geometry::WholeSpace>(body.shape())) {
              throw Error(ErrorCode::Domain,
                          "infimum_over: unbounded body with no known infimum "
                          "and no descent certificate");
            }
            return found;
          }},
      p.form());
}

}  // namespace plmc::potentials
