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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace plmc::potentials {

struct Zero {
  int dim;
};

/// phi(x) = <c, x>
struct Linear {
  Vector c;
};

/// One affine piece <a, x> + b.
struct AffinePiece {
  Vector a;
  double b;
};

/// phi(x) = max_i <a_i, x> + b_i
struct AffineMax {
  std::vector<AffinePiece> pieces;
};

/// phi(x) = slope * |x - center|
struct ScaledNorm {
  Vector center;
  double slope;
};

/// phi(x) = (alpha / 2) |x|^2. Only Lipschitz on bounded bodies.
struct Quadratic {
  int dim;
  double alpha;
};

using Form = std::variant<Zero, Linear, AffineMax, ScaledNorm, Quadratic>;

inline constexpr double kDefaultTieTol = 1e-9;

class Potential {
 public:
  static Potential zero(int dim);
  static Potential linear(Vector c);
  static Potential affine_max(std::vector<AffinePiece> pieces);
  static Potential scaled_norm(Vector center, double slope);
  static Potential quadratic(int dim, double alpha);

  /// Attach an analytic value of inf_K phi for the body the caller pairs
  /// this potential with.
  Potential with_known_infimum(double infimum) const;

  int dimension() const noexcept { return dim_; }
  const Form& form() const noexcept { return form_; }
  const std::optional<double>& known_infimum() const noexcept {
    return known_infimum_;
  }
  std::string kind() const;

 private:
  Potential(Form form, int dim) : form_(std::move(form)), dim_(dim) {}
  Form form_;
  int dim_;
  std::optional<double> known_infimum_;
};

double value(const Potential& p, const Vector& x);

/// The element of least Euclidean norm in the subdifferential at x.
/// AffineMax pieces within `tie_tol` of the max count as active.
Vector min_norm_subgradient(const Potential& p, const Vector& x,
                            double tie_tol = kDefaultTieTol);

/// sup over the body of the subgradient norm. Throws for a quadratic on a
/// body that is not known to be bounded.
double lipschitz_constant(const Potential& p, const geometry::ConvexBody& body);

/// Smallest beta with |grad phi(x)| <= beta (|x| + 1) on all of R^n.
double growth_slope(const Potential& p);

struct InfimumEstimate {
  double value;
  /// false when `value` came from subgradient descent and is only an upper
  /// estimate of the true infimum.
  bool exact;
};

/// inf over the body of phi. Closed form where one exists, the attached
/// known infimum if present, otherwise projected subgradient descent from
/// the body's interior point with steps proportional to 1/sqrt(t).
InfimumEstimate infimum_over(const Potential& p,
                             const geometry::ConvexBody& body,
                             int budget = 100000);

}  // namespace plmc::potentials
