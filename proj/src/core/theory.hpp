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

#include <limits>
#include <map>
#include <optional>
#include <string>

#include "error.hpp"
#include "geometry.hpp"
#include "potentials.hpp"

// Closed-form constants and bounds for projected Langevin Monte Carlo with
// a convex, L-Lipschitz potential on a convex body. Natural log throughout;
// r0 = +inf (unconstrained) is a legal input everywhere it appears.
namespace plmc::theory {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Default for the unspecified universal constant of the ball restriction
/// estimate.
inline constexpr double kDefaultRestrictionConstant = 16.0;

struct ProblemConstants {
  int n = 1;
  double L = 0.0;
  double r0 = kInfinity;
  double sigma0 = 0.0;
  double C_LS = kInfinity;
  double C_P = kInfinity;
  double beta = 0.0;
  double M = 0.0;
  double eps = 0.0;

  /// Throws on negative entries or C_P > C_LS (both finite).
  void validate() const;
};

struct StartConstants {
  double sigma0;
  double r0;
  double infimum;
  /// false when inf_K phi is a descent upper estimate, which makes sigma0
  /// an underestimate.
  bool infimum_exact;
};

/// sigma0 = (phi(x0) - inf_K phi) / n, r0 = d(x0, boundary).
/// Throws if x0 is not an interior point.
StartConstants sigma0_r0(const Vector& x0, const potentials::Potential& p,
                         const geometry::ConvexBody& body,
                         int infimum_budget = 100000);

struct DiscretizationBound {
  double A;
  double rhs;  // A k eta^{3/2}
};

/// A = (2 e^{1/2} + 1)(1 + sigma0)(n + 2 log k)^{1/2} / r0 + (7/6) L / n^{1/2}
/// bounds (1/n) W2^2(X_{k eta}, x_k) by A k eta^{3/2}. Requires k >= 1 and
/// eta < n / L^2 when L > 0.
DiscretizationBound discretization_bound(int n, long k, double eta, double L,
                                         double sigma0, double r0);

struct LogSobolevBound {
  double B;
  double rhs;  // 2 B e^{-k eta / 2 C_LS} + 2 A k eta^{3/2}
};

/// Uses n, r0, sigma0 and L from `c`; C_LS is passed separately.
LogSobolevBound logsob_bound(long k, double eta, double A, double C_LS,
                             const ProblemConstants& c);

struct Schedule {
  double eta;
  long k;
  double horizon;  // k * eta
  double A;
  double B;
  double rhs;
  int iterations;
  /// C_LS^3 / eps^2 * max(n / r0^2, L^2 / n): the order of k with constants
  /// and logarithms dropped. Commentary only.
  double asymptotic_k;
  /// eps^2 / C_LS^2 * min(r0^2 / n, n / L^2), same caveat.
  double asymptotic_eta;
};

inline constexpr long kDefaultMaxSteps = 1'000'000'000'000L;

/// Smallest horizon that pushes the entropy term to eps/2, then the
/// largest step (fixed point in k, at most 20 rounds) that keeps the
/// discretization term at eps/2. The returned pair is post-checked to give
/// logsob_bound(...).rhs <= eps. Throws if k would exceed `max_steps`.
Schedule schedule_logsob(const ProblemConstants& c,
                         long max_steps = kDefaultMaxSteps);

/// (4/n) C_P chi2_0 e^{-k eta / C_P} + 2 A k eta^{3/2}. For a random start,
/// A must already be built from E[(1 + sigma0) / r0].
double poincare_bound(double C_P, double chi2_0, long k, double eta, double A,
                      int n);

/// A with the start-dependent factor (1 + sigma0)/r0 replaced by its
/// expectation over a random start.
double discretization_constant_random_start(int n, long k, double L,
                                            double expected_ratio);

struct StartRatioEstimate {
  double mean;
  double standard_error;
  /// Fraction of draws that landed in the interior; only those contribute.
  double interior_fraction;
  bool infimum_exact;
};

/// Monte Carlo estimate of E[(1 + sigma0) / r0] over random starts (rows of
/// `starts`). Zero for the whole space, where r0 = +inf.
StartRatioEstimate estimate_start_ratio(const Eigen::MatrixXd& starts,
                                        const potentials::Potential& p,
                                        const geometry::ConvexBody& body,
                                        int infimum_budget = 100000);

struct WarmStartBound {
  double log_chi2;          // n(1 + sigma0) + (n/2) log(L^2 C_P / n)
  double covariance_scale;  // n / L^2
};

WarmStartBound chi2_warmstart_log_bound(int n, double L, double C_P,
                                        double sigma0);

/// sqrt(E[ell_t^2]) <= n (1 + sigma0) t / r0. Zero when r0 = +inf.
double local_time_bound(int n, double sigma0, double r0, double t);

/// E[max_{i <= k} |G_i|^2] <= e (n + 2 log k) for standard Gaussians in R^n.
double gaussian_max_bound(int n, long k);

/// W2^2(mu, mu_R) <= C M exp(-R / (C sqrt(M))), valid for R >= C sqrt(M).
double restriction_bound(double M, double R,
                         double C = kDefaultRestrictionConstant);

/// Smallest R >= C sqrt(M) with (1/n) C M exp(-R / (C sqrt M)) <= eps / 10.
double choose_restriction_radius(int n, double M, double eps,
                                 double C = kDefaultRestrictionConstant);

/// Absolute slack in the verdict rule. Coupled chains that agree exactly in
/// real arithmetic still differ by summation-order rounding (~1e-33).
inline constexpr double kRoundingAllowance = 1e-18;

/// A closed-form bound paired, optionally, with a Monte Carlo estimate.
struct BoundReport {
  std::string name;
  double bound = 0.0;
  std::map<std::string, double> inputs;
  std::optional<double> empirical;
  std::optional<double> standard_error;
  std::string note;

  /// empirical + se_multiplier * SE <= bound + kRoundingAllowance, or true
  /// with no estimate.
  bool satisfied(double se_multiplier = 2.0) const;
};

}  // namespace plmc::theory
