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

#include "theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace plmc::theory {

namespace {

// 2 e^{1/2} + 1
const double kLocalTimeFactor = 2.0 * std::sqrt(std::numbers::e) + 1.0;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::Domain, what);
}

void require_step_condition(int n, double eta, double L) {
  if (L > 0.0 && !(eta < n / (L * L))) {
    std::ostringstream msg;
    msg << "eta = " << eta << " violates eta < n / L^2 = " << n / (L * L);
    throw Error(ErrorCode::Domain, msg.str());
  }
}

double constant_A(int n, long k, double L, double start_ratio) {
  const double boundary_term =
      start_ratio == 0.0
          ? 0.0
          : kLocalTimeFactor * std::sqrt(n + 2.0 * std::log(double(k))) *
                start_ratio;
  return boundary_term + (7.0 / 6.0) * L / std::sqrt(double(n));
}

double constant_B(const ProblemConstants& c, double C_LS) {
  return 4.0 * C_LS *
         (1.0 + std::log(std::max(C_LS, 1.0) * c.n / std::min(c.r0, 1.0)) +
          c.sigma0 + c.L / c.n);
}

}  // namespace

void ProblemConstants::validate() const {
  require(n >= 1, "n must be >= 1");
  for (double v : {L, r0, sigma0, C_LS, C_P, beta, M, eps}) {
    require(v >= 0.0, "problem constants must be nonnegative");
  }
  if (std::isfinite(C_P) && std::isfinite(C_LS)) {
    require(C_P <= C_LS, "Poincare constant must not exceed log-Sobolev constant");
  }
}

StartConstants sigma0_r0(const Vector& x0, const potentials::Potential& p,
                         const geometry::ConvexBody& body, int infimum_budget) {
  require_dimension(body.dimension(), x0.size(), "sigma0_r0");
  const double r0 = geometry::boundary_distance(body, x0);
  if (!(r0 > 0.0)) {
    throw Error(ErrorCode::Domain,
                "x0 lies on the boundary (r0 = 0); the discretization bound "
                "needs an interior start");
  }
  const auto inf = potentials::infimum_over(p, body, infimum_budget);
  const double gap = potentials::value(p, x0) - inf.value;
  return {std::max(gap, 0.0) / body.dimension(), r0, inf.value, inf.exact};
}

DiscretizationBound discretization_bound(int n, long k, double eta, double L,
                                         double sigma0, double r0) {
  require(n >= 1, "n must be >= 1");
  require(k >= 1, "k must be >= 1");
  require(eta > 0.0 && std::isfinite(eta), "eta must be positive");
  require(L >= 0.0 && sigma0 >= 0.0, "L and sigma0 must be nonnegative");
  require(r0 > 0.0, "r0 must be positive");
  require_step_condition(n, eta, L);
  const double A = constant_A(n, k, L, std::isfinite(r0) ? (1.0 + sigma0) / r0 : 0.0);
  return {A, A * double(k) * std::pow(eta, 1.5)};
}

double discretization_constant_random_start(int n, long k, double L,
                                            double expected_ratio) {
  require(n >= 1 && k >= 1, "n and k must be >= 1");
  require(expected_ratio >= 0.0, "expected (1 + sigma0)/r0 must be >= 0");
  return constant_A(n, k, L, expected_ratio);
}

LogSobolevBound logsob_bound(long k, double eta, double A, double C_LS,
                             const ProblemConstants& c) {
  if (!std::isfinite(C_LS)) {
    throw Error(ErrorCode::Domain, "log-Sobolev bound needs a finite C_LS");
  }
  require(C_LS > 0.0, "C_LS must be positive");
  require(k >= 0 && eta > 0.0 && A >= 0.0, "bad k, eta or A");
  require(c.n >= 1 && c.r0 > 0.0, "bad n or r0");
  const double B = constant_B(c, C_LS);
  const double t = double(k) * eta;
  return {B, 2.0 * B * std::exp(-t / (2.0 * C_LS)) +
                 2.0 * A * t * std::sqrt(eta)};
}

Schedule schedule_logsob(const ProblemConstants& c, long max_steps) {
  c.validate();
  if (!std::isfinite(c.C_LS) || !(c.C_LS > 0.0)) {
    throw Error(ErrorCode::Domain, "schedule needs a finite positive C_LS");
  }
  require(c.eps > 0.0, "eps must be positive");
  require(c.r0 > 0.0, "r0 must be positive");

  const double B = constant_B(c, c.C_LS);
  const double ratio = std::isfinite(c.r0) ? (1.0 + c.sigma0) / c.r0 : 0.0;
  const double step_cap =
      c.L > 0.0 ? std::nextafter(c.n / (c.L * c.L), 0.0) : kInfinity;
  const double half = 0.5 * c.eps;

  // Entropy term 2B e^{-T/2C} <= eps/2.
  const double horizon = std::max(2.0 * c.C_LS * std::log(4.0 * B / c.eps), 0.0);

  Schedule s{};
  s.B = B;
  if (horizon == 0.0) {
    // Any positive horizon already meets the first term; take one step.
    const double A = constant_A(c.n, 1, c.L, ratio);
    double eta = A > 0.0 ? std::pow(half / (2.0 * A), 2.0 / 3.0) : 1.0;
    eta = std::min(eta, step_cap);
    s.eta = eta;
    s.k = 1;
    s.A = A;
    s.iterations = 1;
  } else {
    long k = 1;
    double eta = 0.0;
    bool converged = false;
    for (int it = 1; it <= 20; ++it) {
      s.iterations = it;
      const double A = constant_A(c.n, k, c.L, ratio);
      // Discretization term 2 A T sqrt(eta) <= eps/2.
      eta = A > 0.0 ? std::pow(half / (2.0 * A * horizon), 2.0) : horizon;
      eta = std::min(eta, step_cap);
      const double k_real = std::ceil(horizon / eta);
      if (!(k_real <= double(max_steps))) {
        std::ostringstream msg;
        msg << "no feasible eta: eps = " << c.eps << " needs about " << k_real
            << " steps, above the budget of " << max_steps;
        throw Error(ErrorCode::Domain, msg.str());
      }
      const long next = std::max(1L, static_cast<long>(k_real));
      if (next == k) {
        converged = true;
        break;
      }
      k = next;
    }
    if (!converged) {
      throw Error(ErrorCode::NotConverged,
                  "schedule: fixed point in k did not converge in 20 rounds");
    }
    s.k = k;
    s.eta = horizon / double(k);  // k eta == horizon exactly, eta <= solved eta
    s.A = constant_A(c.n, k, c.L, ratio);
  }
  s.horizon = double(s.k) * s.eta;
  s.rhs = logsob_bound(s.k, s.eta, s.A, c.C_LS, c).rhs;
  if (!(s.rhs <= c.eps * (1.0 + 1e-12))) {
    throw Error(ErrorCode::Internal, "schedule post-check failed: rhs > eps");
  }

  const double r0_sq = c.r0 * c.r0;
  const double eps_sq = c.eps * c.eps;
  s.asymptotic_k = std::pow(c.C_LS, 3) / eps_sq *
                   std::max(c.n / r0_sq, c.L * c.L / c.n);
  s.asymptotic_eta = eps_sq / (c.C_LS * c.C_LS) *
                     std::min(r0_sq / c.n, c.L > 0.0 ? c.n / (c.L * c.L) : kInfinity);
  return s;
}

double poincare_bound(double C_P, double chi2_0, long k, double eta, double A,
                      int n) {
  require(C_P > 0.0 && std::isfinite(C_P), "C_P must be positive and finite");
  require(chi2_0 >= 0.0 && std::isfinite(chi2_0), "chi2_0 must be finite and >= 0");
  require(k >= 0 && eta >= 0.0 && A >= 0.0 && n >= 1, "bad k, eta, A or n");
  const double t = double(k) * eta;
  return 4.0 / n * C_P * chi2_0 * std::exp(-t / C_P) +
         2.0 * A * t * std::sqrt(eta);
}

StartRatioEstimate estimate_start_ratio(const Eigen::MatrixXd& starts,
                                        const potentials::Potential& p,
                                        const geometry::ConvexBody& body,
                                        int infimum_budget) {
  require_dimension(body.dimension(), starts.cols(), "start samples");
  require(starts.rows() >= 2, "need at least two start samples");
  if (std::holds_alternative<geometry::WholeSpace>(body.shape())) {
    return {0.0, 0.0, 1.0, true};
  }
  const auto inf = potentials::infimum_over(p, body, infimum_budget);
  std::vector<double> ratios;
  for (Eigen::Index i = 0; i < starts.rows(); ++i) {
    const Vector x = starts.row(i).transpose();
    if (!geometry::contains(body, x, 0.0)) continue;
    const double r0 = geometry::boundary_distance(body, x);
    if (!(r0 > 0.0)) continue;
    const double sigma0 =
        std::max(potentials::value(p, x) - inf.value, 0.0) / body.dimension();
    ratios.push_back((1.0 + sigma0) / r0);
  }
  const double fraction = double(ratios.size()) / double(starts.rows());
  if (ratios.size() < 2) {
    throw Error(ErrorCode::Domain,
                "fewer than two random starts fell inside the body");
  }
  double sum = 0.0;
  for (double r : ratios) sum += r;
  const double count = double(ratios.size());
  const double mean = sum / count;
  double ss = 0.0;
  for (double r : ratios) ss += (r - mean) * (r - mean);
  return {mean, std::sqrt(ss / (count - 1.0) / count), fraction, inf.exact};
}

WarmStartBound chi2_warmstart_log_bound(int n, double L, double C_P,
                                        double sigma0) {
  require(n >= 1, "n must be >= 1");
  require(L > 0.0, "warm start needs L > 0");
  require(C_P > 0.0 && std::isfinite(C_P), "C_P must be positive and finite");
  require(sigma0 >= 0.0, "sigma0 must be >= 0");
  const double log_chi2 =
      n * (1.0 + sigma0) + 0.5 * n * std::log(L * L * C_P / n);
  return {log_chi2, n / (L * L)};
}

double local_time_bound(int n, double sigma0, double r0, double t) {
  require(n >= 1 && sigma0 >= 0.0 && r0 > 0.0 && t >= 0.0,
          "bad local-time bound inputs");
  if (!std::isfinite(r0)) return 0.0;
  return n * (1.0 + sigma0) * t / r0;
}

double gaussian_max_bound(int n, long k) {
  require(n >= 1 && k >= 1, "n and k must be >= 1");
  return std::numbers::e * (n + 2.0 * std::log(double(k)));
}

double restriction_bound(double M, double R, double C) {
  require(M > 0.0 && C > 0.0, "M and C must be positive");
  const double floor = C * std::sqrt(M);
  if (R < floor) {
    std::ostringstream msg;
    msg << "restriction estimate needs R >= C sqrt(M) = " << floor
        << ", got R = " << R;
    throw Error(ErrorCode::Domain, msg.str());
  }
  return C * M * std::exp(-R / floor);
}

double choose_restriction_radius(int n, double M, double eps, double C) {
  require(n >= 1 && M > 0.0 && eps > 0.0 && C > 0.0, "bad restriction inputs");
  return C * std::sqrt(M) * std::max(1.0, std::log(10.0 * C * M / (n * eps)));
}

bool BoundReport::satisfied(double se_multiplier) const {
  if (!empirical) return true;
  return *empirical + se_multiplier * standard_error.value_or(0.0) <=
         bound + kRoundingAllowance;
}

}  // namespace plmc::theory
