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

// Acceptance run: one PASS/FAIL line per criterion, exit 1 on any FAIL.
// Tolerances are fixed below and never adapted to the observed results.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "chains.hpp"
#include "geometry.hpp"
#include "potentials.hpp"
#include "rng.hpp"
#include "studies.hpp"
#include "theory.hpp"

using namespace plmc;
using geometry::ConvexBody;
using potentials::Potential;

namespace {

constexpr double kRegressionTol = 1e-9;
constexpr double kPropertyTol = 1e-9;
constexpr double kDykstraTol = 1e-6;
constexpr double kContractionFraction = 0.99;
constexpr int kReplicas = 200;
constexpr int kRefinement = 32;

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, title.c_str(),
              v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

// |x1| on the unit ball in R^4 started at the center.
struct BallSetup {
  int n = 4;
  ConvexBody body = ConvexBody::ball(Vector::Zero(4), 1.0);
  Potential phi = Potential::affine_max({{Vector::Unit(4, 0), 0.0}, {-Vector::Unit(4, 0), 0.0}});
  Vector x0 = Vector::Zero(4);
  double L = 1.0, sigma0 = 0.0, r0 = 1.0;
};

Verdict coupled_dominance() {
  const BallSetup s;
  const std::vector<double> etas{1e-3, 4e-3, 1.6e-2};
  double worst = -1e300;
  std::ostringstream detail;
  bool ok = true;
  for (double eta : etas) {
    const long K = std::lround(1.0 / eta);
    const chains::ChainConfig cfg(s.body, s.phi, s.x0, eta, K, 2026);
    const auto curve = chains::run_coupled(cfg, kRefinement, kReplicas);
    double eta_worst = -1e300;
    for (long k = 1; k <= K; ++k) {
      const double lhs = (curve[k].mean + 2.0 * curve[k].standard_error) / s.n;
      const double rhs = theory::discretization_bound(s.n, k, eta, s.L, s.sigma0, s.r0).rhs;
      eta_worst = std::max(eta_worst, lhs / rhs);
      if (lhs > rhs) ok = false;
    }
    worst = std::max(worst, eta_worst);
    detail << "eta=" << g(eta) << " max (mean+2SE)/bound=" << g(eta_worst) << "; ";
  }
  detail << "steps checked at all k";
  return {ok, detail.str()};
}

Verdict local_time() {
  const BallSetup s;
  const double eta = 1e-3;
  const std::vector<double> times{0.25, 0.5, 1.0};
  const long K = 1000;
  std::vector<std::vector<double>> ell2(times.size());
  const chains::ChainConfig base(s.body, s.phi, s.x0, eta, K, 2026);
  for (int r = 0; r < kReplicas; ++r) {
    const auto traj =
        chains::run_reflected_reference(base.with_replica(std::uint32_t(r)), kRefinement, K);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double ell = traj.ledger->ell_at(std::lround(times[i] / eta));
      ell2[i].push_back(ell * ell);
    }
  }
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto ms = testing::mean_se(ell2[i]);
    const double root = std::sqrt(ms.mean);
    const double se = root > 0.0 ? ms.se / (2.0 * root) : 0.0;
    const double bound = theory::local_time_bound(s.n, s.sigma0, s.r0, times[i]);
    if (root + 2.0 * se > bound) ok = false;
    detail << "t=" << g(times[i]) << " " << g(root) << "+2*" << g(se) << " vs " << g(bound)
           << "; ";
  }
  return {ok, detail.str()};
}

Verdict gaussian_max() {
  const int trials = 10000;
  bool ok = true;
  double worst = 0.0;
  for (int n : {1, 4, 16}) {
    for (long k : {1L, 10L, 100L}) {
      RandomStream rng(31, std::uint32_t(n * 1000 + k), StreamRole::Property);
      std::vector<double> maxima(trials);
      Vector gvec(n);
      for (int t = 0; t < trials; ++t) {
        double best = 0.0;
        for (long i = 0; i < k; ++i) {
          rng.fill_gaussian(gvec);
          best = std::max(best, gvec.squaredNorm());
        }
        maxima[t] = best;
      }
      const auto ms = testing::mean_se(maxima);
      const double bound = theory::gaussian_max_bound(n, k);
      worst = std::max(worst, (ms.mean + 3.0 * ms.se) / bound);
      if (ms.mean + 3.0 * ms.se > bound) ok = false;
    }
  }
  return {ok, "9 (n,k) cells, max (mean+3SE)/bound=" + g(worst)};
}

nlohmann::json run_study(const std::string& name, const std::string& config) {
  studies::RunOptions opts;
  opts.out_dir = std::filesystem::path(PLMC_ACCEPTANCE_OUT) / name;
  return studies::run_command("w2", config, opts).summary;
}

Verdict sampling_1d() {
  const auto s = run_study("criterion4", R"({
    "seed": 11,
    "body": {"type": "box", "lower": [0], "upper": [5]},
    "potential": {"type": "linear", "c": [1]},
    "x0": [2.5],
    "schedule": {"C_LS": 25, "eps": 500},
    "w2": {"mode": "chain_vs_oracle", "samples": 2000, "metric": "1d"}
  })");
  const double value = s["w2"]["value"], floor = s["w2"]["floor"];
  const double threshold = 2.0 * floor + 0.05;
  return {value <= threshold, "eta=" + g(s["eta"]) + " k=" + g(s["steps"]) + " w2_1d^2=" +
                                  g(value) + " floor=" + g(floor) + " threshold=" + g(threshold)};
}

Verdict sampling_ball() {
  const auto s = run_study("criterion5", R"({
    "seed": 5,
    "body": {"type": "ball", "dimension": 8, "radius": 1},
    "potential": {"type": "zero"},
    "schedule": {"C_LS": 1, "eps": 4},
    "w2": {"mode": "chain_vs_oracle", "samples": 2000, "metric": "sliced", "projections": 64}
  })");
  const double m2 = s["moments"]["chain_second_moment"];
  const double se = s["moments"]["chain_second_moment_se"];
  const double target = 8.0 / 10.0;
  const double value = s["w2"]["value"], floor = s["w2"]["floor"];
  const double threshold = 2.0 * floor + 0.05;
  const bool ok = std::fabs(m2 - target) <= 3.0 * se && value <= threshold;
  return {ok, "eta=" + g(s["eta"]) + " k=" + g(s["steps"]) + " E|x|^2=" + g(m2) + " (SE " +
                  g(se) + ", target 0.8) sliced W2^2=" + g(value) + " threshold=" + g(threshold)};
}

Verdict monotone_and_subgradient() {
  const Vector c = (Vector(3) << 0.5, -1.0, 2.0).finished();
  const std::vector<Potential> variants{
      Potential::zero(3), Potential::linear(c),
      Potential::affine_max({{Vector::Unit(3, 0), 0.0},
                             {-Vector::Unit(3, 0), 0.1},
                             {Vector::Ones(3), -0.5},
                             {(Vector(3) << 0.0, -2.0, 1.0).finished(), 0.2}}),
      Potential::scaled_norm(c, 1.5), Potential::quadratic(3, 0.7)};
  RandomStream rng(6, 0, StreamRole::Property);
  double worst = 0.0;
  for (const auto& p : variants) {
    for (int i = 0; i < 10000; ++i) {
      Vector x(3), y(3);
      rng.fill_gaussian(x);
      rng.fill_gaussian(y);
      if (i % 10 == 0) x[0] = 0.0;
      const Vector gx = potentials::min_norm_subgradient(p, x);
      const Vector gy = potentials::min_norm_subgradient(p, y);
      worst = std::max(worst, -(x - y).dot(gx - gy));
      worst = std::max(worst, -(potentials::value(p, y) - potentials::value(p, x) -
                                gx.dot(y - x)));
    }
  }
  return {worst <= kPropertyTol, "5 variants x 1e4 pairs, worst violation=" + g(worst)};
}

Verdict projection_correctness() {
  RandomStream rng(2024, 0, StreamRole::Property);
  auto gauss = [&](int n, double scale) {
    Vector v(n);
    rng.fill_gaussian(v);
    return Vector(scale * v);
  };
  auto polytope = [&](int n, int m, std::vector<testing::HalfspaceRow>& rows) {
    std::vector<geometry::Halfspace> hs;
    rows.clear();
    for (int i = 0; i < m; ++i) {
      Vector a = gauss(n, 1.0).normalized();
      const double b = 0.2 + rng.uniform();
      hs.push_back({a, b});
      rows.push_back({a, b});
    }
    return ConvexBody::polytope(hs, Vector::Zero(n));
  };
  std::vector<testing::HalfspaceRow> rows;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 2 + trial % 5;
    const auto body = polytope(n, m, rows);
    const Vector x = gauss(n, 2.0);
    worst = std::max(worst, (geometry::project(body, x) -
                             testing::project_polytope_bruteforce(rows, x)).norm());
  }
  const double tol = geometry::ProjectionOptions{}.tol;
  const std::vector<ConvexBody> bodies{
      ConvexBody::ball(Vector::Constant(3, 0.3), 1.5),
      ConvexBody::box(Vector::Constant(3, -1.0), Vector::Constant(3, 0.5)), polytope(3, 6, rows),
      ConvexBody::whole_space(3)};
  long property_failures = 0;
  for (const auto& body : bodies) {
    for (int i = 0; i < 1000; ++i) {
      const Vector x = gauss(3, 2.0), y = gauss(3, 2.0);
      const Vector px = geometry::project(body, x), py = geometry::project(body, y);
      if ((px - py).norm() > (x - y).norm() + 10 * tol) ++property_failures;
      if ((geometry::project(body, px) - px).norm() > tol) ++property_failures;
    }
  }
  return {worst <= kDykstraTol && property_failures == 0,
          "100 polytopes max deviation=" + g(worst) + ", property failures=" +
              std::to_string(property_failures)};
}

Verdict contraction() {
  const BallSetup s;
  const Vector alt = (Vector(4) << 0.5, -0.3, 0.2, 0.0).finished();
  long total = 0, good = 0;
  for (double eta : {1e-3, 4e-3, 1.6e-2}) {
    const long K = std::lround(1.0 / eta);
    const double slack = 5.0 * s.L * eta / kRefinement;
    const chains::ChainConfig base(s.body, s.phi, s.x0, eta, K, 77);
    for (int r = 0; r < kReplicas; ++r) {
      const auto d = chains::run_parallel_coupled_diffusions(
          base.with_replica(std::uint32_t(r)), alt, kRefinement);
      for (std::size_t k = 1; k < d.size(); ++k) {
        ++total;
        if (d[k] <= d[k - 1] + slack) ++good;
      }
    }
  }
  const double frac = double(good) / double(total);
  return {frac >= kContractionFraction,
          std::to_string(good) + "/" + std::to_string(total) + " replica-steps within 5*L*delta (" +
              g(100.0 * frac) + "%)"};
}

Verdict formula_regression() {
  theory::ProblemConstants c;
  c.n = 1;
  c.L = 0.0;
  c.r0 = 1.0;
  c.sigma0 = 0.0;
  c.C_LS = 1.0;
  struct Row {
    const char* name;
    double got, want;
  };
  const std::vector<Row> rows{
      {"A", theory::discretization_bound(4, 100, 0.01, 2.0, 0.0, 1.0).A, 16.786165050207874},
      {"B", theory::logsob_bound(10, 0.1, 0.0, 1.0, c).B, 4.0},
      {"warm start", theory::chi2_warmstart_log_bound(2, 1.0, 2.0, 0.0).log_chi2, 2.0},
      {"local time", theory::local_time_bound(2, 0.0, 0.5, 1.0), 4.0},
      {"radius", theory::choose_restriction_radius(4, 4.0, 0.1), 236.08828506329192}};
  bool ok = true;
  std::ostringstream detail;
  for (const auto& r : rows) {
    const double e = rel_err(r.got, r.want);
    if (!(e <= kRegressionTol)) ok = false;
    detail << r.name << "=" << std::setprecision(12) << r.got << " ";
  }
  return {ok, detail.str()};
}

Verdict schedule_round_trips() {
  bool ok = true;
  double worst = 0.0;
  for (double C_LS : {0.5, 1.0, 4.0}) {
    for (double eps : {2.0, 1.0, 0.5}) {
      theory::ProblemConstants c;
      c.n = 4;
      c.L = 1.0;
      c.r0 = 1.0;
      c.sigma0 = 0.0;
      c.C_LS = C_LS;
      c.eps = eps;
      const auto s = theory::schedule_logsob(c);
      const double A = theory::discretization_bound(4, s.k, s.eta, 1.0, 0.0, 1.0).A;
      const double rhs = theory::logsob_bound(s.k, s.eta, A, C_LS, c).rhs;
      worst = std::max(worst, rhs / eps);
      if (!(rhs <= eps)) ok = false;
    }
  }
  return {ok, "3x3 (C_LS, eps) grid, max bound/eps=" + g(worst)};
}

}  // namespace

int main() {
  criterion(1, "coupled discretization error dominated by A k eta^1.5", coupled_dominance);
  criterion(2, "local time below n(1+sigma0)t/r0", local_time);
  criterion(3, "Gaussian maximum below e(n + 2 ln k)", gaussian_max);
  criterion(4, "1-d truncated exponential sampled within W2 threshold", sampling_1d);
  criterion(5, "uniform ball second moment and sliced W2", sampling_ball);
  criterion(6, "monotone subgradient map and subgradient inequality", monotone_and_subgradient);
  criterion(7, "projection matches brute force, nonexpansive and idempotent",
            projection_correctness);
  criterion(8, "synchronously coupled reflected diffusions contract", contraction);
  criterion(9, "closed-form constants regression", formula_regression);
  criterion(10, "schedule round trips", schedule_round_trips);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
