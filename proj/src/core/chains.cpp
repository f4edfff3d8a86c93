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

#include "chains.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"

namespace plmc::chains {

namespace {

void validate(const ConvexBody& body, const Potential& potential,
              const Vector& x0, double eta, long steps, double lipschitz) {
  require_dimension(body.dimension(), potential.dimension(), "potential");
  require_dimension(body.dimension(), x0.size(), "x0");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::InvalidArgument, "eta must be positive and finite");
  }
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be >= 0");
  if (!geometry::contains(body, x0, kMembershipTol)) {
    throw Error(ErrorCode::Domain, "x0 must lie in the body");
  }
  const double n = body.dimension();
  if (lipschitz > 0.0 && !(eta < n / (lipschitz * lipschitz))) {
    std::ostringstream msg;
    msg << "step size eta = " << eta << " violates eta < n / L^2 = "
        << n / (lipschitz * lipschitz) << " (n = " << n << ", L = " << lipschitz
        << "), the step-size hypothesis of the discretization bound";
    throw Error(ErrorCode::Domain, msg.str());
  }
}

// Fine step of the reflected reference: y = x + zeta - (delta/2) g(x),
// X = P(y), and the push-back y - X goes into the ledger accumulators.
Vector reflected_fine_step(const Vector& x, const Vector& zeta, double delta,
                           const ChainConfig& cfg, double& ell, Vector& phi) {
  const Vector g = potentials::min_norm_subgradient(cfg.potential(), x, cfg.tie_tol);
  const Vector y = x + zeta - (0.5 * delta) * g;
  Vector next = geometry::project(cfg.body(), y, cfg.projection);
  const Vector push = y - next;
  ell += push.norm();
  phi += push;
  return next;
}

void require_refinement(int refinement) {
  if (refinement < 1) {
    throw Error(ErrorCode::InvalidArgument, "refinement factor must be >= 1");
  }
}

void record(Trajectory& traj, long step, const Vector& x) {
  traj.steps.push_back(step);
  traj.points.push_back(x);
}

bool due(long step, long total, long stride) {
  return step % stride == 0 || step == total;
}

}  // namespace

ChainConfig::ChainConfig(ConvexBody body, Potential potential, Vector x0,
                         double eta, long steps, std::uint64_t seed,
                         std::uint32_t replica_id,
                         std::optional<double> lipschitz)
    : body_(std::move(body)),
      potential_(std::move(potential)),
      x0_(std::move(x0)),
      eta_(eta),
      steps_(steps),
      seed_(seed),
      replica_id_(replica_id),
      lipschitz_(0.0) {
  require_dimension(body_.dimension(), potential_.dimension(), "potential");
  lipschitz_ = lipschitz ? *lipschitz
                         : potentials::lipschitz_constant(potential_, body_);
  validate(body_, potential_, x0_, eta_, steps_, lipschitz_);
}

ChainConfig ChainConfig::with_replica(std::uint32_t replica_id) const {
  ChainConfig copy = *this;
  copy.replica_id_ = replica_id;
  return copy;
}

ChainConfig ChainConfig::with_start(Vector x0) const {
  validate(body_, potential_, x0, eta_, steps_, lipschitz_);
  ChainConfig copy = *this;
  copy.x0_ = std::move(x0);
  return copy;
}

ChainConfig ChainConfig::with_steps(long steps) const {
  validate(body_, potential_, x0_, eta_, steps, lipschitz_);
  ChainConfig copy = *this;
  copy.steps_ = steps;
  return copy;
}

BrownianSource::BrownianSource(std::uint64_t seed, std::uint32_t replica_id,
                               int dim, double eta, int refinement)
    : stream_(seed, replica_id, StreamRole::Brownian),
      delta_(eta / refinement),
      fine_scale_(std::sqrt(eta / refinement)),
      coarse_(Vector::Zero(dim)) {
  require_refinement(refinement);
  fine_.assign(refinement, Vector::Zero(dim));
}

const Vector& BrownianSource::next_interval() {
  coarse_.setZero();
  for (auto& z : fine_) {
    stream_.fill_gaussian(z);
    z *= fine_scale_;
    coarse_ += z;
  }
  return coarse_;
}

double LocalTimeLedger::ell_at(long k) const {
  if (k < 0 || k > static_cast<long>(ell_increments.size())) {
    throw Error(ErrorCode::InvalidArgument, "ledger: step out of range");
  }
  double total = 0.0;
  for (long i = 0; i < k; ++i) total += ell_increments[i];
  return total;
}

Vector plmc_step(const Vector& x, const Vector& xi, const ChainConfig& cfg) {
  require_dimension(cfg.dimension(), x.size(), "plmc_step x");
  require_dimension(cfg.dimension(), xi.size(), "plmc_step xi");
  const Vector g = potentials::min_norm_subgradient(cfg.potential(), x, cfg.tie_tol);
  return geometry::project(cfg.body(), x + xi - (0.5 * cfg.eta()) * g,
                           cfg.projection);
}

Trajectory run_plmc(const ChainConfig& cfg, long record_stride) {
  if (record_stride < 1) {
    throw Error(ErrorCode::InvalidArgument, "record stride must be >= 1");
  }
  BrownianSource source(cfg.seed(), cfg.replica_id(), cfg.dimension(),
                        cfg.eta(), 1);
  Trajectory traj;
  Vector x = cfg.x0();
  record(traj, 0, x);
  for (long k = 1; k <= cfg.steps(); ++k) {
    x = plmc_step(x, source.next_interval(), cfg);
    if (due(k, cfg.steps(), record_stride)) record(traj, k, x);
  }
  traj.final_point = x;
  return traj;
}

Trajectory run_reflected_reference(const ChainConfig& cfg, int refinement,
                                   long record_stride) {
  require_refinement(refinement);
  if (record_stride < 1) {
    throw Error(ErrorCode::InvalidArgument, "record stride must be >= 1");
  }
  BrownianSource source(cfg.seed(), cfg.replica_id(), cfg.dimension(),
                        cfg.eta(), refinement);
  LocalTimeLedger ledger;
  ledger.phi_total = Vector::Zero(cfg.dimension());
  ledger.ell_increments.reserve(cfg.steps());
  ledger.phi_increments.reserve(cfg.steps());
  Trajectory traj;
  Vector x = cfg.x0();
  record(traj, 0, x);
  for (long k = 1; k <= cfg.steps(); ++k) {
    source.next_interval();
    double d_ell = 0.0;
    Vector d_phi = Vector::Zero(cfg.dimension());
    for (const Vector& zeta : source.fine()) {
      x = reflected_fine_step(x, zeta, source.fine_step(), cfg, d_ell, d_phi);
    }
    ledger.ell += d_ell;
    ledger.phi_total += d_phi;
    ledger.ell_increments.push_back(d_ell);
    ledger.phi_increments.push_back(std::move(d_phi));
    if (due(k, cfg.steps(), record_stride)) record(traj, k, x);
  }
  traj.final_point = x;
  traj.ledger = std::move(ledger);
  return traj;
}

Trajectory run_coupled_replica(const ChainConfig& cfg, int refinement) {
  require_refinement(refinement);
  BrownianSource source(cfg.seed(), cfg.replica_id(), cfg.dimension(),
                        cfg.eta(), refinement);
  Trajectory traj;
  traj.coupling_sq_distances.reserve(cfg.steps() + 1);
  traj.coupling_sq_distances.push_back(0.0);
  Vector algo = cfg.x0();
  Vector ref = cfg.x0();
  double ell = 0.0;
  Vector phi = Vector::Zero(cfg.dimension());
  for (long k = 1; k <= cfg.steps(); ++k) {
    algo = plmc_step(algo, source.next_interval(), cfg);
    for (const Vector& zeta : source.fine()) {
      ref = reflected_fine_step(ref, zeta, source.fine_step(), cfg, ell, phi);
    }
    traj.coupling_sq_distances.push_back((ref - algo).squaredNorm());
  }
  traj.final_point = algo;
  traj.steps = {0, cfg.steps()};
  traj.points = {cfg.x0(), algo};
  return traj;
}

std::vector<CurvePoint> run_coupled(const ChainConfig& cfg, int refinement,
                                    int replicas, unsigned threads) {
  if (replicas < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "coupled run needs at least 2 replicas for a standard error");
  }
  std::vector<std::vector<double>> per_replica(replicas);
  parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    per_replica[r] =
        run_coupled_replica(cfg.with_replica(static_cast<std::uint32_t>(r)),
                            refinement)
            .coupling_sq_distances;
  });
  const long steps = cfg.steps();
  std::vector<CurvePoint> curve(steps + 1);
  const double count = replicas;
  for (long k = 0; k <= steps; ++k) {
    double sum = 0.0;
    for (const auto& d : per_replica) sum += d[k];
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& d : per_replica) ss += (d[k] - mean) * (d[k] - mean);
    curve[k] = {mean, std::sqrt(ss / (count - 1.0) / count)};
  }
  return curve;
}

std::vector<double> run_parallel_coupled_diffusions(const ChainConfig& cfg,
                                                    const Vector& x0_alt,
                                                    int refinement) {
  require_refinement(refinement);
  require_dimension(cfg.dimension(), x0_alt.size(), "x0_alt");
  if (!geometry::contains(cfg.body(), x0_alt, kMembershipTol)) {
    throw Error(ErrorCode::Domain, "x0_alt must lie in the body");
  }
  BrownianSource source(cfg.seed(), cfg.replica_id(), cfg.dimension(),
                        cfg.eta(), refinement);
  Vector a = cfg.x0();
  Vector b = x0_alt;
  double ell_a = 0.0, ell_b = 0.0;
  Vector phi_a = Vector::Zero(cfg.dimension());
  Vector phi_b = Vector::Zero(cfg.dimension());
  std::vector<double> distances;
  distances.reserve(cfg.steps() + 1);
  distances.push_back((a - b).norm());
  for (long k = 1; k <= cfg.steps(); ++k) {
    source.next_interval();
    for (const Vector& zeta : source.fine()) {
      a = reflected_fine_step(a, zeta, source.fine_step(), cfg, ell_a, phi_a);
      b = reflected_fine_step(b, zeta, source.fine_step(), cfg, ell_b, phi_b);
    }
    distances.push_back((a - b).norm());
  }
  return distances;
}

ChainConfig ball_restricted_config(const Potential& potential, double radius,
                                   double eta, long steps, std::uint64_t seed,
                                   std::uint32_t replica_id,
                                   std::optional<double> beta) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "restriction radius must be > 0");
  }
  const int n = potential.dimension();
  const double slope = beta ? *beta : potentials::growth_slope(potential);
  if (!(slope >= 0.0) || !std::isfinite(slope)) {
    throw Error(ErrorCode::InvalidArgument, "growth slope must be finite");
  }

  // Check the growth hypothesis on points spread over the ball (or over a
  // few scales when the radius is infinite).
  RandomStream stream(seed, replica_id, StreamRole::Property);
  const double reach = std::isfinite(radius) ? radius : 100.0;
  Vector x(n);
  for (int i = 0; i < 2000; ++i) {
    stream.fill_gaussian(x);
    x *= reach * stream.uniform() / std::max(x.norm(), 1e-300);
    if (i % 3 == 0) x *= 1.5;  // a little outside too
    const double g = potentials::min_norm_subgradient(potential, x).norm();
    if (g > slope * (x.norm() + 1.0) * (1.0 + 1e-12) + 1e-12) {
      std::ostringstream msg;
      msg << "growth hypothesis |g(x)| <= beta(|x|+1) fails with beta = "
          << slope << " at a sampled point with |x| = " << x.norm();
      throw Error(ErrorCode::Domain, msg.str());
    }
  }

  if (!std::isfinite(radius)) {
    auto body = ConvexBody::whole_space(n);
    return ChainConfig(body, potential, Vector::Zero(n), eta, steps, seed,
                       replica_id);
  }
  auto body = ConvexBody::ball(Vector::Zero(n), radius);
  return ChainConfig(body, potential, Vector::Zero(n), eta, steps, seed,
                     replica_id, slope * (radius + 1.0));
}

Trajectory run_ball_restricted(const Potential& potential, double radius,
                               double eta, long steps, std::uint64_t seed,
                               std::uint32_t replica_id, long record_stride,
                               std::optional<double> beta) {
  return run_plmc(ball_restricted_config(potential, radius, eta, steps, seed,
                                         replica_id, beta),
                  record_stride);
}

}  // namespace plmc::chains
