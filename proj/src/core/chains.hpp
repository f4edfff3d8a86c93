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

#include <cstdint>
#include <optional>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "potentials.hpp"
#include "rng.hpp"

namespace plmc::chains {

using geometry::ConvexBody;
using potentials::Potential;

inline constexpr int kDefaultRefinement = 32;
inline constexpr double kMembershipTol = 1e-9;

/// Parameters of one chain. Construction validates x0 in K and the step
/// size condition eta < n / L^2 (skipped when L = 0).
class ChainConfig {
 public:
  ChainConfig(ConvexBody body, Potential potential, Vector x0, double eta,
              long steps, std::uint64_t seed, std::uint32_t replica_id = 0,
              std::optional<double> lipschitz = std::nullopt);

  const ConvexBody& body() const noexcept { return body_; }
  const Potential& potential() const noexcept { return potential_; }
  const Vector& x0() const noexcept { return x0_; }
  double eta() const noexcept { return eta_; }
  long steps() const noexcept { return steps_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t replica_id() const noexcept { return replica_id_; }
  double lipschitz() const noexcept { return lipschitz_; }
  int dimension() const noexcept { return body_.dimension(); }

  geometry::ProjectionOptions projection;
  double tie_tol = potentials::kDefaultTieTol;

  ChainConfig with_replica(std::uint32_t replica_id) const;
  ChainConfig with_start(Vector x0) const;
  ChainConfig with_steps(long steps) const;

 private:
  ConvexBody body_;
  Potential potential_;
  Vector x0_;
  double eta_;
  long steps_;
  std::uint64_t seed_;
  std::uint32_t replica_id_;
  double lipschitz_;
};

/// Brownian increments on the fine grid delta = eta / m. The coarse
/// increment of an interval is the running sum of its m fine increments, so
/// the algorithm chain and the reference chain see one Brownian path.
class BrownianSource {
 public:
  BrownianSource(std::uint64_t seed, std::uint32_t replica_id, int dim,
                 double eta, int refinement);

  /// Draws the next coarse interval and returns its coarse increment.
  const Vector& next_interval();
  const std::vector<Vector>& fine() const noexcept { return fine_; }
  const Vector& coarse() const noexcept { return coarse_; }
  double fine_step() const noexcept { return delta_; }
  int refinement() const noexcept { return static_cast<int>(fine_.size()); }

 private:
  RandomStream stream_;
  double delta_;
  double fine_scale_;
  std::vector<Vector> fine_;
  Vector coarse_;
};

/// Accumulated reflection of the reference chain. Each fine step pushes
/// the point back by d = y - P(y); ell grows by |d| and phi_total by d.
struct LocalTimeLedger {
  double ell = 0.0;
  Vector phi_total;
  std::vector<double> ell_increments;  // one per coarse step
  std::vector<Vector> phi_increments;  // one per coarse step

  /// ell accumulated up to coarse step k.
  double ell_at(long k) const;
};

struct Trajectory {
  std::vector<long> steps;
  std::vector<Vector> points;
  Vector final_point;
  std::optional<LocalTimeLedger> ledger;
  /// |X_{k eta} - x_k|^2 for k = 0..steps, coupled runs only.
  std::vector<double> coupling_sq_distances;
};

/// One projected Langevin step: P(x + xi - (eta/2) g(x)).
Vector plmc_step(const Vector& x, const Vector& xi, const ChainConfig& cfg);

/// The projected Langevin algorithm, recording every `record_stride`-th
/// iterate (step 0 and the final step are always recorded).
Trajectory run_plmc(const ChainConfig& cfg, long record_stride = 1);

/// Fine-step projected Euler proxy of the reflected Langevin diffusion with
/// a local-time ledger. Records every coarse multiple of eta at the stride.
Trajectory run_reflected_reference(const ChainConfig& cfg,
                                   int refinement = kDefaultRefinement,
                                   long record_stride = 1);

/// Algorithm and reference chains from cfg.x0 on one shared Brownian path.
/// Only the per-step squared distances and final points are kept.
Trajectory run_coupled_replica(const ChainConfig& cfg, int refinement);

struct CurvePoint {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Per-step mean and standard error of |X_{k eta} - x_k|^2 over replicas
/// 0..replicas-1 (index k = 0..steps).
std::vector<CurvePoint> run_coupled(const ChainConfig& cfg, int refinement,
                                    int replicas, unsigned threads = 1);

/// Two reference chains from x0 and x0_alt driven by the same fine
/// increments; returns |X_t - X'_t| at coarse times 0..steps.
std::vector<double> run_parallel_coupled_diffusions(const ChainConfig& cfg,
                                                    const Vector& x0_alt,
                                                    int refinement);

/// Chain targeting mu conditioned on Ball(0, R), started at 0, with
/// L := beta (R + 1). R = +inf falls back to the unconstrained chain with the
/// potential's own Lipschitz constant. When `beta` is absent it is taken
/// from potentials::growth_slope; either way |g(x)| <= beta(|x|+1) is
/// checked on sampled points.
ChainConfig ball_restricted_config(const Potential& potential, double radius,
                                   double eta, long steps, std::uint64_t seed,
                                   std::uint32_t replica_id = 0,
                                   std::optional<double> beta = std::nullopt);

Trajectory run_ball_restricted(const Potential& potential, double radius,
                               double eta, long steps, std::uint64_t seed,
                               std::uint32_t replica_id = 0,
                               long record_stride = 1,
                               std::optional<double> beta = std::nullopt);

}  // namespace plmc::chains
