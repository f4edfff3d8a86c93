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

#include "plmc/plmc.h"

#include <cmath>
#include <new>
#include <string>

#include "chains.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "potentials.hpp"
#include "studies.hpp"
#include "theory.hpp"

struct plmc_body {
  plmc::geometry::ConvexBody value;
};

struct plmc_potential {
  plmc::potentials::Potential value;
};

struct plmc_study {
  std::string summary;
  std::string table;
  bool all_satisfied;
};

namespace {

using plmc::ErrorCode;
using plmc::Vector;

thread_local std::string g_last_error;

plmc_status fail(plmc_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes and the thread-local
// error message.
template <class Fn>
plmc_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return PLMC_OK;
  } catch (const plmc::Error& e) {
    return fail(static_cast<plmc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PLMC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PLMC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PLMC_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) {
    throw plmc::Error(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
  }
}

void need_dim(int dim) {
  if (dim < 1) throw plmc::Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
}

Vector copy_in(const double* data, int dim) {
  need(data, "vector");
  return Eigen::Map<const Vector>(data, dim);
}

void copy_out(const Vector& v, double* out) {
  need(out, "output");
  Eigen::Map<Vector>(out, v.size()) = v;
}

}  // namespace

extern "C" {

const char* plmc_version(void) { return "0.1.0"; }

const char* plmc_last_error(void) { return g_last_error.c_str(); }

const char* plmc_status_name(plmc_status status) {
  switch (status) {
    case PLMC_OK: return "ok";
    case PLMC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PLMC_ERR_DIMENSION: return "dimension mismatch";
    case PLMC_ERR_NOT_CONVERGED: return "not converged";
    case PLMC_ERR_DOMAIN: return "domain error";
    case PLMC_ERR_CONFIG: return "config error";
    case PLMC_ERR_IO: return "i/o error";
    case PLMC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- bodies

plmc_status plmc_body_whole_space(int dim, plmc_body** out) {
  return guard([&] {
    need(out, "out");
    need_dim(dim);
    *out = new plmc_body{plmc::geometry::ConvexBody::whole_space(dim)};
  });
}

plmc_status plmc_body_ball(const double* center, int dim, double radius,
                           plmc_body** out) {
  return guard([&] {
    need(out, "out");
    need_dim(dim);
    *out = new plmc_body{plmc::geometry::ConvexBody::ball(copy_in(center, dim), radius)};
  });
}

plmc_status plmc_body_box(const double* lower, const double* upper, int dim,
                          plmc_body** out) {
  return guard([&] {
    need(out, "out");
    need_dim(dim);
    *out = new plmc_body{
        plmc::geometry::ConvexBody::box(copy_in(lower, dim), copy_in(upper, dim))};
  });
}

plmc_status plmc_body_polytope(const double* normals, const double* offsets,
                               int count, const double* interior_point, int dim,
                               plmc_body** out) {
  return guard([&] {
    need(out, "out");
    need(normals, "normals");
    need(offsets, "offsets");
    need_dim(dim);
    if (count < 1) throw plmc::Error(ErrorCode::InvalidArgument, "need >= 1 constraint");
    std::vector<plmc::geometry::Halfspace> hs;
    for (int i = 0; i < count; ++i) {
      hs.push_back({copy_in(normals + std::size_t(i) * dim, dim), offsets[i]});
    }
    *out = new plmc_body{
        plmc::geometry::ConvexBody::polytope(hs, copy_in(interior_point, dim))};
  });
}

void plmc_body_free(plmc_body* body) { delete body; }

plmc_status plmc_body_dimension(const plmc_body* body, int* dim) {
  return guard([&] {
    need(body, "body");
    need(dim, "dim");
    *dim = body->value.dimension();
  });
}

plmc_status plmc_body_project(const plmc_body* body, const double* x, double* out) {
  return guard([&] {
    need(body, "body");
    const int n = body->value.dimension();
    copy_out(plmc::geometry::project(body->value, copy_in(x, n)), out);
  });
}

plmc_status plmc_body_contains(const plmc_body* body, const double* x, double tol,
                               int* inside) {
  return guard([&] {
    need(body, "body");
    need(inside, "inside");
    const int n = body->value.dimension();
    *inside = plmc::geometry::contains(body->value, copy_in(x, n), tol) ? 1 : 0;
  });
}

plmc_status plmc_body_boundary_distance(const plmc_body* body, const double* x,
                                        double* out) {
  return guard([&] {
    need(body, "body");
    need(out, "out");
    const int n = body->value.dimension();
    *out = plmc::geometry::boundary_distance(body->value, copy_in(x, n));
  });
}

// ---- potentials

plmc_status plmc_potential_zero(int dim, plmc_potential** out) {
  return guard([&] {
    need(out, "out");
    need_dim(dim);
    *out = new plmc_potential{plmc::potentials::Potential::zero(dim)};
  });
}

plmc_status plmc_potential_linear(const double* c, int dim, plmc_potential** out) {
  return guard([&] {
    need(out, "out");
    need_dim(dim);
    *out = new plmc_potential{plmc::potentials::Potential::linear(copy_in(c, dim))};
  });
}

plmc_status plmc_potential_affine_max(const double* slopes, const double* intercepts,
                                      int count, int dim, plmc_potential** out) {
  return guard([&] {
    need(out, "out");
    need(slopes, "slopes");
    need(intercepts, "intercepts");
    need_dim(dim);
    if (count < 1) throw plmc::Error(ErrorCode::InvalidArgument, "need >= 1 piece");
    std::vector<plmc::potentials::AffinePiece> pieces;
    for (int i = 0; i < count; ++i) {
      pieces.push_back({copy_in(slopes + std::size_t(i) * dim, dim), intercepts[i]});
    }
    *out = new plmc_potential{plmc::potentials::Potential::affine_max(pieces)};
  });
}

plmc_status plmc_potential_scaled_norm(const double* center, int dim, double slope,
                                       plmc_potential** out) {
  return guard([&] {
    need(out, "out");
    need_dim(dim);
    *out = new plmc_potential{
        plmc::potentials::Potential::scaled_norm(copy_in(center, dim), slope)};
  });
}

plmc_status plmc_potential_quadratic(int dim, double alpha, plmc_potential** out) {
  return guard([&] {
    need(out, "out");
    need_dim(dim);
    *out = new plmc_potential{plmc::potentials::Potential::quadratic(dim, alpha)};
  });
}

void plmc_potential_free(plmc_potential* potential) { delete potential; }

plmc_status plmc_potential_value(const plmc_potential* p, const double* x, double* out) {
  return guard([&] {
    need(p, "potential");
    need(out, "out");
    *out = plmc::potentials::value(p->value, copy_in(x, p->value.dimension()));
  });
}

plmc_status plmc_potential_subgradient(const plmc_potential* p, const double* x,
                                       double* out) {
  return guard([&] {
    need(p, "potential");
    copy_out(plmc::potentials::min_norm_subgradient(
                 p->value, copy_in(x, p->value.dimension())),
             out);
  });
}

plmc_status plmc_potential_lipschitz(const plmc_potential* p, const plmc_body* body,
                                     double* out) {
  return guard([&] {
    need(p, "potential");
    need(body, "body");
    need(out, "out");
    *out = plmc::potentials::lipschitz_constant(p->value, body->value);
  });
}

plmc_status plmc_potential_infimum(const plmc_potential* p, const plmc_body* body,
                                   double* value, int* exact) {
  return guard([&] {
    need(p, "potential");
    need(body, "body");
    need(value, "value");
    const auto est = plmc::potentials::infimum_over(p->value, body->value);
    *value = est.value;
    if (exact) *exact = est.exact ? 1 : 0;
  });
}

// ---- chains

plmc_status plmc_run_chain(const plmc_body* body, const plmc_potential* p,
                           const double* x0, double eta, long steps, uint64_t seed,
                           uint32_t replica_id, double lipschitz, double* final_point) {
  return guard([&] {
    need(body, "body");
    need(p, "potential");
    const int n = body->value.dimension();
    std::optional<double> L;
    if (lipschitz >= 0.0) L = lipschitz;
    const plmc::chains::ChainConfig cfg(body->value, p->value, copy_in(x0, n), eta,
                                        steps, seed, replica_id, L);
    copy_out(plmc::chains::run_plmc(cfg, std::max(1L, steps)).final_point, final_point);
  });
}

// ---- bounds

plmc_status plmc_sigma0_r0(const plmc_potential* p, const plmc_body* body,
                           const double* x0, double* sigma0, double* r0) {
  return guard([&] {
    need(p, "potential");
    need(body, "body");
    need(sigma0, "sigma0");
    need(r0, "r0");
    const auto s =
        plmc::theory::sigma0_r0(copy_in(x0, body->value.dimension()), p->value, body->value);
    *sigma0 = s.sigma0;
    *r0 = s.r0;
  });
}

plmc_status plmc_discretization_bound(int n, long k, double eta, double L,
                                      double sigma0, double r0, double* A, double* rhs) {
  return guard([&] {
    const auto d = plmc::theory::discretization_bound(n, k, eta, L, sigma0, r0);
    if (A) *A = d.A;
    if (rhs) *rhs = d.rhs;
  });
}

namespace {
plmc::theory::ProblemConstants constants(int n, double L, double r0, double sigma0) {
  plmc::theory::ProblemConstants c;
  c.n = n;
  c.L = L;
  c.r0 = r0;
  c.sigma0 = sigma0;
  return c;
}
}  // namespace

plmc_status plmc_logsob_bound(int n, double L, double r0, double sigma0, double C_LS,
                              long k, double eta, double A, double* B, double* rhs) {
  return guard([&] {
    const auto b = plmc::theory::logsob_bound(k, eta, A, C_LS, constants(n, L, r0, sigma0));
    if (B) *B = b.B;
    if (rhs) *rhs = b.rhs;
  });
}

plmc_status plmc_schedule_logsob(int n, double L, double r0, double sigma0, double C_LS,
                                 double eps, long max_steps, plmc_schedule* out) {
  return guard([&] {
    need(out, "out");
    auto c = constants(n, L, r0, sigma0);
    c.C_LS = C_LS;
    c.eps = eps;
    const auto s = plmc::theory::schedule_logsob(
        c, max_steps > 0 ? max_steps : plmc::theory::kDefaultMaxSteps);
    *out = {s.eta, s.k, s.horizon, s.A, s.B, s.rhs, s.iterations};
  });
}

plmc_status plmc_warmstart_log_chi2(int n, double L, double C_P, double sigma0,
                                    double* log_chi2, double* covariance_scale) {
  return guard([&] {
    const auto w = plmc::theory::chi2_warmstart_log_bound(n, L, C_P, sigma0);
    if (log_chi2) *log_chi2 = w.log_chi2;
    if (covariance_scale) *covariance_scale = w.covariance_scale;
  });
}

plmc_status plmc_local_time_bound(int n, double sigma0, double r0, double t,
                                  double* out) {
  return guard([&] {
    need(out, "out");
    *out = plmc::theory::local_time_bound(n, sigma0, r0, t);
  });
}

plmc_status plmc_gaussian_max_bound(int n, long k, double* out) {
  return guard([&] {
    need(out, "out");
    *out = plmc::theory::gaussian_max_bound(n, k);
  });
}

plmc_status plmc_restriction_bound(double M, double R, double C, double* out) {
  return guard([&] {
    need(out, "out");
    *out = plmc::theory::restriction_bound(
        M, R, C > 0.0 ? C : plmc::theory::kDefaultRestrictionConstant);
  });
}

plmc_status plmc_restriction_radius(int n, double M, double eps, double C, double* out) {
  return guard([&] {
    need(out, "out");
    *out = plmc::theory::choose_restriction_radius(
        n, M, eps, C > 0.0 ? C : plmc::theory::kDefaultRestrictionConstant);
  });
}

// ---- studies

plmc_status plmc_run_study(const char* command, const char* config_json,
                           const plmc_study_options* options, plmc_study** out) {
  return guard([&] {
    need(command, "command");
    need(config_json, "config");
    need(options, "options");
    need(options->out_dir, "out_dir");
    need(out, "out");
    plmc::studies::RunOptions run;
    run.out_dir = options->out_dir;
    if (options->has_seed) run.seed = options->seed;
    if (options->threads > 0) run.threads = options->threads;
    for (size_t i = 0; i < options->override_count; ++i) {
      need(options->overrides, "overrides");
      const std::string item = options->overrides[i];
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw plmc::Error(ErrorCode::Config,
                          "override '" + item + "' must have the form path=value");
      }
      run.overrides.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    const auto result = plmc::studies::run_command(command, config_json, run);
    *out = new plmc_study{result.summary.dump(2),
                          plmc::studies::render_table(result.reports),
                          result.all_satisfied};
  });
}

const char* plmc_study_summary_json(const plmc_study* study) {
  return study ? study->summary.c_str() : "";
}

const char* plmc_study_table(const plmc_study* study) {
  return study ? study->table.c_str() : "";
}

int plmc_study_all_satisfied(const plmc_study* study) {
  return study && study->all_satisfied ? 1 : 0;
}

void plmc_study_free(plmc_study* study) { delete study; }

const char* plmc_study_commands(void) {
  static const std::string joined = [] {
    std::string s;
    for (const auto& name : plmc::studies::command_names()) {
      if (!s.empty()) s += ' ';
      s += name;
    }
    return s;
  }();
  return joined.c_str();
}

}  // extern "C"
