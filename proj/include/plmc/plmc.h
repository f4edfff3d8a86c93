/* Copyright 2026 The plmc-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * plmc: projected Langevin Monte Carlo.
 *
 * Every function returns a plmc_status. On failure, plmc_last_error()
 * returns a message for the calling thread, valid until the next call into
 * the library from that thread. Handles are opaque and owned by the caller.
 * Vectors are passed as (pointer, length) pairs of doubles; an infinite
 * distance or radius is reported as +INFINITY.
 */
#ifndef PLMC_PLMC_H_
#define PLMC_PLMC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PLMC_BUILDING_LIBRARY)
#define PLMC_API __declspec(dllexport)
#else
#define PLMC_API __declspec(dllimport)
#endif
#else
#define PLMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plmc_status {
  PLMC_OK = 0,
  PLMC_ERR_INVALID_ARGUMENT = 1,
  PLMC_ERR_DIMENSION = 2,
  PLMC_ERR_NOT_CONVERGED = 3,
  PLMC_ERR_DOMAIN = 4,
  PLMC_ERR_CONFIG = 5,
  PLMC_ERR_IO = 6,
  PLMC_ERR_INTERNAL = 7
} plmc_status;

typedef struct plmc_body plmc_body;
typedef struct plmc_potential plmc_potential;
typedef struct plmc_study plmc_study;

PLMC_API const char* plmc_version(void);
PLMC_API const char* plmc_last_error(void);
PLMC_API const char* plmc_status_name(plmc_status status);

/* ---- convex bodies ---------------------------------------------------- */

PLMC_API plmc_status plmc_body_whole_space(int dim, plmc_body** out);
PLMC_API plmc_status plmc_body_ball(const double* center, int dim, double radius,
                                    plmc_body** out);
PLMC_API plmc_status plmc_body_box(const double* lower, const double* upper,
                                   int dim, plmc_body** out);
/* Constraints <normals[i*dim .. i*dim+dim), x> <= offsets[i]. */
PLMC_API plmc_status plmc_body_polytope(const double* normals,
                                        const double* offsets, int count,
                                        const double* interior_point, int dim,
                                        plmc_body** out);
PLMC_API void plmc_body_free(plmc_body* body);

PLMC_API plmc_status plmc_body_dimension(const plmc_body* body, int* dim);
PLMC_API plmc_status plmc_body_project(const plmc_body* body, const double* x,
                                       double* out);
PLMC_API plmc_status plmc_body_contains(const plmc_body* body, const double* x,
                                        double tol, int* inside);
PLMC_API plmc_status plmc_body_boundary_distance(const plmc_body* body,
                                                 const double* x, double* out);

/* ---- potentials ------------------------------------------------------- */

PLMC_API plmc_status plmc_potential_zero(int dim, plmc_potential** out);
PLMC_API plmc_status plmc_potential_linear(const double* c, int dim,
                                           plmc_potential** out);
/* phi(x) = max_i <slopes[i*dim ..], x> + intercepts[i]. */
PLMC_API plmc_status plmc_potential_affine_max(const double* slopes,
                                               const double* intercepts,
                                               int count, int dim,
                                               plmc_potential** out);
PLMC_API plmc_status plmc_potential_scaled_norm(const double* center, int dim,
                                                double slope,
                                                plmc_potential** out);
PLMC_API plmc_status plmc_potential_quadratic(int dim, double alpha,
                                              plmc_potential** out);
PLMC_API void plmc_potential_free(plmc_potential* potential);

PLMC_API plmc_status plmc_potential_value(const plmc_potential* p,
                                          const double* x, double* out);
/* Minimum-norm element of the subdifferential at x. */
PLMC_API plmc_status plmc_potential_subgradient(const plmc_potential* p,
                                                const double* x, double* out);
PLMC_API plmc_status plmc_potential_lipschitz(const plmc_potential* p,
                                              const plmc_body* body,
                                              double* out);
/* exact is set to 1 for a certified value, 0 for a descent estimate. */
PLMC_API plmc_status plmc_potential_infimum(const plmc_potential* p,
                                            const plmc_body* body,
                                            double* value, int* exact);

/* ---- chains ----------------------------------------------------------- */

/* Runs the projected chain for `steps` steps from x0 and writes the final
 * point. lipschitz < 0 means "derive from the potential". */
PLMC_API plmc_status plmc_run_chain(const plmc_body* body,
                                    const plmc_potential* p, const double* x0,
                                    double eta, long steps, uint64_t seed,
                                    uint32_t replica_id, double lipschitz,
                                    double* final_point);

/* ---- bounds ----------------------------------------------------------- */

PLMC_API plmc_status plmc_sigma0_r0(const plmc_potential* p,
                                    const plmc_body* body, const double* x0,
                                    double* sigma0, double* r0);
/* Writes A and the bound A k eta^{3/2}. */
PLMC_API plmc_status plmc_discretization_bound(int n, long k, double eta,
                                               double L, double sigma0,
                                               double r0, double* A,
                                               double* rhs);
PLMC_API plmc_status plmc_logsob_bound(int n, double L, double r0,
                                       double sigma0, double C_LS, long k,
                                       double eta, double A, double* B,
                                       double* rhs);

typedef struct plmc_schedule {
  double eta;
  long k;
  double horizon;
  double A;
  double B;
  double bound;
  int iterations;
} plmc_schedule;

/* max_steps <= 0 selects the default budget. */
PLMC_API plmc_status plmc_schedule_logsob(int n, double L, double r0,
                                          double sigma0, double C_LS,
                                          double eps, long max_steps,
                                          plmc_schedule* out);
PLMC_API plmc_status plmc_warmstart_log_chi2(int n, double L, double C_P,
                                             double sigma0, double* log_chi2,
                                             double* covariance_scale);
PLMC_API plmc_status plmc_local_time_bound(int n, double sigma0, double r0,
                                           double t, double* out);
PLMC_API plmc_status plmc_gaussian_max_bound(int n, long k, double* out);
/* C <= 0 selects the default constant 16. */
PLMC_API plmc_status plmc_restriction_bound(double M, double R, double C,
                                            double* out);
PLMC_API plmc_status plmc_restriction_radius(int n, double M, double eps,
                                             double C, double* out);

/* ---- studies ---------------------------------------------------------- */

typedef struct plmc_study_options {
  const char* out_dir;    /* required */
  int has_seed;           /* nonzero: seed overrides the config value */
  uint64_t seed;
  unsigned threads;       /* 0: keep the config value */
  const char* const* overrides; /* "path=value" strings, may be NULL */
  size_t override_count;
} plmc_study_options;

/* Runs one of: sample, coupled-error, localtime, warmstart, w2, schedule.
 * Invalid configs fail with PLMC_ERR_CONFIG and a "config:LINE: ..."
 * message. On success *out receives a study handle. */
PLMC_API plmc_status plmc_run_study(const char* command,
                                    const char* config_json,
                                    const plmc_study_options* options,
                                    plmc_study** out);
PLMC_API const char* plmc_study_summary_json(const plmc_study* study);
PLMC_API const char* plmc_study_table(const plmc_study* study);
/* 1 when every empirical report satisfies its bound. */
PLMC_API int plmc_study_all_satisfied(const plmc_study* study);
PLMC_API void plmc_study_free(plmc_study* study);

/* Space-separated list of study command names. */
PLMC_API const char* plmc_study_commands(void);

#ifdef __cplusplus
}
#endif

#endif /* PLMC_PLMC_H_ */
