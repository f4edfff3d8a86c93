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

#include "studies.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "chains.hpp"
#include "config.hpp"
#include "metrics.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace plmc::studies {

namespace {

namespace fs = std::filesystem;
using config::Config;
using config::Json;
using geometry::ConvexBody;
using potentials::Potential;
using theory::BoundReport;

// ---------------------------------------------------------------- output

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// JSON has no infinities; write them as strings so they survive a round trip.
Json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const Json& resolved, std::uint64_t seed,
          const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out_ << kSchemaLine << "\n";
    out_ << "# seed: " << seed << "\n";
    out_ << "# config: " << resolved.dump() << "\n";
    row(columns);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  void close() {
    out_.close();
    if (!out_) throw Error(ErrorCode::Io, "failed writing CSV output");
  }

 private:
  std::ofstream out_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

// ---------------------------------------------------------------- problem

struct Problem {
  ConvexBody body;
  Potential potential;
  Vector x0;
  double L;
  theory::StartConstants start;
  int n;
};

Problem load_problem(const Config& c) {
  ConvexBody body = c.body();
  const int n = body.dimension();
  Potential potential = c.potential(n);
  Vector x0 = c.has("/x0") ? c.vector("/x0") : body.interior_point();
  if (x0.size() != n) {
    c.fail("/x0", "has length " + std::to_string(x0.size()) +
                      " but the body has dimension " + std::to_string(n));
  }
  if (!geometry::contains(body, x0, chains::kMembershipTol)) {
    c.fail("/x0", "must lie in the body");
  }
  double L = 0.0;
  if (auto given = c.optional_number("/lipschitz")) {
    if (!(*given >= 0.0) || !std::isfinite(*given)) {
      c.fail("/lipschitz", "must be finite and non-negative");
    }
    L = *given;
  } else {
    try {
      L = potentials::lipschitz_constant(potential, body);
    } catch (const Error& e) {
      c.fail("/potential", std::string(e.what()) + "; set \"lipschitz\" explicitly");
    }
  }
  theory::StartConstants start{};
  try {
    start = theory::sigma0_r0(x0, potential, body);
  } catch (const Error& e) {
    c.fail("/x0", e.what());
  }
  return {std::move(body), std::move(potential), std::move(x0), L, start, n};
}

void check_step_hypothesis(const Config& c, const std::string& ptr, double eta,
                           const Problem& p) {
  if (p.L > 0.0 && !(eta < p.n / (p.L * p.L))) {
    std::ostringstream msg;
    msg << "eta = " << eta << " violates eta < n / L^2 = " << p.n / (p.L * p.L)
        << " (n = " << p.n << ", L = " << p.L
        << "), the step-size hypothesis of the discretization bound";
    c.fail(ptr, msg.str());
  }
}

theory::ProblemConstants constants_of(const Problem& p) {
  theory::ProblemConstants k;
  k.n = p.n;
  k.L = p.L;
  k.r0 = p.start.r0;
  k.sigma0 = p.start.sigma0;
  return k;
}

struct StepPlan {
  double eta;
  long steps;
  std::optional<theory::Schedule> schedule;
};

std::optional<theory::Schedule> schedule_from(const Config& c, const Problem& p) {
  if (!c.has("/schedule")) return std::nullopt;
  auto k = constants_of(p);
  k.C_LS = c.positive("/schedule/C_LS");
  k.eps = c.positive("/schedule/eps");
  const long max_steps = c.integer_or("/schedule/max_steps", theory::kDefaultMaxSteps);
  if (max_steps < 1) c.fail("/schedule/max_steps", "must be >= 1");
  try {
    return theory::schedule_logsob(k, max_steps);
  } catch (const Error& e) {
    c.fail("/schedule", e.what());
  }
}

StepPlan resolve_steps(const Config& c, const Problem& p) {
  if (auto s = schedule_from(c, p)) return {s->eta, s->k, s};
  const double eta = c.positive("/chain/eta");
  const long steps = c.integer("/chain/steps");
  if (steps < 0) c.fail("/chain/steps", "must be >= 0");
  check_step_hypothesis(c, "/chain/eta", eta, p);
  return {eta, steps, std::nullopt};
}

int refinement_of(const Config& c, const std::string& ptr) {
  const long m = c.integer_or(ptr, chains::kDefaultRefinement);
  if (m < 1 || m > 1'000'000) c.fail(ptr, "must be in [1, 1000000]");
  return int(m);
}

long count_of(const Config& c, const std::string& ptr, long fallback, long minimum) {
  const long v = c.integer_or(ptr, fallback);
  if (v < minimum) c.fail(ptr, "must be >= " + std::to_string(minimum));
  return v;
}

Json start_json(const Problem& p) {
  return {{"n", p.n},
          {"L", num(p.L)},
          {"sigma0", num(p.start.sigma0)},
          {"r0", num(p.start.r0)},
          {"infimum", num(p.start.infimum)},
          {"infimum_exact", p.start.infimum_exact}};
}

Json schedule_json(const theory::Schedule& s) {
  return {{"eta", s.eta},        {"k", s.k},
          {"horizon", s.horizon}, {"A", s.A},
          {"B", s.B},            {"bound", s.rhs},
          {"iterations", s.iterations}, {"asymptotic_k", num(s.asymptotic_k)},
          {"asymptotic_eta", num(s.asymptotic_eta)}};
}

BoundReport schedule_report(const theory::Schedule& s, double C_LS, double eps) {
  BoundReport r;
  r.name = "log-Sobolev schedule";
  r.bound = s.rhs;
  r.inputs = {{"C_LS", C_LS}, {"eps", eps}, {"eta", s.eta},
              {"k", double(s.k)}, {"A", s.A}, {"B", s.B}};
  r.note = "KL(law of x_k | mu) bound; at most eps by construction";
  return r;
}

// ---------------------------------------------------------------- context

struct Context {
  Config cfg;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  fs::path out;
  StudyResult result;

  CsvFile csv(const std::string& name, const std::vector<std::string>& columns) {
    result.files.push_back(name);
    return CsvFile(out / name, cfg.resolved(), seed, columns);
  }

  void add(BoundReport r) { result.reports.push_back(std::move(r)); }
};

std::vector<std::string> point_columns(const std::vector<std::string>& head, int n) {
  auto cols = head;
  for (int j = 1; j <= n; ++j) cols.push_back("x" + std::to_string(j));
  return cols;
}

void append_point(std::vector<std::string>& row, const Vector& x) {
  for (Eigen::Index j = 0; j < x.size(); ++j) row.push_back(fmt(x[j]));
}

// ---------------------------------------------------------------- sample

void cmd_sample(Context& ctx, Json& summary) {
  const Config& c = ctx.cfg;
  const long replicas = count_of(c, "/chain/replicas", 1, 1);
  const long stride = count_of(c, "/chain/record_stride", 1, 1);

  if (c.has("/restriction")) {
    // Unconstrained target sampled through its restriction to a ball.
    const ConvexBody body = c.body();
    if (!std::holds_alternative<geometry::WholeSpace>(body.shape())) {
      c.fail("/restriction", "ball restriction needs a whole_space body");
    }
    const Potential potential = c.potential(body.dimension());
    const double R = c.positive("/restriction/radius");
    const auto beta = c.optional_number("/restriction/beta");
    const double eta = c.positive("/chain/eta");
    const long steps = c.integer("/chain/steps");
    if (steps < 0) c.fail("/chain/steps", "must be >= 0");
    std::optional<chains::ChainConfig> probe;
    try {
      probe = chains::ball_restricted_config(potential, R, eta, steps, ctx.seed, 0, beta);
    } catch (const Error& e) {
      c.fail("/restriction", e.what());
    }
    std::vector<chains::Trajectory> runs(replicas);
    parallel_for(std::size_t(replicas), ctx.threads, [&](std::size_t r) {
      runs[r] = chains::run_plmc(probe->with_replica(std::uint32_t(r)), stride);
    });
    auto out = ctx.csv("samples.csv",
                       point_columns({"step", "time", "replica"}, body.dimension()));
    for (long r = 0; r < replicas; ++r) {
      for (std::size_t i = 0; i < runs[r].steps.size(); ++i) {
        const long k = runs[r].steps[i];
        if (k == 0) continue;
        std::vector<std::string> row{std::to_string(k), fmt(k * eta), std::to_string(r)};
        append_point(row, runs[r].points[i]);
        out.row(row);
      }
    }
    out.close();
    summary["restriction"] = {{"radius", num(R)},
                              {"L", num(probe->lipschitz())},
                              {"eta", eta},
                              {"steps", steps}};
    if (auto M = c.optional_number("/restriction/M")) {
      const double C = c.number_or("/restriction_constant",
                                   theory::kDefaultRestrictionConstant);
      BoundReport rep;
      rep.name = "restriction W2^2";
      try {
        rep.bound = theory::restriction_bound(*M, R, C);
      } catch (const Error& e) {
        c.fail("/restriction/radius", e.what());
      }
      rep.inputs = {{"M", *M}, {"R", R}, {"C", C}};
      rep.note = "C is an unspecified universal constant; the default 16 is a guess";
      ctx.add(rep);
    }
    return;
  }

  const Problem p = load_problem(c);
  const StepPlan plan = resolve_steps(c, p);
  std::optional<chains::ChainConfig> base;
  try {
    base.emplace(p.body, p.potential, p.x0, plan.eta, plan.steps, ctx.seed, 0, p.L);
  } catch (const Error& e) {
    c.fail("/chain", e.what());
  }
  std::vector<chains::Trajectory> runs(replicas);
  parallel_for(std::size_t(replicas), ctx.threads, [&](std::size_t r) {
    runs[r] = chains::run_plmc(base->with_replica(std::uint32_t(r)), stride);
  });
  auto out = ctx.csv("samples.csv", point_columns({"step", "time", "replica"}, p.n));
  for (long r = 0; r < replicas; ++r) {
    for (std::size_t i = 0; i < runs[r].steps.size(); ++i) {
      const long k = runs[r].steps[i];
      if (k == 0) continue;
      std::vector<std::string> row{std::to_string(k), fmt(k * plan.eta),
                                   std::to_string(r)};
      append_point(row, runs[r].points[i]);
      out.row(row);
    }
  }
  out.close();

  summary["start"] = start_json(p);
  summary["eta"] = plan.eta;
  summary["steps"] = plan.steps;
  summary["replicas"] = replicas;
  if (plan.steps >= 1) {
    const auto d = theory::discretization_bound(p.n, plan.steps, plan.eta, p.L,
                                                p.start.sigma0, p.start.r0);
    summary["A"] = num(d.A);
    BoundReport rep;
    rep.name = "discretization (1/n) W2^2";
    rep.bound = d.rhs;
    rep.inputs = {{"A", d.A}, {"k", double(plan.steps)}, {"eta", plan.eta}};
    ctx.add(rep);
  }
  if (plan.schedule) {
    summary["schedule"] = schedule_json(*plan.schedule);
    ctx.add(schedule_report(*plan.schedule, c.number("/schedule/C_LS"),
                            c.number("/schedule/eps")));
  }
}

// ---------------------------------------------------------------- coupled-error

void cmd_coupled_error(Context& ctx, Json& summary) {
  const Config& c = ctx.cfg;
  const Problem p = load_problem(c);
  const auto etas = c.number_list("/coupled_error/etas");
  if (etas.empty()) c.fail("/coupled_error/etas", "needs at least one step size");
  const double horizon = c.positive("/coupled_error/horizon");
  const long replicas = count_of(c, "/coupled_error/replicas", 200, 2);
  const int m = refinement_of(c, "/coupled_error/refinement");

  auto out = ctx.csv("coupled_error.csv",
                     {"eta", "k", "step", "time", "empirical", "se", "bound", "verdict"});
  Json per_eta = Json::array();
  for (std::size_t e = 0; e < etas.size(); ++e) {
    const auto ptr = "/coupled_error/etas/" + std::to_string(e);
    const double eta = etas[e];
    if (!(eta > 0.0)) c.fail(ptr, "must be positive");
    check_step_hypothesis(c, ptr, eta, p);
    const long K = std::max(1L, std::lround(horizon / eta));
    std::optional<chains::ChainConfig> cfg;
    try {
      cfg.emplace(p.body, p.potential, p.x0, eta, K, ctx.seed, 0, p.L);
    } catch (const Error& err) {
      c.fail(ptr, err.what());
    }
    const auto curve = chains::run_coupled(*cfg, m, int(replicas), ctx.threads);
    long passed = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    BoundReport worst;
    for (long k = 1; k <= K; ++k) {
      const auto d = theory::discretization_bound(p.n, k, eta, p.L, p.start.sigma0,
                                                  p.start.r0);
      const double emp = curve[k].mean / p.n;
      const double se = curve[k].standard_error / p.n;
      const bool ok = emp + 2.0 * se <= d.rhs + theory::kRoundingAllowance;
      passed += ok;
      out.row({fmt(eta), std::to_string(K), std::to_string(k), fmt(k * eta), fmt(emp),
               fmt(se), fmt(d.rhs), ok ? "pass" : "fail"});
      const double margin = emp + 2.0 * se - d.rhs;
      if (margin > worst_margin) {
        worst_margin = margin;
        worst.bound = d.rhs;
        worst.empirical = emp;
        worst.standard_error = se;
        worst.inputs = {{"eta", eta}, {"k", double(k)}, {"A", d.A}};
      }
    }
    worst.name = "coupled (1/n)|X - x|^2 @ eta=" + short_fmt(eta);
    worst.note = std::to_string(passed) + "/" + std::to_string(K) +
                 " steps pass; tightest step shown";
    ctx.add(worst);
    per_eta.push_back({{"eta", eta}, {"k", K}, {"steps_passed", passed}});
  }
  out.close();
  summary["start"] = start_json(p);
  summary["refinement"] = m;
  summary["replicas"] = replicas;
  summary["per_eta"] = per_eta;
}

// ---------------------------------------------------------------- localtime

void cmd_localtime(Context& ctx, Json& summary) {
  const Config& c = ctx.cfg;
  const Problem p = load_problem(c);
  const double eta = c.positive("/localtime/eta");
  check_step_hypothesis(c, "/localtime/eta", eta, p);
  const auto times = c.number_list("/localtime/times");
  if (times.empty()) c.fail("/localtime/times", "needs at least one time");
  std::vector<long> ks;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) {
      c.fail("/localtime/times/" + std::to_string(i), "must be positive and finite");
    }
    ks.push_back(std::max(1L, std::lround(times[i] / eta)));
  }
  const long K = *std::max_element(ks.begin(), ks.end());
  const long replicas = count_of(c, "/localtime/replicas", 200, 2);
  const int m = refinement_of(c, "/localtime/refinement");
  std::optional<chains::ChainConfig> base;
  try {
    base.emplace(p.body, p.potential, p.x0, eta, K, ctx.seed, 0, p.L);
  } catch (const Error& e) {
    c.fail("/localtime", e.what());
  }
  // ell_t^2 per replica and time.
  std::vector<std::vector<double>> ell2(replicas, std::vector<double>(ks.size()));
  parallel_for(std::size_t(replicas), ctx.threads, [&](std::size_t r) {
    const auto traj = chains::run_reflected_reference(
        base->with_replica(std::uint32_t(r)), m, std::max(1L, K));
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double ell = traj.ledger->ell_at(ks[i]);
      ell2[r][i] = ell * ell;
    }
  });
  auto out = ctx.csv("localtime.csv",
                     {"t", "step", "sqrt_mean_ell2", "se", "bound", "verdict"});
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double sum = 0.0;
    for (long r = 0; r < replicas; ++r) sum += ell2[r][i];
    const double mean = sum / replicas;
    double ss = 0.0;
    for (long r = 0; r < replicas; ++r) ss += (ell2[r][i] - mean) * (ell2[r][i] - mean);
    const double se_mean = std::sqrt(ss / (replicas - 1.0) / replicas);
    const double root = std::sqrt(mean);
    // Delta method for the square root; exact zero when no reflection occurred.
    const double se = root > 0.0 ? se_mean / (2.0 * root) : 0.0;
    const double t = ks[i] * eta;
    const double bound = theory::local_time_bound(p.n, p.start.sigma0, p.start.r0, t);
    BoundReport rep;
    rep.name = "local time sqrt(E l_t^2) @ t=" + short_fmt(t);
    rep.bound = bound;
    rep.empirical = root;
    rep.standard_error = se;
    rep.inputs = {{"t", t}, {"sigma0", p.start.sigma0}, {"r0", p.start.r0}};
    if (!std::isfinite(p.start.r0)) rep.note = "no boundary: local time is identically 0";
    out.row({fmt(t), std::to_string(ks[i]), fmt(root), fmt(se), fmt(bound),
             rep.satisfied() ? "pass" : "fail"});
    ctx.add(rep);
  }
  out.close();
  summary["start"] = start_json(p);
  summary["eta"] = eta;
  summary["refinement"] = m;
  summary["replicas"] = replicas;
}

// ---------------------------------------------------------------- warmstart

void cmd_warmstart(Context& ctx, Json& summary) {
  const Config& c = ctx.cfg;
  const Problem p = load_problem(c);
  const double L = c.has("/warmstart/L") ? c.positive("/warmstart/L") : p.L;
  if (!(L > 0.0)) {
    c.fail("/warmstart/L", "the warm start needs L > 0; set warmstart.L");
  }
  const double C_P = c.positive("/warmstart/C_P");
  const double sigma0 = c.has("/warmstart/sigma0") ? c.number("/warmstart/sigma0")
                                                   : p.start.sigma0;
  if (!(sigma0 >= 0.0)) c.fail("/warmstart/sigma0", "must be non-negative");
  const long draws = count_of(c, "/warmstart/draws", 2000, 2);
  const auto bound = theory::chi2_warmstart_log_bound(p.n, L, C_P, sigma0);

  const auto starts = oracles::sample_gaussian_warmstart(p.x0, p.n, L, draws, ctx.seed);
  theory::StartRatioEstimate ratio{};
  try {
    ratio = theory::estimate_start_ratio(starts.points, p.potential, p.body);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("warm start: ") + e.what());
  }

  auto out = ctx.csv("warmstart.csv", {"quantity", "value", "se"});
  out.row({"covariance_scale", fmt(bound.covariance_scale), ""});
  out.row({"log_chi2_bound", fmt(bound.log_chi2), ""});
  out.row({"expected_start_ratio", fmt(ratio.mean), fmt(ratio.standard_error)});
  out.row({"interior_fraction", fmt(ratio.interior_fraction), ""});
  out.close();

  BoundReport rep;
  rep.name = "warm start log chi^2";
  rep.bound = bound.log_chi2;
  rep.inputs = {{"n", double(p.n)}, {"L", L}, {"C_P", C_P}, {"sigma0", sigma0}};
  rep.note = "Gaussian start N(x0, (n/L^2) Id)";
  ctx.add(rep);

  summary["start"] = start_json(p);
  summary["warmstart"] = {{"covariance_scale", num(bound.covariance_scale)},
                          {"log_chi2_bound", num(bound.log_chi2)},
                          {"expected_start_ratio", num(ratio.mean)},
                          {"expected_start_ratio_se", num(ratio.standard_error)},
                          {"interior_fraction", ratio.interior_fraction},
                          {"infimum_exact", ratio.infimum_exact},
                          {"draws", draws}};
}

// ---------------------------------------------------------------- w2

using metrics::SampleSet;

SampleSet draw_oracle(const Config& c, const Problem& p, const std::string& kind,
                      long m, std::uint64_t seed, Json& info) {
  const auto& shape = p.body.shape();
  const auto* ball = std::get_if<geometry::Ball>(&shape);
  const auto* box = std::get_if<geometry::Box>(&shape);
  const bool zero = std::holds_alternative<potentials::Zero>(p.potential.form());
  const auto* lin = std::get_if<potentials::Linear>(&p.potential.form());
  std::string k = kind;
  if (k == "auto") {
    if (zero && ball) {
      k = "uniform_ball";
    } else if (zero && box) {
      k = "uniform_box";
    } else if (lin && box && p.n == 1 && lin->c[0] != 0.0) {
      k = "truncated_exponential";
    } else if (ball || box) {
      k = "rejection";
    } else {
      c.fail("/w2/oracle", "no exact sampler for this body; use a ball or box");
    }
  }
  info["oracle"] = k;
  try {
    if (k == "uniform_ball") {
      if (!ball || !zero) c.fail("/w2/oracle", "uniform_ball needs a ball and zero potential");
      auto s = oracles::sample_uniform_ball(p.n, ball->radius, m, seed);
      s.points.rowwise() += ball->center.transpose();
      return s;
    }
    if (k == "uniform_box") {
      if (!box || !zero) c.fail("/w2/oracle", "uniform_box needs a box and zero potential");
      return oracles::sample_uniform_box(box->lower, box->upper, m, seed);
    }
    if (k == "truncated_exponential") {
      if (!lin || !box || p.n != 1 || lin->c[0] == 0.0) {
        c.fail("/w2/oracle", "truncated_exponential needs a linear potential on a 1-d box");
      }
      // Density e^{-c x} on [a, b]: measure the distance from the end where
      // the density peaks.
      const double slope = std::fabs(lin->c[0]);
      const double width = box->upper[0] - box->lower[0];
      auto s = oracles::sample_truncated_exponential(slope, width, m, seed);
      if (lin->c[0] > 0.0) {
        s.points.array() += box->lower[0];
      } else {
        s.points = (box->upper[0] - s.points.array()).matrix();
      }
      return s;
    }
    if (k == "rejection") {
      const long tries = count_of(c, "/w2/max_tries", 1000, 1);
      auto res = oracles::rejection_sample(p.potential, p.body, m, seed, tries);
      info["acceptance_rate"] = res.acceptance_rate;
      info["oracle_infimum_exact"] = res.infimum_exact;
      return std::move(res.samples);
    }
  } catch (const config::ConfigError&) {
    throw;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) c.fail("/w2/oracle", e.what());
    throw;
  }
  c.fail("/w2/oracle", "unknown oracle '" + k +
                           "' (expected auto, uniform_ball, uniform_box, "
                           "truncated_exponential or rejection)");
}

void cmd_w2(Context& ctx, Json& summary) {
  const Config& c = ctx.cfg;
  const Problem p = load_problem(c);
  const std::string mode = c.string_or("/w2/mode", "chain_vs_oracle");
  if (mode != "chain_vs_oracle" && mode != "oracle_vs_oracle") {
    c.fail("/w2/mode", "expected chain_vs_oracle or oracle_vs_oracle");
  }
  const long m = count_of(c, "/w2/samples", 2000, 2);
  std::string metric = c.string_or("/w2/metric", "auto");
  if (metric == "auto") {
    metric = p.n == 1 ? "1d" : (m <= metrics::kExactAssignmentCap ? "exact" : "sliced");
  }
  if (metric != "1d" && metric != "exact" && metric != "sliced") {
    c.fail("/w2/metric", "expected auto, exact, 1d or sliced");
  }
  if (metric == "1d" && p.n != 1) c.fail("/w2/metric", "1d needs a one-dimensional body");
  if (metric == "exact" && m > metrics::kExactAssignmentCap) {
    c.fail("/w2/samples", "exact W2 is capped at " +
                              std::to_string(metrics::kExactAssignmentCap) + " points");
  }
  const long n_proj = count_of(c, "/w2/projections", 64, 1);
  const double factor = c.number_or("/w2/floor_factor", 2.0);
  const double slack = c.number_or("/w2/slack", 0.05);
  const std::string oracle_kind = c.string_or("/w2/oracle", "auto");

  auto distance = [&](const SampleSet& a, const SampleSet& b) {
    if (metric == "1d") return metrics::w2_1d(a, b);
    if (metric == "exact") return metrics::w2_exact(a, b);
    return metrics::w2_sliced(a, b, int(n_proj), ctx.seed);
  };

  Json info;
  const SampleSet oracle_a = draw_oracle(c, p, oracle_kind, m, ctx.seed, info);
  const SampleSet oracle_b = draw_oracle(c, p, oracle_kind, m, ctx.seed + 1, info);
  const double floor = distance(oracle_a, oracle_b);

  BoundReport floor_rep;
  floor_rep.name = "oracle-vs-oracle W2^2 floor";
  floor_rep.bound = floor;
  floor_rep.inputs = {{"samples", double(m)}};
  floor_rep.note = "finite-sample floor (" + metric + ")";
  ctx.add(floor_rep);
  summary["w2"] = info;
  summary["w2"]["metric"] = metric;
  summary["w2"]["mode"] = mode;
  summary["w2"]["samples"] = m;
  summary["w2"]["floor"] = floor;
  summary["start"] = start_json(p);

  auto out = ctx.csv("w2.csv", {"comparison", "metric", "w2_squared", "threshold", "verdict"});
  out.row({"oracle_vs_oracle", metric, fmt(floor), "", ""});

  auto write_samples = [&](const std::string& name, const SampleSet& s) {
    auto f = ctx.csv(name, point_columns({"index"}, p.n));
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      std::vector<std::string> row{std::to_string(i)};
      append_point(row, s.points.row(i).transpose());
      f.row(row);
    }
    f.close();
  };
  write_samples("oracle_samples.csv", oracle_a);

  if (mode == "chain_vs_oracle") {
    const StepPlan plan = resolve_steps(c, p);
    std::optional<chains::ChainConfig> base;
    try {
      base.emplace(p.body, p.potential, p.x0, plan.eta, plan.steps, ctx.seed, 0, p.L);
    } catch (const Error& e) {
      c.fail("/chain", e.what());
    }
    Eigen::MatrixXd pts(m, p.n);
    parallel_for(std::size_t(m), ctx.threads, [&](std::size_t r) {
      const auto traj = chains::run_plmc(base->with_replica(std::uint32_t(r)),
                                         std::max(1L, plan.steps));
      pts.row(Eigen::Index(r)) = traj.final_point.transpose();
    });
    const SampleSet chain(std::move(pts), metrics::Provenance::Chain);
    write_samples("chain_samples.csv", chain);
    const double value = distance(chain, oracle_a);
    const double threshold = factor * floor + slack;
    BoundReport rep;
    rep.name = "chain-vs-oracle W2^2";
    rep.bound = threshold;
    rep.empirical = value;
    rep.standard_error = 0.0;
    rep.inputs = {{"eta", plan.eta}, {"k", double(plan.steps)}, {"floor", floor}};
    rep.note = "threshold = " + short_fmt(factor) + " * floor + " + short_fmt(slack);
    ctx.add(rep);
    out.row({"chain_vs_oracle", metric, fmt(value), fmt(threshold),
             value <= threshold ? "pass" : "fail"});

    const auto mc = metrics::moments(chain);
    const auto mo = metrics::moments(oracle_a);
    summary["w2"]["value"] = value;
    summary["w2"]["threshold"] = threshold;
    summary["eta"] = plan.eta;
    summary["steps"] = plan.steps;
    summary["moments"] = {{"chain_second_moment", mc.second_moment},
                          {"chain_second_moment_se", mc.second_moment_se},
                          {"oracle_second_moment", mo.second_moment},
                          {"oracle_second_moment_se", mo.second_moment_se}};
    if (plan.schedule) {
      summary["schedule"] = schedule_json(*plan.schedule);
      ctx.add(schedule_report(*plan.schedule, c.number("/schedule/C_LS"),
                              c.number("/schedule/eps")));
    }
  }
  out.close();
}

// ---------------------------------------------------------------- schedule

void cmd_schedule(Context& ctx, Json& summary) {
  const Config& c = ctx.cfg;
  const Problem p = load_problem(c);
  if (!c.has("/schedule")) c.fail("/schedule", "required section is missing");
  const auto s = *schedule_from(c, p);
  auto out = ctx.csv("schedule.csv", {"quantity", "value"});
  const auto js = schedule_json(s);
  for (const auto& [key, value] : js.items()) {
    out.row({key, value.is_string() ? value.get<std::string>() : value.dump()});
  }
  out.close();
  summary["start"] = start_json(p);
  summary["schedule"] = js;
  ctx.add(schedule_report(s, c.number("/schedule/C_LS"), c.number("/schedule/eps")));
}

using Handler = std::function<void(Context&, Json&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"sample", cmd_sample},       {"coupled-error", cmd_coupled_error},
      {"localtime", cmd_localtime}, {"warmstart", cmd_warmstart},
      {"w2", cmd_w2},               {"schedule", cmd_schedule}};
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"sample",    "coupled-error", "localtime",
                                              "warmstart", "w2",            "schedule"};
  return names;
}

Json to_json(const BoundReport& r) {
  Json inputs = Json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = num(v);
  Json j{{"name", r.name}, {"bound", num(r.bound)}, {"inputs", inputs}, {"note", r.note}};
  j["empirical"] = r.empirical ? num(*r.empirical) : Json(nullptr);
  j["standard_error"] = r.standard_error ? num(*r.standard_error) : Json(nullptr);
  j["verdict"] = r.empirical ? (r.satisfied() ? "pass" : "fail") : "n/a";
  return j;
}

std::string render_table(const std::vector<BoundReport>& reports) {
  std::size_t width = 6;
  for (const auto& r : reports) width = std::max(width, r.name.size());
  auto cell = [](std::optional<double> v) {
    if (!v) return std::string("-");
    std::ostringstream os;
    os << std::setprecision(6) << *v;
    return os.str();
  };
  std::ostringstream os;
  os << std::left << std::setw(int(width)) << "report" << "  " << std::setw(14)
     << "bound" << std::setw(14) << "empirical" << std::setw(14) << "se"
     << "verdict\n";
  for (const auto& r : reports) {
    os << std::setw(int(width)) << r.name << "  " << std::setw(14) << cell(r.bound)
       << std::setw(14) << cell(r.empirical) << std::setw(14) << cell(r.standard_error)
       << (r.empirical ? (r.satisfied() ? "pass" : "FAIL") : "n/a") << "\n";
    if (!r.note.empty()) os << std::string(width + 2, ' ') << r.note << "\n";
  }
  return os.str();
}

StudyResult run_command(const std::string& command, const std::string& config_text,
                        const RunOptions& options) {
  const auto& table = handlers();
  const auto handler = table.find(command);
  if (handler == table.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  }
  Context ctx{Config::parse(config_text), 0, 1, options.out_dir, {}};
  for (const auto& [path, value] : options.overrides) ctx.cfg.set_scalar(path, value);
  if (options.seed) ctx.cfg.set_scalar("seed", std::to_string(*options.seed));
  ctx.seed = ctx.cfg.seed("/seed", 0);
  // Threads change scheduling only, so the flag is not echoed into outputs.
  const long threads =
      options.threads ? long(*options.threads) : ctx.cfg.integer_or("/threads", 1);
  if (threads < 1 || threads > 1024) ctx.cfg.fail("/threads", "must be in [1, 1024]");
  ctx.threads = unsigned(threads);

  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + ctx.out.string() + ": " + ec.message());

  Json summary{{"schema", kSchemaLine + 2},
               {"command", command},
               {"seed", ctx.seed},
               {"rng", {{"generator", kGeneratorId}, {"gaussian", kGaussianTransform}}}};
  const auto t0 = std::chrono::steady_clock::now();
  handler->second(ctx, summary);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json reports = Json::array();
  for (const auto& r : ctx.result.reports) {
    reports.push_back(to_json(r));
    if (!r.satisfied()) ctx.result.all_satisfied = false;
  }
  summary["reports"] = reports;
  summary["all_satisfied"] = ctx.result.all_satisfied;
  summary["config"] = ctx.cfg.resolved();
  summary["files"] = ctx.result.files;
  summary["timing_file"] = "timing.json";
  write_text(ctx.out / "summary.json", summary.dump(2) + "\n");
  // Wall-clock time lives in its own file so the rest of the output stays
  // bitwise reproducible.
  write_text(ctx.out / "timing.json",
             Json{{"command", command}, {"runtime_seconds", seconds}}.dump(2) + "\n");
  ctx.result.files.push_back("summary.json");
  ctx.result.files.push_back("timing.json");
  ctx.result.summary = std::move(summary);
  return std::move(ctx.result);
}

}  // namespace plmc::studies
