#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hadamard/convex_set.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/multimap.hpp"
#include "hadamard/schedule.hpp"
#include "hadamard/trace.hpp"

namespace hadamard {

enum class Scheme { PicardS, Mann, Ishikawa, Picard };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PicardS: return "picard_s";
    case Scheme::Mann: return "mann";
    case Scheme::Ishikawa: return "ishikawa";
    case Scheme::Picard: return "picard";
  }
  return "?";
}

inline std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "picard_s") return Scheme::PicardS;
  if (name == "mann") return Scheme::Mann;
  if (name == "ishikawa") return Scheme::Ishikawa;
  if (name == "picard") return Scheme::Picard;
  return std::nullopt;
}

/// One variational-inequality problem instance: the constraint sets K_i, the
/// mappings T_i (a single pair for the basic problem), the start point, the
/// weight schedule and the run/certification tolerances.
struct VipProblem {
  SpaceModel space;
  std::vector<ConvexSet> sets;
  std::vector<MultiMap> maps;
  Point x0;
  Schedule schedule = Schedule::constant(0.5, 0.5);
  int max_iter = 500;
  double tol_fp = 1e-8;
  double tol_res = 1e-6;
  int sample_size = 256;
  std::uint64_t seed = 0;
  std::vector<Point> fixed_points;  // declared Tp = {p} points, diagnostics only
  double weight_lo = 0.1;           // [b,c] window for schedule validation
  double weight_hi = 0.9;

  bool is_system() const { return maps.size() > 1; }

  /// The set the iteration projects onto: K for a single problem, the
  /// intersection of the K_i (with x0 as witness) for systems.
  ConvexSet combined_constraint() const {
    if (sets.size() == 1) return sets.front();
    return ConvexSet::intersection(sets, x0);
  }

  void validate() const {
    if (sets.empty() || maps.empty()) throw DomainError("VipProblem: sets and maps required");
    if (sets.size() != maps.size())
      throw DomainError("VipProblem: one constraint set per mapping required");
    for (const auto& k : sets)
      if (!(k.space() == space)) throw DomainError("VipProblem: set space mismatch");
    for (const auto& t : maps)
      if (!(t.space() == space)) throw DomainError("VipProblem: map space mismatch");
    check_point(space, x0, "VipProblem");
    for (const auto& k : sets)
      if (!contains(k, x0, 1e-9)) throw DomainError("VipProblem: x0 is not in every K_i");
    for (const auto& p : fixed_points) check_point(space, p, "VipProblem fixed point");
    if (max_iter < 1) throw DomainError("VipProblem: max_iter must be >= 1");
    if (!(tol_fp >= 0.0)) throw DomainError("VipProblem: tol_fp must be nonnegative");
    if (!(tol_res > 0.0)) throw DomainError("VipProblem: tol_res must be positive");
    if (sample_size < 1) throw DomainError("VipProblem: sample_size must be >= 1");
    if (static_cast<std::size_t>(std::max(1, schedule.map_count())) != maps.size())
      throw DomainError("VipProblem: schedule arity does not match the number of mappings");
    schedule.validate(weight_lo, weight_hi);
  }
};

/// Solve outcome. `certified` means the sampled residual certificate passed;
/// `converged` means the displacement criterion d(x_n, Tx_n) < tol_fp fired
/// before max_iter. A run can certify without converging (the solution of
/// the inequality need not be a fixed point of T).
struct VipSolution {
  Point x;
  Point u;
  double residual{};
  int iterations{};
  bool certified{};
  bool converged{};
  std::vector<double> residuals;  // per-mapping certificates for systems
};

/// VIP residual of the pair (u, x) against a sample S of K:
///   min over y in S of <ux, xy>.
/// The pair solves the inequality on the sampled points iff this is >= -tol.
inline double residual(const ConvexSet& K, const Point& x, const Point& u, const SampleSet& S) {
  if (S.points.size() == 0) throw DomainError("residual: empty sample");
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& y : S.points.points())
    worst = std::min(worst, quasi_inner(K.space(), u, x, x, y));
  return worst;
}

namespace detail {

inline std::pair<Point, TraceRow> scheme_step(const VipProblem& p, const ConvexSet& K,
                                              Scheme scheme, const Point& x, int n) {
  const MultiMap& T = p.maps.front();
  TraceRow row;
  row.n = n;
  const Point w = nearest_selection(T, x);
  row.d_x_Tx = dist(p.space, x, w);
  for (const auto& fp : p.fixed_points) row.d_to_fixed.push_back(dist(p.space, x, fp));
  Point next = x;
  switch (scheme) {
    case Scheme::PicardS: {
      // z_n = P_K((1-beta_n) x_n (+) beta_n w_n),   w_n in T x_n
      // y_n = P_K((1-alpha_n) w_n (+) alpha_n v_n), v_n in T z_n
      // x_{n+1} = P_K(u_n),                         u_n in T y_n
      const Point z = project(K, combine(p.space, x, w, p.schedule.beta(n)));
      const Point v = nearest_selection(T, z);
      const Point y = project(K, combine(p.space, w, v, p.schedule.alpha(n)));
      const Point u = nearest_selection(T, y);
      next = project(K, u);
      for (const auto& fp : p.fixed_points) {
        row.d_y_to_fixed.push_back(dist(p.space, y, fp));
        row.d_z_to_fixed.push_back(dist(p.space, z, fp));
      }
      break;
    }
    case Scheme::Mann: {
      next = project(K, combine(p.space, x, w, p.schedule.alpha(n)));
      break;
    }
    case Scheme::Ishikawa: {
      const Point y = project(K, combine(p.space, x, w, p.schedule.beta(n)));
      const Point v = nearest_selection(T, y);
      next = project(K, combine(p.space, x, v, p.schedule.alpha(n)));
      for (const auto& fp : p.fixed_points) row.d_y_to_fixed.push_back(dist(p.space, y, fp));
      break;
    }
    case Scheme::Picard: {
      next = project(K, w);
      break;
    }
  }
  row.step_displacement = dist(p.space, x, next);
  return {next, row};
}

inline std::pair<Point, TraceRow> modified_step_k(const VipProblem& p, const ConvexSet& K,
                                                  const Point& x, int n) {
  const std::size_t N = p.maps.size();
  TraceRow row;
  row.n = n;
  for (const auto& fp : p.fixed_points) row.d_to_fixed.push_back(dist(p.space, x, fp));

  std::vector<Point> w;
  w.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    w.push_back(nearest_selection(p.maps[i], x));
    row.per_map_d_x_Tx.push_back(dist(p.space, x, w.back()));
    row.d_x_Tx = std::max(row.d_x_Tx, row.per_map_d_x_Tx.back());
  }

  // z_n = P_K(gamma_0 x_n (+) gamma_1 w_1 (+) ... (+) gamma_N w_N)
  std::vector<Point> zpts;
  zpts.reserve(N + 1);
  zpts.push_back(x);
  zpts.insert(zpts.end(), w.begin(), w.end());
  const Point z = project(K, multi_combine(p.space, zpts, Weights(p.schedule.gamma_weights(n))));
  for (const auto& fp : p.fixed_points) row.d_z_to_fixed.push_back(dist(p.space, z, fp));

  std::vector<Point> v;
  v.reserve(N);
  for (std::size_t i = 0; i < N; ++i) v.push_back(nearest_selection(p.maps[i], z));

  // y_n = P_K(alpha_1 w_1 (+) ... (+) alpha_N w_N (+) beta_1 v_1 (+) ... (+) beta_N v_N)
  std::vector<Point> ypts = w;
  ypts.insert(ypts.end(), v.begin(), v.end());
  std::vector<double> yw = p.schedule.alpha_weights(n);
  const std::vector<double> bw = p.schedule.beta_weights(n);
  yw.insert(yw.end(), bw.begin(), bw.end());
  const Point y = project(K, multi_combine(p.space, ypts, Weights(std::move(yw))));
  for (const auto& fp : p.fixed_points) row.d_y_to_fixed.push_back(dist(p.space, y, fp));

  // x_{n+1} = P_K(lambda_1 u_1 (+) ... (+) lambda_N u_N)
  std::vector<Point> u;
  u.reserve(N);
  for (std::size_t i = 0; i < N; ++i) u.push_back(nearest_selection(p.maps[i], y));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      row.max_selection_gap = std::max(row.max_selection_gap, dist(p.space, u[i], u[j]));
  const Point next = project(K, multi_combine(p.space, u, Weights(p.schedule.lambda_weights(n))));

  row.step_displacement = dist(p.space, x, next);
  return {next, row};
}

struct SampledResidual {
  std::vector<SampleSet> samples;  // one per constraint set

  static SampledResidual draw(const VipProblem& p) {
    SampledResidual s;
    for (std::size_t i = 0; i < p.sets.size(); ++i)
      s.samples.push_back(sample(p.sets[i], p.sample_size, p.seed + (i == 0 ? 0 : 1 + i)));
    return s;
  }

  double row_residual(const VipProblem& p, const Point& x) const {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.maps.size(); ++i) {
      const Point u = nearest_selection(p.maps[i], x);
      worst = std::min(worst, residual(p.sets[i], x, u, samples[i]));
    }
    return worst;
  }
};

}  // namespace detail

/// One step of the proximal multivalued Picard-S iteration.
inline std::pair<Point, TraceRow> picard_s_step(const VipProblem& problem, const Point& x_n, int n) {
  return detail::scheme_step(problem, problem.combined_constraint(), Scheme::PicardS, x_n, n);
}

/// One step of a baseline scheme (Mann, Ishikawa, or Picard), sharing the
/// nearest-point selection rule and projection wrapper of picard_s_step.
inline std::pair<Point, TraceRow> baseline_step(Scheme scheme, const VipProblem& problem,
                                                const Point& x_n, int n) {
  return detail::scheme_step(problem, problem.combined_constraint(), scheme, x_n, n);
}

/// One step of the modified (N-mapping) proximal multivalued Picard-S
/// iteration; reduces to picard_s_step for N = 1 with matched weights.
inline std::pair<Point, TraceRow> modified_step(const VipProblem& problem, const Point& x_n, int n) {
  return detail::modified_step_k(problem, problem.combined_constraint(), x_n, n);
}

struct SolveOutput {
  VipSolution solution;
  IterationTrace trace;
};

/// Run one scheme on a single-mapping problem until d(x_n, Tx_n) < tol_fp or
/// max_iter. Non-convergence is a flagged result, not an error.
inline SolveOutput run_scheme(const VipProblem& problem, Scheme scheme) {
  problem.validate();
  if (problem.is_system())
    throw DomainError("run_scheme: problem has several mappings; use solve_system");
  const ConvexSet K = problem.combined_constraint();
  const auto S = detail::SampledResidual::draw(problem);
  const MultiMap& T = problem.maps.front();

  IterationTrace trace;
  trace.space = problem.space;
  trace.scheme = scheme_name(scheme);
  trace.fixed_points = problem.fixed_points;
  trace.schedule_echo = problem.schedule.echo();
  trace.seed = problem.seed;

  Point x = project(K, problem.x0);
  trace.iterates.push_back(x);
  bool converged = false;
  for (int n = 0; n < problem.max_iter; ++n) {
    trace.final_d_x_Tx = dist_point_set(x, evaluate(T, x));
    if (trace.final_d_x_Tx < problem.tol_fp) {
      converged = true;
      break;
    }
    auto [next, row] = detail::scheme_step(problem, K, scheme, x, n);
    row.residual_sample = S.row_residual(problem, x);
    trace.rows.push_back(std::move(row));
    x = std::move(next);
    trace.iterates.push_back(x);
  }
  if (!converged) trace.final_d_x_Tx = dist_point_set(x, evaluate(T, x));

  VipSolution sol;
  sol.x = x;
  sol.u = nearest_selection(T, x);
  sol.residual = residual(problem.sets.front(), sol.x, sol.u, S.samples.front());
  sol.residuals = {sol.residual};
  sol.iterations = static_cast<int>(trace.rows.size());
  sol.converged = converged;
  sol.certified = sol.residual >= -problem.tol_res;
  return {std::move(sol), std::move(trace)};
}

/// The paper's iteration (Picard-S) on a single-mapping problem.
inline SolveOutput solve_vip(const VipProblem& problem) {
  return run_scheme(problem, Scheme::PicardS);
}

/// Run the N-mapping system iteration until max_i d(x_n, T_i x_n) < tol_fp
/// or max_iter; certify the residual for every (K_i, T_i) pair.
inline SolveOutput solve_system(const VipProblem& problem) {
  problem.validate();
  const ConvexSet K = problem.combined_constraint();
  const auto S = detail::SampledResidual::draw(problem);

  IterationTrace trace;
  trace.space = problem.space;
  trace.scheme = "modified_picard_s";
  trace.map_count = static_cast<int>(problem.maps.size());
  trace.fixed_points = problem.fixed_points;
  trace.schedule_echo = problem.schedule.echo();
  trace.seed = problem.seed;

  Point x = project(K, problem.x0);
  trace.iterates.push_back(x);
  bool converged = false;
  for (int n = 0; n < problem.max_iter; ++n) {
    double gap = 0.0;
    for (const auto& T : problem.maps) gap = std::max(gap, dist_point_set(x, evaluate(T, x)));
    trace.final_d_x_Tx = gap;
    if (gap < problem.tol_fp) {
      converged = true;
      break;
    }
    auto [next, row] = detail::modified_step_k(problem, K, x, n);
    row.residual_sample = S.row_residual(problem, x);
    trace.rows.push_back(std::move(row));
    x = std::move(next);
    trace.iterates.push_back(x);
  }
  if (!converged) {
    double gap = 0.0;
    for (const auto& T : problem.maps) gap = std::max(gap, dist_point_set(x, evaluate(T, x)));
    trace.final_d_x_Tx = gap;
  }

  VipSolution sol;
  sol.x = x;
  sol.iterations = static_cast<int>(trace.rows.size());
  sol.converged = converged;
  sol.certified = true;
  sol.residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < problem.maps.size(); ++i) {
    const Point u_i = nearest_selection(problem.maps[i], x);
    const double r = residual(problem.sets[i], x, u_i, S.samples[i]);
    sol.residuals.push_back(r);
    if (r < sol.residual) sol.residual = r;
    if (r < -problem.tol_res) sol.certified = false;
    if (i == 0) sol.u = u_i;
  }
  sol.x = x;
  return {std::move(sol), std::move(trace)};
}

struct TruncatedResult {
  VipSolution solution;
  bool strict_interior{};
  double radius{};  // the truncation radius actually used
  IterationTrace trace;
};

/// Solve the truncated problem on K_r = K n Ball(o, r). When the solution
/// lands strictly inside the truncation ball, re-certify the residual
/// against a sample of the full K; that certificate is withheld otherwise.
inline TruncatedResult truncated_solve(const VipProblem& problem, const Point& o, double r) {
  if (problem.is_system()) throw DomainError("truncated_solve: single-mapping problems only");
  if (!(r > 0.0)) throw DomainError("truncated_solve: radius must be positive");
  check_point(problem.space, o, "truncated_solve");
  if (dist(problem.space, o, problem.x0) > r)
    throw DomainError("truncated_solve: x0 is outside Ball(o, r); no witness for K_r");

  VipProblem truncated = problem;
  truncated.sets = {ConvexSet::intersection(
      {problem.sets.front(), ConvexSet::ball(problem.space, o, r)}, problem.x0)};
  auto [sol, trace] = solve_vip(truncated);

  TruncatedResult out;
  out.strict_interior = dist(problem.space, o, sol.x) < r - problem.tol_res;
  out.radius = r;
  if (out.strict_interior) {
    const SampleSet full = sample(problem.sets.front(), problem.sample_size, problem.seed + 1);
    sol.residual = residual(problem.sets.front(), sol.x, sol.u, full);
    sol.residuals = {sol.residual};
    sol.certified = sol.residual >= -problem.tol_res;
  }
  out.solution = std::move(sol);
  out.trace = std::move(trace);
  return out;
}

/// Doubling driver for the truncation radius: rerun with 2r until the
/// solution is strictly interior (at most 20 doublings).
inline TruncatedResult truncated_solve_expanding(const VipProblem& problem, const Point& o,
                                                 double r0) {
  TruncatedResult last = truncated_solve(problem, o, r0);
  for (int k = 0; k < 20 && !last.strict_interior; ++k)
    last = truncated_solve(problem, o, last.radius * 2.0);
  return last;
}

}  // namespace hadamard
