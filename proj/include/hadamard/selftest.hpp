#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hadamard/diagnostics.hpp"
#include "hadamard/multimap.hpp"
#include "hadamard/rng.hpp"
#include "hadamard/scenario.hpp"
#include "hadamard/solver.hpp"

namespace hadamard {

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::string first_failure;
  bool pass() const { return failures == 0; }
};

namespace selftest_detail {

class Checker {
 public:
  explicit Checker(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result_.checks;
    if (!ok) {
      if (result_.failures == 0) result_.first_failure = what;
      ++result_.failures;
    }
  }

  template <typename... Args>
  void check_le(double value, double bound, const char* label, Args&&... witness) {
    if (value <= bound) {
      ++result_.checks;
      return;
    }
    std::ostringstream os;
    os << label << ": " << value << " > " << bound;
    ((os << " | " << witness), ...);
    check(false, os.str());
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

inline Point random_model_point(const SpaceModel& space, SplitMix64& rng, double scale = 1.5) {
  switch (space.kind) {
    case ModelKind::Euclidean: {
      std::vector<double> c(static_cast<std::size_t>(space.dim));
      for (double& v : c) v = scale * rng.next_gaussian();
      return euclidean_point(std::move(c));
    }
    case ModelKind::Hyperboloid: {
      std::vector<double> s(static_cast<std::size_t>(space.dim));
      for (double& v : s) v = 0.6 * scale * rng.next_gaussian();
      return lift_to_hyperboloid(s);
    }
    case ModelKind::StarTree: {
      const int branch = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(space.dim)));
      return star_tree_point(branch, scale * std::abs(rng.next_gaussian()));
    }
  }
  return euclidean_point({0.0});
}

inline std::vector<SpaceModel> suite_models() {
  return {SpaceModel::euclidean(3), SpaceModel::hyperboloid(2), SpaceModel::star_tree(4)};
}

inline std::vector<ConvexSet> suite_sets() {
  const auto e2 = SpaceModel::euclidean(2);
  const auto e3 = SpaceModel::euclidean(3);
  const auto h2 = SpaceModel::hyperboloid(2);
  const auto tree = SpaceModel::star_tree(4);
  std::vector<ConvexSet> sets;
  sets.push_back(ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0));
  sets.push_back(ConvexSet::ball(e3, euclidean_point({0.5, -1, 2}), 2.0));
  sets.push_back(ConvexSet::half_space(e2, {1, 0}, 0.0));
  sets.push_back(ConvexSet::half_space(e3, {1, -2, 0.5}, 1.0));
  sets.push_back(ConvexSet::ball(h2, hyperboloid_base(2), 1.5));
  sets.push_back(ConvexSet::sub_tree(tree, {1, 2}, 2.0));
  sets.push_back(ConvexSet::ball(tree, star_tree_point(1, 1.0), 2.0));
  // nested members keep the alternating-projection limit at the metric projection
  sets.push_back(ConvexSet::intersection({ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0),
                                          ConvexSet::ball(e2, euclidean_point({0, 0}), 2.0)},
                                         euclidean_point({0, 0})));
  return sets;
}

}  // namespace selftest_detail

inline SuiteResult suite_geodesic_core(double tol_scale = 1.0) {
  using namespace selftest_detail;
  Checker c("geodesic-core");
  const double tol = 1e-9 * tol_scale;
  SplitMix64 rng(101);
  for (const auto& space : suite_models()) {
    const std::string tag = model_name(space.kind);
    for (int t = 0; t < 10000; ++t) {
      const Point x = random_model_point(space, rng);
      const Point y = random_model_point(space, rng);
      const Point z = random_model_point(space, rng);
      const double dxy = dist(space, x, y);
      c.check_le(std::abs(dist(space, y, x) - dxy), tol, "dist symmetry", tag);
      c.check_le(-dxy, 0.0, "dist nonnegative", tag);
      c.check_le(dist(space, x, x), 0.0, "dist identity", tag);
      const double lam = rng.next_double();
      const Point m = combine(space, x, y, lam);
      c.check_le(std::abs(dist(space, x, m) - lam * dxy), tol, "geodesic from-x", tag);
      c.check_le(std::abs(dist(space, y, m) - (1.0 - lam) * dxy), tol, "geodesic from-y", tag);
      c.check_le(dist(space, m, z) - ((1.0 - lam) * dist(space, x, z) + lam * dist(space, y, z)),
                 tol, "metric convexity", tag);
      c.check_le(cat0_defect(space, x, y, z, lam), tol, "cat0 defect", tag);
      if (space.kind == ModelKind::Euclidean)
        c.check_le(std::abs(cat0_defect(space, x, y, z, lam)), 1e-12 * tol_scale,
                   "euclidean cat0 equality", tag);

      const Point d = random_model_point(space, rng);
      const Point e = random_model_point(space, rng);
      c.check_le(std::abs(quasi_inner(space, x, y, x, y) - dxy * dxy), tol, "quasi norm", tag);
      c.check_le(std::abs(quasi_inner(space, x, y, z, d) + quasi_inner(space, y, x, z, d)), tol,
                 "quasi antisymmetry", tag);
      c.check_le(std::abs(quasi_inner(space, x, y, z, d) -
                          (quasi_inner(space, x, e, z, d) + quasi_inner(space, e, y, z, d))),
                 tol, "quasi additivity", tag);
      c.check_le(std::abs(quasi_inner(space, x, y, z, d)) - dxy * dist(space, z, d), tol,
                 "cauchy-schwarz", tag);
    }
    // degenerate weights return the selected point exactly
    for (int t = 0; t < 100; ++t) {
      std::vector<Point> pts = {random_model_point(space, rng), random_model_point(space, rng),
                                random_model_point(space, rng)};
      const std::size_t pick = rng.next_below(3);
      std::vector<double> w(3, 0.0);
      w[pick] = 1.0;
      const Point r = multi_combine(space, pts, Weights(w));
      c.check(r.coords == pts[pick].coords, std::string("multi_combine degenerate weights: ") + tag);
    }
    // convex-combination distance bound
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 2 + rng.next_below(4);
      std::vector<Point> pts;
      std::vector<double> w(n);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(random_model_point(space, rng));
        w[i] = rng.next_double() + 1e-3;
        sum += w[i];
      }
      double fix = 1.0;
      for (std::size_t i = 1; i < n; ++i) {
        w[i] /= sum;
        fix -= w[i];
      }
      w[0] = fix;
      const Point r = multi_combine(space, pts, Weights(w));
      const Point z = random_model_point(space, rng);
      double bound = 0.0;
      for (std::size_t i = 0; i < n; ++i) bound += w[i] * dist(space, pts[i], z);
      c.check_le(dist(space, r, z) - bound, tol, "multi_combine distance bound", tag);
    }
  }
  return c.take();
}

inline SuiteResult suite_convex_sets(double tol_scale = 1.0) {
  using namespace selftest_detail;
  Checker c("convex-sets");
  const double tol = 1e-9 * tol_scale;
  SplitMix64 rng(202);
  for (const auto& K : suite_sets()) {
    const auto& space = K.space();
    const auto S = sample(K, 256, 7);
    for (int t = 0; t < 1000; ++t) {
      const Point x = random_model_point(space, rng);
      const Point y = random_model_point(space, rng);
      const Point px = project(K, x);
      const Point py = project(K, y);
      c.check_le(dist(space, px, py) - dist(space, x, y), tol, "projection nonexpansive");
      c.check_le(dist(space, project(K, px), px), tol, "projection idempotent");
      c.check_le(projection_defect(K, x, px, S), 1e-7 * tol_scale, "projection characterization");
    }
    // geodesic convexity on sampled pairs
    const auto& pts = S.points.points();
    for (int t = 0; t < 500; ++t) {
      const Point& x = pts[rng.next_below(pts.size())];
      const Point& y = pts[rng.next_below(pts.size())];
      c.check(contains(K, combine(space, x, y, rng.next_double()), 1e-9),
              "sampled convexity witness");
    }
    // samples are deterministic and stay in the set
    const auto S2 = sample(K, 256, 7);
    c.check(S.points.size() == S2.points.size(), "sample determinism (size)");
    for (std::size_t i = 0; i < S.points.size(); ++i)
      c.check(S.points.points()[i].coords == S2.points.points()[i].coords, "sample determinism");
    for (const auto& p : pts) c.check(contains(K, p, 1e-9), "sample containment");
  }
  return c.take();
}

inline SuiteResult suite_multivalued(double tol_scale = 1.0) {
  using namespace selftest_detail;
  Checker c("multivalued");
  const double tol = 1e-9 * tol_scale;
  SplitMix64 rng(303);
  const auto e2 = SpaceModel::euclidean(2);
  const auto K = ConvexSet::ball(e2, euclidean_point({0, 0}), 2.0);
  const Point anchor = euclidean_point({0.4, -0.3});

  // hausdorff is a metric on normalized finite sets
  auto draw_set = [&](int n) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(random_model_point(e2, rng));
    return FinitePointSet(e2, std::move(pts));
  };
  for (int t = 0; t < 1000; ++t) {
    const auto A = draw_set(1 + static_cast<int>(rng.next_below(4)));
    const auto B = draw_set(1 + static_cast<int>(rng.next_below(4)));
    const auto C = draw_set(1 + static_cast<int>(rng.next_below(4)));
    c.check_le(std::abs(hausdorff(A, B) - hausdorff(B, A)), tol, "hausdorff symmetry");
    c.check_le(hausdorff(A, A), tol, "hausdorff identity");
    c.check_le(hausdorff(A, C) - (hausdorff(A, B) + hausdorff(B, C)), tol, "hausdorff triangle");
  }

  const std::vector<MultiMap> maps = {
      MultiMap::union_of(e2, {MapDescriptor::contraction(anchor, 0.5),
                              MapDescriptor::contraction(anchor, 0.8)}),
      MultiMap::segment(e2, MapDescriptor::contraction(anchor, 0.6), MapDescriptor::identity(), 6),
      MultiMap::constant_set(FinitePointSet(e2, {euclidean_point({1, 1})})),
      MultiMap::union_of(e2, {MapDescriptor::projection(K), MapDescriptor::identity()})};
  for (const auto& T : maps) {
    // nearest selection is exhaustively optimal
    for (int t = 0; t < 200; ++t) {
      const Point x = random_model_point(e2, rng);
      const Point u = nearest_selection(T, x);
      const auto values = evaluate(T, x);
      for (const auto& v : values.points())
        c.check_le(dist(e2, x, u) - dist(e2, x, v), 1e-15 * tol_scale, "nearest selection optimal");
    }
    // union-of-nonexpansive maps and projections stay nonexpansive
    const double plain = nonexpansiveness_ratio(T, K, 500, 11);
    const double projected = nonexpansiveness_ratio(projected_multimap(K, T), K, 500, 11);
    c.check_le(plain, 1.0 + 1e-7 * tol_scale, "multimap nonexpansive");
    c.check_le(projected, plain + tol, "projection does not worsen the ratio");
  }
  return c.take();
}

inline SuiteResult suite_vip_solver(double tol_scale = 1.0) {
  using namespace selftest_detail;
  Checker c("vip-solver");
  const double tol = 1e-9 * tol_scale;

  for (const auto& scenario : builtin_scenarios()) {
    if (scenario.maps.size() != 1 || scenario.fixed_points.empty()) continue;
    VipProblem p = scenario.problem();
    p.tol_fp = 0.0;
    p.max_iter = 500;
    auto [sol, trace] = solve_vip(p);
    for (const auto& fp : scenario.fixed_points)
      c.check_le(fejer_audit(p.space, trace, fp), tol, "fejer monotone", scenario.name);
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
      const auto& row = trace.rows[k];
      for (std::size_t i = 0; i < row.d_to_fixed.size(); ++i) {
        const double dnext = dist(p.space, trace.iterates[k + 1], scenario.fixed_points[i]);
        c.check_le(row.d_y_to_fixed[i] - row.d_to_fixed[i], tol, "chain d(y,p) <= d(x,p)",
                   scenario.name);
        c.check_le(row.d_z_to_fixed[i] - row.d_to_fixed[i], tol, "chain d(z,p) <= d(x,p)",
                   scenario.name);
        c.check_le(dnext - row.d_y_to_fixed[i], tol, "chain d(x+,p) <= d(y,p)", scenario.name);
      }
    }
  }

  // vanishing displacement and the residual certificate on convergent runs
  for (const char* name : {"ball-contraction", "hyperboloid-contraction", "tree-contraction"}) {
    const auto result = run_scenario(*find_builtin(name));
    c.check(result.solution.converged, std::string("converged: ") + name);
    c.check_le(result.trace.final_d_x_Tx, result.scenario.tol_fp, "final displacement", name);
    c.check(result.solution.certified, std::string("residual certificate: ") + name);
  }

  // system run: chain inequalities and vanishing pairwise selection gaps
  {
    VipProblem p = find_builtin("system-contractions")->problem();
    auto [sol, trace] = solve_system(p);
    c.check(sol.converged, "system converged");
    c.check_le(trace.rows.back().max_selection_gap, p.tol_fp, "final selection gap");
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
      const auto& row = trace.rows[k];
      c.check_le(row.d_y_to_fixed[0] - row.d_to_fixed[0], tol, "system chain d(y,p)");
      c.check_le(row.d_z_to_fixed[0] - row.d_to_fixed[0], tol, "system chain d(z,p)");
      c.check_le(dist(p.space, trace.iterates[k + 1], p.fixed_points[0]) - row.d_to_fixed[0], tol,
                 "system fejer");
    }
  }

  // N = 1 reduction is bit-for-bit
  {
    SplitMix64 rng(404);
    const auto e2 = SpaceModel::euclidean(2);
    const auto K = ConvexSet::ball(e2, euclidean_point({0, 0}), 2.0);
    for (int t = 0; t < 100; ++t) {
      const double alpha = rng.uniform(0.1, 0.9);
      const double beta = rng.uniform(0.1, 0.9);
      VipProblem single;
      single.space = e2;
      single.sets = {K};
      single.maps = {MultiMap::union_of(e2, {MapDescriptor::contraction(euclidean_point({0.3, 0.1}), 0.7)})};
      single.x0 = euclidean_point({0.5, -0.5});
      single.schedule = Schedule::constant(alpha, beta);
      VipProblem system = single;
      system.schedule = Schedule::system_constant({1.0}, {1.0 - alpha}, {alpha}, {1.0 - beta, beta});
      std::vector<double> raw = {rng.next_gaussian(), rng.next_gaussian()};
      const Point x = project(K, euclidean_point(std::move(raw)));
      auto [xs, rs] = picard_s_step(single, x, t);
      auto [xm, rm] = modified_step(system, x, t);
      c.check(xs.coords == xm.coords && rs.d_x_Tx == rm.d_x_Tx &&
                  rs.step_displacement == rm.step_displacement,
              "N=1 reduction bit-for-bit");
    }
  }
  return c.take();
}

inline SuiteResult suite_diagnostics(double tol_scale = 1.0) {
  using namespace selftest_detail;
  Checker c("diagnostics");
  const auto e2 = SpaceModel::euclidean(2);
  SplitMix64 rng(505);

  // estimator against the brute-force grid minimax oracle
  for (int inst = 0; inst < 50; ++inst) {
    const int n = 2 + static_cast<int>(rng.next_below(11));
    std::vector<Point> pts;
    double lo_x = 1e9, hi_x = -1e9, lo_y = 1e9, hi_y = -1e9;
    for (int i = 0; i < n; ++i) {
      pts.push_back(euclidean_point({rng.next_double(), rng.next_double()}));
      lo_x = std::min(lo_x, pts.back().coords[0]);
      hi_x = std::max(hi_x, pts.back().coords[0]);
      lo_y = std::min(lo_y, pts.back().coords[1]);
      hi_y = std::max(hi_y, pts.back().coords[1]);
    }
    const auto est = asymptotic_center_estimate(e2, pts, {0, pts.size()});
    const double pitch = 1e-3;
    double best = std::numeric_limits<double>::infinity();
    const int nx = static_cast<int>((hi_x - lo_x) / pitch) + 1;
    const int ny = static_cast<int>((hi_y - lo_y) / pitch) + 1;
    for (int ix = 0; ix <= nx; ++ix) {
      const double gx = lo_x + ix * pitch;
      for (int iy = 0; iy <= ny; ++iy) {
        const double gy = lo_y + iy * pitch;
        double worst = 0.0;
        for (const auto& p : pts) {
          const double dx = p.coords[0] - gx;
          const double dy = p.coords[1] - gy;
          worst = std::max(worst, dx * dx + dy * dy);
        }
        best = std::min(best, worst);
      }
    }
    const double oracle = std::sqrt(best);
    c.check_le(std::abs(est.radius - oracle), 1e-3 * tol_scale, "grid minimax oracle");
    // radius is exactly the minimax value at the returned center
    double recompute = 0.0;
    for (const auto& p : pts) recompute = std::max(recompute, dist(e2, est.center, p));
    c.check(est.radius == recompute, "radius internal consistency");
  }

  // delta check passes on a certified long run and fails the alternating counterexample
  {
    Scenario s = *find_builtin("ball-constant");
    auto result = run_scenario(s);
    c.check(result.solution.certified, "ball-constant certified");
    c.check(result.delta && result.delta->pass, "delta passes on the certified run");

    IterationTrace alt;
    alt.space = e2;
    for (int i = 0; i < 60; ++i)
      alt.iterates.push_back(i % 2 == 0 ? euclidean_point({0, 0}) : euclidean_point({1, 0}));
    c.check(!delta_convergence_check(e2, alt, 1e-4 * tol_scale).pass,
            "delta fails the alternating counterexample");
  }
  return c.take();
}

inline SuiteResult suite_scenario_io(double tol_scale = 1.0) {
  using namespace selftest_detail;
  Checker c("scenario-io");
  (void)tol_scale;
  // byte-identical summaries on repeated runs
  const auto a = run_scenario(*find_builtin("ball-constant"));
  const auto b = run_scenario(*find_builtin("ball-constant"));
  c.check(a.summary.dump() == b.summary.dump(), "summary determinism");

  // parse -> serialize -> parse is the identity on the builtin catalog
  for (const auto& s : builtin_scenarios()) {
    const json j = to_json(s);
    const Scenario parsed = scenario_from_json(j);
    c.check(to_json(parsed).dump() == j.dump(), "serialization round-trip: " + s.name);
  }
  return c.take();
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"geodesic-core", "convex-sets", "multivalued",
                                                 "vip-solver",    "diagnostics", "scenario-io"};
  return names;
}

/// Run the named suite (or all of them) with the given tolerance scale.
inline std::vector<SuiteResult> run_suites(const std::optional<std::string>& only,
                                           double tol_scale = 1.0) {
  std::vector<SuiteResult> results;
  auto want = [&](const char* name) { return !only || *only == name; };
  if (want("geodesic-core")) results.push_back(suite_geodesic_core(tol_scale));
  if (want("convex-sets")) results.push_back(suite_convex_sets(tol_scale));
  if (want("multivalued")) results.push_back(suite_multivalued(tol_scale));
  if (want("vip-solver")) results.push_back(suite_vip_solver(tol_scale));
  if (want("diagnostics")) results.push_back(suite_diagnostics(tol_scale));
  if (want("scenario-io")) results.push_back(suite_scenario_io(tol_scale));
  return results;
}

}  // namespace hadamard
