#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hadamard/diagnostics.hpp"
#include "hadamard/rng.hpp"
#include "hadamard/solver.hpp"

using namespace hadamard;
using Catch::Approx;

namespace {

const SpaceModel e2 = SpaceModel::euclidean(2);

// Independent oracle: brute-force grid minimax over the bounding box.
double grid_minimax(const std::vector<Point>& pts, double pitch) {
  double lo_x = pts[0].coords[0], hi_x = lo_x, lo_y = pts[0].coords[1], hi_y = lo_y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p.coords[0]);
    hi_x = std::max(hi_x, p.coords[0]);
    lo_y = std::min(lo_y, p.coords[1]);
    hi_y = std::max(hi_y, p.coords[1]);
  }
  double best = std::numeric_limits<double>::infinity();
  const int nx = static_cast<int>((hi_x - lo_x) / pitch) + 1;
  const int ny = static_cast<int>((hi_y - lo_y) / pitch) + 1;
  for (int ix = 0; ix <= nx; ++ix) {
    const double x = lo_x + ix * pitch;
    for (int iy = 0; iy <= ny; ++iy) {
      const double y = lo_y + iy * pitch;
      double worst = 0.0;
      for (const auto& p : pts) {
        const double dx = p.coords[0] - x;
        const double dy = p.coords[1] - y;
        worst = std::max(worst, dx * dx + dy * dy);
      }
      best = std::min(best, worst);
    }
  }
  return std::sqrt(best);
}

IterationTrace trace_of(std::vector<Point> pts, std::uint64_t seed = 7) {
  IterationTrace t;
  t.space = e2;
  t.iterates = std::move(pts);
  t.seed = seed;
  return t;
}

VipProblem contraction_problem() {
  VipProblem p;
  p.space = e2;
  p.sets = {ConvexSet::ball(e2, euclidean_point({0, 0}), 2.0)};
  p.maps = {MultiMap::union_of(e2, {MapDescriptor::contraction(euclidean_point({0.2, 0.1}), 0.9)})};
  p.x0 = euclidean_point({1.5, -0.5});
  p.fixed_points = {euclidean_point({0.2, 0.1})};
  p.max_iter = 200;
  p.tol_fp = 0.0;  // full-length runs for the tail diagnostics
  p.sample_size = 64;
  p.seed = 31;
  return p;
}

}  // namespace

TEST_CASE("asymptotic center of trivial windows") {
  const Point a = euclidean_point({1, 2});
  const std::vector<Point> single = {a};
  const auto c1 = asymptotic_center_estimate(e2, single, {0, 1});
  REQUIRE(c1.center.coords == a.coords);
  REQUIRE(c1.radius == 0.0);

  const Point b = euclidean_point({3, 2});
  const std::vector<Point> pair = {a, b};
  const auto c2 = asymptotic_center_estimate(e2, pair, {0, 2});
  REQUIRE(dist(e2, c2.center, euclidean_point({2, 2})) <= 1e-6);
  REQUIRE(c2.radius == Approx(1.0).margin(1e-6));

  REQUIRE_THROWS_AS(asymptotic_center_estimate(e2, pair, {2, 2}), DomainError);
}

TEST_CASE("asymptotic center of the equilateral triangle matches the circumcenter") {
  const std::vector<Point> tri = {euclidean_point({0, 0}), euclidean_point({1, 0}),
                                  euclidean_point({0.5, std::sqrt(3.0) / 2})};
  const auto est = asymptotic_center_estimate(e2, tri, {0, 3});
  REQUIRE(est.radius == Approx(1.0 / std::sqrt(3.0)).margin(1e-3));
  REQUIRE(dist(e2, est.center, euclidean_point({0.5, 0.5 / std::sqrt(3.0)})) <= 2e-3);
  // radius is internally consistent with the returned center
  double check = 0.0;
  for (const auto& p : tri) check = std::max(check, dist(e2, est.center, p));
  REQUIRE(est.radius == check);
}

TEST_CASE("asymptotic center estimator tracks the grid minimax oracle") {
  SplitMix64 rng(1234);
  for (int inst = 0; inst < 10; ++inst) {
    const int n = 3 + static_cast<int>(rng.next_below(10));
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back(euclidean_point({rng.next_double(), rng.next_double()}));
    const auto est = asymptotic_center_estimate(e2, pts, {0, pts.size()});
    const double oracle = grid_minimax(pts, 1e-3);
    // both sit within the grid pitch of the true minimax value
    REQUIRE(est.radius == Approx(oracle).margin(1e-3));
  }
}

TEST_CASE("delta check passes on convergent runs and fails the alternating counterexample") {
  // constant trace: all subsequence centers coincide
  const Point p = euclidean_point({0.4, -0.1});
  const auto constant = trace_of(std::vector<Point>(60, p));
  const auto rep = delta_convergence_check(e2, constant, 1e-6);
  REQUIRE(rep.pass);
  for (const auto& e : rep.entries) REQUIRE(dist(e2, e.estimate.center, p) <= 1e-9);

  // convergent Picard-S run
  auto [sol, trace] = solve_vip(contraction_problem());
  const auto rep2 = delta_convergence_check(e2, trace, 1e-4);
  REQUIRE(rep2.pass);

  // alternating two-point trace: even and odd centers disagree by d(a,b)
  const Point a = euclidean_point({0, 0});
  const Point b = euclidean_point({1, 0});
  std::vector<Point> alt;
  for (int i = 0; i < 60; ++i) alt.push_back(i % 2 == 0 ? a : b);
  const auto rep3 = delta_convergence_check(e2, trace_of(alt), 1e-4);
  REQUIRE_FALSE(rep3.pass);
  REQUIRE(rep3.max_center_gap == Approx(1.0).margin(1e-6));

  REQUIRE_THROWS_AS(delta_convergence_check(e2, trace_of({a, b, a}), 1e-4), DomainError);
}

TEST_CASE("fejer_audit measures the worst step-wise increase") {
  const Point p = euclidean_point({0, 0});
  const auto constant = trace_of(std::vector<Point>(10, euclidean_point({1, 1})));
  REQUIRE(fejer_audit(e2, constant, p) == 0.0);

  auto [sol, trace] = solve_vip(contraction_problem());
  REQUIRE(fejer_audit(e2, trace, euclidean_point({0.2, 0.1})) <= 1e-9);

  // corrupting the tail with a far point is detected
  auto corrupted = trace;
  corrupted.iterates.push_back(euclidean_point({1.9, 0}));
  REQUIRE(fejer_audit(e2, corrupted, euclidean_point({0.2, 0.1})) > 0.1);
}

TEST_CASE("strong convergence surrogate checks the tail diameter") {
  auto [sol, trace] = solve_vip(contraction_problem());
  REQUIRE(strong_convergence_check(e2, trace, 1e-4).pass);

  std::vector<Point> alt;
  for (int i = 0; i < 40; ++i)
    alt.push_back(i % 2 == 0 ? euclidean_point({0, 0}) : euclidean_point({1, 0}));
  const auto bad = strong_convergence_check(e2, trace_of(alt), 1e-4);
  REQUIRE_FALSE(bad.pass);
  REQUIRE(bad.max_gap == Approx(1.0));
}

TEST_CASE("rate_report orders schemes by first sub-target index") {
  auto p = contraction_problem();
  p.tol_fp = 1e-8;
  p.max_iter = 2000;
  auto picard_s = run_scheme(p, Scheme::PicardS);
  auto mann = run_scheme(p, Scheme::Mann);
  auto picard_s2 = run_scheme(p, Scheme::PicardS);

  const auto table = rate_report({{"picard_s", &picard_s.trace},
                                  {"picard_s_again", &picard_s2.trace},
                                  {"mann", &mann.trace}},
                                 1e-8);
  REQUIRE(table.entries[0].first_index.has_value());
  REQUIRE(table.entries[1].first_index.has_value());
  REQUIRE(*table.entries[0].first_index == *table.entries[1].first_index);
  REQUIRE(table.entries[2].first_index.has_value());
  REQUIRE(*table.entries[0].first_index <= *table.entries[2].first_index);

  // a target above the initial displacement is met at index 0
  const auto easy = rate_report({{"picard_s", &picard_s.trace}, {"mann", &mann.trace}}, 100.0);
  for (const auto& e : easy.entries) REQUIRE(*e.first_index == 0);

  // an unreachable target is reported as absent
  const auto never = rate_report({{"mann", &mann.trace}}, 0.0);
  REQUIRE_FALSE(never.entries[0].first_index.has_value());
  REQUIRE(never.to_text().find("not reached") != std::string::npos);
}
