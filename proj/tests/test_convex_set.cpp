#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "hadamard/convex_set.hpp"
#include "hadamard/rng.hpp"
#include "hadamard/space.hpp"

using namespace hadamard;
using Catch::Approx;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Point random_point(const SpaceModel& space, SplitMix64& rng, double scale = 1.5) {
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

std::vector<ConvexSet> builtin_sets() {
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
  sets.push_back(ConvexSet::sub_tree(tree, {0, 3}, kInf));
  sets.push_back(ConvexSet::ball(tree, star_tree_point(1, 1.0), 2.0));
  // nested intersection whose alternating-projection limit is the inner ball
  sets.push_back(ConvexSet::intersection(
      {ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0),
       ConvexSet::ball(e2, euclidean_point({0, 0}), 2.0)},
      euclidean_point({0, 0})));
  return sets;
}

}  // namespace

TEST_CASE("contains closed forms") {
  const auto e2 = SpaceModel::euclidean(2);
  const auto ball = ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0);
  REQUIRE(contains(ball, euclidean_point({0, 0}), 1e-9));
  REQUIRE_FALSE(contains(ball, euclidean_point({2, 0}), 1e-9));

  const auto half = ConvexSet::half_space(e2, {1, 0}, 0.0);
  REQUIRE(contains(half, euclidean_point({-1, 5}), 1e-9));
  REQUIRE_FALSE(contains(half, euclidean_point({0.1, 5}), 1e-9));

  REQUIRE_THROWS_AS(contains(ball, star_tree_point(1, 1), 1e-9), DomainError);
  REQUIRE_THROWS_AS(ConvexSet::half_space(SpaceModel::star_tree(3), {1.0, 0.0}, 0.0), DomainError);
  REQUIRE_THROWS_AS(ConvexSet::ball(e2, euclidean_point({0, 0}), 0.0), DomainError);
}

TEST_CASE("project closed forms") {
  const auto e2 = SpaceModel::euclidean(2);
  const auto ball = ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0);

  // interior points are fixed exactly
  const Point inside = euclidean_point({0.25, -0.5});
  REQUIRE(project(ball, inside).coords == inside.coords);

  const Point p = project(ball, euclidean_point({3, 4}));
  REQUIRE(p.coords[0] == Approx(0.6).margin(1e-14));
  REQUIRE(p.coords[1] == Approx(0.8).margin(1e-14));

  const auto half = ConvexSet::half_space(e2, {1, 0}, 0.0);
  const Point q = project(half, euclidean_point({2, 3}));
  REQUIRE(q.coords[0] == Approx(0.0).margin(1e-14));
  REQUIRE(q.coords[1] == Approx(3.0).margin(1e-14));
}

TEST_CASE("subtree projection gates through the origin") {
  const auto tree = SpaceModel::star_tree(4);
  const auto sub = ConvexSet::sub_tree(tree, {1}, kInf);
  const Point x = star_tree_point(2, 3.0);
  const Point g = project(sub, x);
  REQUIRE(g.radius() == 0.0);

  // brute-force oracle: the gate point beats every sampled subtree point
  const double dg = dist(tree, x, g);
  for (int i = 0; i <= 100; ++i) {
    const Point y = star_tree_point(1, 6.0 * i / 100.0);
    REQUIRE(dg <= dist(tree, x, y) + 1e-12);
  }

  const Point capped = project(ConvexSet::sub_tree(tree, {2}, 1.5), x);
  REQUIRE(capped.branch() == 2);
  REQUIRE(capped.radius() == Approx(1.5));
}

TEST_CASE("hyperboloid ball projection lands at the boundary along the geodesic") {
  const auto h2 = SpaceModel::hyperboloid(2);
  const auto K = ConvexSet::ball(h2, hyperboloid_base(2), 1.0);
  const Point far = hyperboloid_point({std::cosh(2.0), std::sinh(2.0), 0.0});
  const Point p = project(K, far);
  REQUIRE(dist(h2, p, hyperboloid_base(2)) == Approx(1.0).margin(1e-12));
  REQUIRE(p.coords[0] == Approx(std::cosh(1.0)).margin(1e-12));
  REQUIRE(p.coords[1] == Approx(std::sinh(1.0)).margin(1e-12));
}

TEST_CASE("projection is nonexpansive and idempotent on every set type") {
  SplitMix64 rng(314);
  for (const auto& K : builtin_sets()) {
    for (int trial = 0; trial < 300; ++trial) {
      const Point x = random_point(K.space(), rng);
      const Point y = random_point(K.space(), rng);
      const Point px = project(K, x);
      const Point py = project(K, y);
      REQUIRE(contains(K, px, 1e-9));
      REQUIRE(dist(K.space(), px, py) <= dist(K.space(), x, y) + 1e-9);
      REQUIRE(dist(K.space(), project(K, px), px) <= 1e-9);
    }
  }
}

TEST_CASE("alternating projection reports non-convergence on tangent balls") {
  const auto e2 = SpaceModel::euclidean(2);
  const auto pinch = ConvexSet::intersection(
      {ConvexSet::ball(e2, euclidean_point({-1, 0}), 1.0),
       ConvexSet::ball(e2, euclidean_point({1, 0}), 1.0)},
      euclidean_point({0, 0}));
  try {
    project(pinch, euclidean_point({0, 5}));
    FAIL("expected ProjectionConvergenceError");
  } catch (const ProjectionConvergenceError& err) {
    REQUIRE(err.displacement() >= 1e-10);
    REQUIRE(err.last_iterate().coords.size() == 2);
  }
}

TEST_CASE("projection_defect certifies correct projections and flags wrong ones") {
  const auto e2 = SpaceModel::euclidean(2);
  const auto ball = ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0);
  const auto S = sample(ball, 256, 7);

  // degenerate vector: every term <xx, yx> is zero
  const Point in = euclidean_point({0.5, 0.1});
  REQUIRE(projection_defect(ball, in, in, S) == Approx(0.0).margin(1e-12));

  const Point x = euclidean_point({2, 0});
  REQUIRE(projection_defect(ball, x, euclidean_point({1, 0}), S) <= 1e-9);

  // wrong candidate, with the true projection present in the sample
  const auto S2 = SampleSet{
      FinitePointSet(e2, {euclidean_point({1, 0}), euclidean_point({0, 0})}), 0};
  REQUIRE(projection_defect(ball, x, euclidean_point({0, 1}), S2) > 0.5);
}

TEST_CASE("projection characterization holds against samples for every set type") {
  SplitMix64 rng(2718);
  for (const auto& K : builtin_sets()) {
    const auto S = sample(K, 256, 11);
    for (int trial = 0; trial < 100; ++trial) {
      const Point x = random_point(K.space(), rng);
      REQUIRE(projection_defect(K, x, project(K, x), S) <= 1e-7);
    }
  }
}

TEST_CASE("sample is deterministic, in-set, and witness-first") {
  for (const auto& K : builtin_sets()) {
    const auto S1 = sample(K, 64, 42);
    const auto S2 = sample(K, 64, 42);
    REQUIRE(S1.points.size() == S2.points.size());
    for (std::size_t i = 0; i < S1.points.size(); ++i)
      REQUIRE(S1.points.points()[i].coords == S2.points.points()[i].coords);
    for (const auto& p : S1.points.points()) REQUIRE(contains(K, p, 1e-9));

    const auto S0 = sample(K, 1, 0);
    REQUIRE(S0.points.size() == 1);
    REQUIRE(dist(K.space(), S0.points.points()[0], K.witness()) == 0.0);
  }
  REQUIRE_THROWS_AS(sample(builtin_sets()[0], 0, 1), DomainError);
}

TEST_CASE("sets are geodesically convex on sampled pairs") {
  SplitMix64 rng(555);
  for (const auto& K : builtin_sets()) {
    const auto S = sample(K, 40, 13);
    const auto& pts = S.points.points();
    for (int trial = 0; trial < 200; ++trial) {
      const Point& x = pts[rng.next_below(pts.size())];
      const Point& y = pts[rng.next_below(pts.size())];
      REQUIRE(contains(K, combine(K.space(), x, y, rng.next_double()), 1e-9));
    }
  }
}

TEST_CASE("intersection witness is validated") {
  const auto e2 = SpaceModel::euclidean(2);
  REQUIRE_THROWS_AS(ConvexSet::intersection(
                        {ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0),
                         ConvexSet::ball(e2, euclidean_point({5, 0}), 1.0)},
                        euclidean_point({0, 0})),
                    DomainError);
}
