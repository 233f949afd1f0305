#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hadamard/rng.hpp"
#include "hadamard/space.hpp"

using namespace hadamard;
using Catch::Approx;

namespace {

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

const SpaceModel kModels[] = {SpaceModel::euclidean(3), SpaceModel::hyperboloid(2),
                              SpaceModel::star_tree(4)};

}  // namespace

TEST_CASE("dist matches closed forms") {
  const auto e2 = SpaceModel::euclidean(2);
  REQUIRE(dist(e2, euclidean_point({0, 0}), euclidean_point({3, 4})) == Approx(5.0).margin(1e-12));

  const auto tree = SpaceModel::star_tree(3);
  REQUIRE(dist(tree, star_tree_point(1, 2), star_tree_point(2, 3)) == Approx(5.0).margin(1e-12));
  REQUIRE(dist(tree, star_tree_point(1, 2), star_tree_point(1, 0.5)) == Approx(1.5).margin(1e-12));

  // Hyperboloid: d = arccosh(-<a,b>); for a = (1,0,0), b = (cosh 1, sinh 1, 0)
  // the Minkowski product is -cosh 1, so d = arccosh(cosh 1) = 1.
  const auto h2 = SpaceModel::hyperboloid(2);
  const Point a = hyperboloid_base(2);
  const Point b = hyperboloid_point({std::cosh(1.0), std::sinh(1.0), 0.0});
  const double mink = -(-a.coords[0] * b.coords[0]);
  REQUIRE(std::acosh(mink) == Approx(1.0).margin(1e-12));
  REQUIRE(dist(h2, a, b) == Approx(1.0).margin(1e-12));
}

TEST_CASE("dist rejects mismatched and invalid points") {
  const auto e2 = SpaceModel::euclidean(2);
  REQUIRE_THROWS_AS(dist(e2, euclidean_point({0, 0}), star_tree_point(1, 1)), DomainError);
  Point bad = hyperboloid_base(2);
  bad.coords[1] = 0.5;  // off the sheet
  REQUIRE_THROWS_AS(dist(SpaceModel::hyperboloid(2), hyperboloid_base(2), bad), InvalidPointError);
  REQUIRE_THROWS_AS(hyperboloid_point({1.0, 0.5, 0.0}), InvalidPointError);
  REQUIRE_THROWS_AS(star_tree_point(0, -1.0), InvalidPointError);
}

TEST_CASE("tree origin identification") {
  const auto tree = SpaceModel::star_tree(4);
  const Point o1 = star_tree_point(2, 0.0);
  REQUIRE(o1.branch() == 0);
  REQUIRE(dist(tree, o1, tree_origin()) == 0.0);
  REQUIRE(dist(tree, o1, star_tree_point(3, 1.0)) == Approx(1.0).margin(1e-15));
}

TEST_CASE("combine endpoints are exact") {
  SplitMix64 rng(11);
  for (const auto& space : kModels) {
    const Point x = random_point(space, rng);
    const Point y = random_point(space, rng);
    REQUIRE(combine(space, x, y, 0.0).coords == x.coords);
    REQUIRE(combine(space, x, y, 1.0).coords == y.coords);
  }
  const auto e2 = SpaceModel::euclidean(2);
  REQUIRE_THROWS_AS(combine(e2, euclidean_point({0, 0}), euclidean_point({1, 0}), 1.5), DomainError);
  REQUIRE_THROWS_AS(combine(e2, euclidean_point({0, 0}), euclidean_point({1, 0}), -0.1), DomainError);
}

TEST_CASE("combine midpoints") {
  const auto e2 = SpaceModel::euclidean(2);
  const Point mid = combine(e2, euclidean_point({0, 0}), euclidean_point({2, 0}), 0.5);
  REQUIRE(mid.coords[0] == 1.0);
  REQUIRE(mid.coords[1] == 0.0);

  // Cross-branch tree geodesics run through the origin.
  const auto tree = SpaceModel::star_tree(3);
  const Point z = combine(tree, star_tree_point(1, 2), star_tree_point(2, 2), 0.5);
  REQUIRE(z.radius() == 0.0);
  const Point q = combine(tree, star_tree_point(1, 2), star_tree_point(2, 2), 0.75);
  REQUIRE(q.branch() == 2);
  REQUIRE(q.radius() == Approx(1.0).margin(1e-12));
}

TEST_CASE("geodesic property and metric axioms hold on random inputs") {
  SplitMix64 rng(42);
  const double lambdas[] = {0.0, 0.13, 0.37, 0.5, 0.82, 1.0};
  for (const auto& space : kModels) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Point x = random_point(space, rng);
      const Point y = random_point(space, rng);
      const Point z = random_point(space, rng);
      const double dxy = dist(space, x, y);
      REQUIRE(dxy >= 0.0);
      REQUIRE(dist(space, y, x) == Approx(dxy).margin(1e-9));
      REQUIRE(dist(space, x, x) == 0.0);
      REQUIRE(dist(space, x, z) <= dxy + dist(space, y, z) + 1e-9);
      for (double lam : lambdas) {
        const Point m = combine(space, x, y, lam);
        REQUIRE(dist(space, x, m) == Approx(lam * dxy).margin(1e-9));
        REQUIRE(dist(space, y, m) == Approx((1.0 - lam) * dxy).margin(1e-9));
        // convexity of the metric
        REQUIRE(dist(space, m, z) <=
                (1.0 - lam) * dist(space, x, z) + lam * dist(space, y, z) + 1e-9);
      }
    }
  }
}

TEST_CASE("multi_combine degenerate weights return the selected point exactly") {
  SplitMix64 rng(7);
  for (const auto& space : kModels) {
    const std::vector<Point> pts = {random_point(space, rng), random_point(space, rng),
                                    random_point(space, rng)};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<double> w(pts.size(), 0.0);
      w[i] = 1.0;
      const Point r = multi_combine(space, pts, Weights(w));
      REQUIRE(r.coords == pts[i].coords);
    }
  }
}

TEST_CASE("multi_combine reduces to the affine combination in Euclidean space") {
  const auto e2 = SpaceModel::euclidean(2);
  const std::vector<Point> pts = {euclidean_point({0, 0}), euclidean_point({2, 0}),
                                  euclidean_point({0, 2})};
  const Point r = multi_combine(e2, pts, Weights::uniform(3));
  REQUIRE(r.coords[0] == Approx(2.0 / 3.0).margin(1e-14));
  REQUIRE(r.coords[1] == Approx(2.0 / 3.0).margin(1e-14));

  REQUIRE_THROWS_AS(multi_combine(e2, pts, Weights({0.5, 0.5})), DomainError);
  REQUIRE_THROWS_AS(Weights({0.4, 0.4}), DomainError);
  REQUIRE_THROWS_AS(Weights({1.2, -0.2}), DomainError);
}

TEST_CASE("multi_combine satisfies the convex-combination distance bound") {
  SplitMix64 rng(99);
  for (const auto& space : kModels) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + rng.next_below(4);
      std::vector<Point> pts;
      std::vector<double> w(n);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(random_point(space, rng));
        w[i] = rng.next_double() + 1e-3;
        sum += w[i];
      }
      for (double& v : w) v /= sum;
      double fix = 1.0;
      for (std::size_t i = 1; i < n; ++i) fix -= w[i];
      w[0] = fix;  // force an exact unit sum
      const Point r = multi_combine(space, pts, Weights(w));
      const Point z = random_point(space, rng);
      double bound = 0.0;
      for (std::size_t i = 0; i < n; ++i) bound += w[i] * dist(space, pts[i], z);
      REQUIRE(dist(space, r, z) <= bound + 1e-9);
    }
  }
}

TEST_CASE("quasi_inner identities") {
  SplitMix64 rng(123);
  for (const auto& space : kModels) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Point a = random_point(space, rng);
      const Point b = random_point(space, rng);
      const Point c = random_point(space, rng);
      const Point d = random_point(space, rng);
      const Point e = random_point(space, rng);
      const double dab = dist(space, a, b);
      REQUIRE(quasi_inner(space, a, b, a, b) == Approx(dab * dab).margin(1e-9));
      REQUIRE(quasi_inner(space, a, b, c, d) ==
              Approx(-quasi_inner(space, b, a, c, d)).margin(1e-9));
      REQUIRE(quasi_inner(space, a, b, c, d) ==
              Approx(quasi_inner(space, a, e, c, d) + quasi_inner(space, e, b, c, d)).margin(1e-9));
      REQUIRE(std::abs(quasi_inner(space, a, b, c, d)) <=
              dab * dist(space, c, d) + 1e-9);
    }
  }
}

TEST_CASE("quasi_inner equals the dot product in Euclidean space") {
  SplitMix64 rng(5);
  const auto e3 = SpaceModel::euclidean(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Point a = random_point(e3, rng);
    const Point b = random_point(e3, rng);
    const Point c = random_point(e3, rng);
    const Point d = random_point(e3, rng);
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += (b.coords[i] - a.coords[i]) * (d.coords[i] - c.coords[i]);
    REQUIRE(quasi_inner(e3, a, b, c, d) == Approx(dot).margin(1e-9));
  }
  REQUIRE(quasi_inner(e3, euclidean_point({0, 0, 0}), euclidean_point({1, 0, 0}),
                      euclidean_point({0, 0, 0}), euclidean_point({0, 1, 0})) ==
          Approx(0.0).margin(1e-15));
}

TEST_CASE("cat0_defect vanishes at lambda 0 and in Euclidean space") {
  SplitMix64 rng(77);
  const auto e4 = SpaceModel::euclidean(4);
  for (int trial = 0; trial < 500; ++trial) {
    const Point x = random_point(e4, rng);
    const Point y = random_point(e4, rng);
    const Point z = random_point(e4, rng);
    REQUIRE(cat0_defect(e4, x, y, z, 0.0) == 0.0);
    REQUIRE(std::abs(cat0_defect(e4, x, y, z, 0.37)) <= 1e-12);
  }
}

TEST_CASE("cat0_defect is nonpositive in every model") {
  SplitMix64 rng(2024);
  for (const auto& space : kModels) {
    for (int trial = 0; trial < 3000; ++trial) {
      const Point x = random_point(space, rng);
      const Point y = random_point(space, rng);
      const Point z = random_point(space, rng);
      REQUIRE(cat0_defect(space, x, y, z, rng.next_double()) <= 1e-9);
    }
  }
}

TEST_CASE("cat0_defect on three distinct tree branches over a lambda grid") {
  const auto tree = SpaceModel::star_tree(4);
  const Point x = star_tree_point(1, 1.5);
  const Point y = star_tree_point(2, 2.0);
  const Point z = star_tree_point(3, 1.0);
  for (int i = 0; i <= 20; ++i) {
    REQUIRE(cat0_defect(tree, x, y, z, i / 20.0) <= 1e-15);
  }
}

TEST_CASE("hyperboloid combine chains stay on the sheet") {
  SplitMix64 rng(31);
  const auto h3 = SpaceModel::hyperboloid(3);
  Point p = random_point(h3, rng);
  for (int i = 0; i < 1000; ++i) {
    p = combine(h3, p, random_point(h3, rng), 0.35);
    // sheet constraint maintained by the per-step re-projection
  }
  double q = -p.coords[0] * p.coords[0];
  for (std::size_t i = 1; i < p.coords.size(); ++i) q += p.coords[i] * p.coords[i];
  REQUIRE(q == Approx(-1.0).margin(1e-12));
}
