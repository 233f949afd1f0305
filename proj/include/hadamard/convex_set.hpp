#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hadamard/errors.hpp"
#include "hadamard/point_set.hpp"
#include "hadamard/rng.hpp"
#include "hadamard/space.hpp"

namespace hadamard {

class ConvexSet;

/// Geodesic ball {y : d(center, y) <= radius}. Valid in every model.
struct BallSet {
  Point center;
  double radius{};
};

/// Euclidean half-space {y : <normal, y> <= offset}.
struct HalfSpaceSet {
  std::vector<double> normal;
  double offset{};
};

/// Star-tree subtree: the listed branches truncated at radius_cap
/// (+infinity allowed), together with the origin.
struct SubTreeSet {
  std::vector<int> branches;
  double radius_cap{};
};

/// Intersection of convex sets; nonemptiness is certified by the witness.
struct IntersectionSet {
  std::vector<ConvexSet> members;
  Point witness;
};

/// Alternating projection onto an intersection ran out of sweeps; carries the
/// last iterate and its displacement for diagnosis.
class ProjectionConvergenceError : public std::runtime_error {
 public:
  ProjectionConvergenceError(const std::string& what, Point last, double displacement)
      : std::runtime_error(what), last_(std::move(last)), displacement_(displacement) {}
  const Point& last_iterate() const { return last_; }
  double displacement() const { return displacement_; }

 private:
  Point last_;
  double displacement_;
};

/// A nonempty closed convex constraint set with membership testing, metric
/// projection and seeded sampling. Values are immutable after construction.
class ConvexSet {
 public:
  enum class Kind { Ball, HalfSpace, SubTree, Intersection };

  static ConvexSet ball(const SpaceModel& space, Point center, double radius) {
    check_point(space, center, "ConvexSet::ball");
    if (!(radius > 0.0)) throw DomainError("ConvexSet::ball: radius must be positive");
    ConvexSet k(space, center);
    k.v_ = BallSet{std::move(center), radius};
    return k;
  }

  static ConvexSet half_space(const SpaceModel& space, std::vector<double> normal, double offset) {
    if (space.kind != ModelKind::Euclidean)
      throw DomainError("ConvexSet::half_space: only defined in Euclidean space");
    if (static_cast<int>(normal.size()) != space.dim)
      throw DomainError("ConvexSet::half_space: normal has wrong dimension");
    double nn = 0.0;
    for (double v : normal) nn += v * v;
    if (!(nn > 0.0)) throw DomainError("ConvexSet::half_space: zero normal");
    std::vector<double> foot(normal.size());
    for (std::size_t i = 0; i < normal.size(); ++i) foot[i] = offset / nn * normal[i];
    ConvexSet k(space, euclidean_point(std::move(foot)));
    k.v_ = HalfSpaceSet{std::move(normal), offset};
    return k;
  }

  static ConvexSet sub_tree(const SpaceModel& space, std::vector<int> branches, double radius_cap) {
    if (space.kind != ModelKind::StarTree)
      throw DomainError("ConvexSet::sub_tree: only defined in star-tree space");
    if (branches.empty()) throw DomainError("ConvexSet::sub_tree: branch set must be nonempty");
    for (int b : branches)
      if (b < 0 || b >= space.dim) throw DomainError("ConvexSet::sub_tree: branch index out of range");
    if (!(radius_cap > 0.0)) throw DomainError("ConvexSet::sub_tree: radius cap must be positive");
    ConvexSet k(space, tree_origin());
    k.v_ = SubTreeSet{std::move(branches), radius_cap};
    return k;
  }

  static ConvexSet intersection(std::vector<ConvexSet> members, Point witness);

  const SpaceModel& space() const { return space_; }
  /// A point guaranteed to lie in the set (center, foot point, origin, or the
  /// supplied intersection witness).
  const Point& witness() const { return witness_; }

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  const BallSet& as_ball() const { return std::get<BallSet>(v_); }
  const HalfSpaceSet& as_half_space() const { return std::get<HalfSpaceSet>(v_); }
  const SubTreeSet& as_sub_tree() const { return std::get<SubTreeSet>(v_); }
  const IntersectionSet& as_intersection() const { return std::get<IntersectionSet>(v_); }

 private:
  ConvexSet(SpaceModel space, Point witness) : space_(space), witness_(std::move(witness)) {}

  SpaceModel space_;
  Point witness_;
  std::variant<BallSet, HalfSpaceSet, SubTreeSet, IntersectionSet> v_{BallSet{}};
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dot_point(const std::vector<double>& a, const Point& p) { return dot(a, p.coords); }

inline constexpr double kAlternatingTol = 1e-10;
inline constexpr int kMaxSweeps = 10000;

}  // namespace detail

/// Distance from x to the set (exact for the closed-form variants; not
/// defined for intersections, where membership is tested member-wise).
inline double distance_to_set(const ConvexSet& K, const Point& x) {
  check_point(K.space(), x, "distance_to_set");
  switch (K.kind()) {
    case ConvexSet::Kind::Ball:
      return std::max(0.0, dist(K.space(), x, K.as_ball().center) - K.as_ball().radius);
    case ConvexSet::Kind::HalfSpace: {
      const auto& h = K.as_half_space();
      const double excess = detail::dot_point(h.normal, x) - h.offset;
      return std::max(0.0, excess / std::sqrt(detail::dot(h.normal, h.normal)));
    }
    case ConvexSet::Kind::SubTree: {
      const auto& t = K.as_sub_tree();
      const bool on_branch =
          std::find(t.branches.begin(), t.branches.end(), x.branch()) != t.branches.end();
      if (on_branch || x.radius() == 0.0) return std::max(0.0, x.radius() - t.radius_cap);
      return x.radius();  // gate through the origin
    }
    case ConvexSet::Kind::Intersection: {
      double worst = 0.0;
      for (const auto& m : K.as_intersection().members)
        worst = std::max(worst, distance_to_set(m, x));
      return worst;  // lower bound on the true distance; exact for membership tests
    }
  }
  return 0.0;
}

/// Membership within tolerance. Intersections require every member to agree.
inline bool contains(const ConvexSet& K, const Point& x, double tol) {
  if (K.kind() == ConvexSet::Kind::Intersection) {
    for (const auto& m : K.as_intersection().members)
      if (!contains(m, x, tol)) return false;
    return true;
  }
  return distance_to_set(K, x) <= tol;
}

/// Metric projection onto K.
///
/// Closed forms for balls (clamp along the radial geodesic), half-spaces
/// (orthogonal projection) and subtrees (radius clamp or gate through the
/// origin). Intersections use cyclic alternating projection, which converges
/// to a point of the intersection; it agrees with the metric projection for
/// the nested/orthogonal member layouts used by the built-in problems.
inline Point project(const ConvexSet& K, const Point& x) {
  check_point(K.space(), x, "project");
  switch (K.kind()) {
    case ConvexSet::Kind::Ball: {
      const auto& b = K.as_ball();
      const double d = dist(K.space(), x, b.center);
      if (d <= b.radius) return x;
      return combine(K.space(), b.center, x, b.radius / d);
    }
    case ConvexSet::Kind::HalfSpace: {
      const auto& h = K.as_half_space();
      const double excess = detail::dot_point(h.normal, x) - h.offset;
      if (excess <= 0.0) return x;
      const double nn = detail::dot(h.normal, h.normal);
      Point y = x;
      for (std::size_t i = 0; i < y.coords.size(); ++i) y.coords[i] -= excess / nn * h.normal[i];
      return y;
    }
    case ConvexSet::Kind::SubTree: {
      const auto& t = K.as_sub_tree();
      const bool on_branch =
          std::find(t.branches.begin(), t.branches.end(), x.branch()) != t.branches.end();
      if (on_branch || x.radius() == 0.0) {
        if (x.radius() <= t.radius_cap) return x;
        return star_tree_point(x.branch(), t.radius_cap);
      }
      return tree_origin();
    }
    case ConvexSet::Kind::Intersection: {
      const auto& members = K.as_intersection().members;
      Point cur = x;
      double disp = std::numeric_limits<double>::infinity();
      for (int sweep = 0; sweep < detail::kMaxSweeps; ++sweep) {
        const Point prev = cur;
        for (const auto& m : members) cur = project(m, cur);
        disp = dist(K.space(), prev, cur);
        if (disp < detail::kAlternatingTol) return cur;
      }
      throw ProjectionConvergenceError(
          "project: alternating projection failed to settle within the sweep budget", cur, disp);
    }
  }
  return x;
}

/// A seeded finite sample of a convex set; the first point is the witness.
struct SampleSet {
  FinitePointSet points;
  std::uint64_t seed{};
};

namespace detail {

inline Point tree_walk(const SpaceModel& space, const Point& from, int toward_branch, double arc) {
  if (toward_branch == from.branch()) return star_tree_point(from.branch(), from.radius() + arc);
  if (arc <= from.radius()) return star_tree_point(from.branch(), from.radius() - arc);
  return star_tree_point(toward_branch, arc - from.radius());
}

/// One random point of K. Interior and boundary-biased draws are mixed so
/// that samples exercise the supporting structure of the set.
inline Point draw_in_set(const ConvexSet& K, SplitMix64& rng, int index) {
  const SpaceModel& space = K.space();
  switch (K.kind()) {
    case ConvexSet::Kind::Ball: {
      const auto& b = K.as_ball();
      const bool at_boundary = rng.next_double() < 0.5;
      double t;
      if (at_boundary) {
        t = 1.0;
      } else {
        const double dim_eff = space.kind == ModelKind::StarTree ? 1.0 : space.dim;
        t = std::pow(rng.next_double(), 1.0 / dim_eff);
      }
      switch (space.kind) {
        case ModelKind::Euclidean: {
          std::vector<double> dir(b.center.coords.size());
          double nn = 0.0;
          while (nn < 1e-12) {
            nn = 0.0;
            for (double& v : dir) {
              v = rng.next_gaussian();
              nn += v * v;
            }
          }
          const double inv = b.radius / std::sqrt(nn);
          Point q = b.center;
          for (std::size_t i = 0; i < q.coords.size(); ++i) q.coords[i] += inv * dir[i];
          return combine(space, b.center, q, t);
        }
        case ModelKind::Hyperboloid: {
          std::vector<double> g(b.center.coords.size());
          Point q = b.center;
          double vv = 0.0;
          while (vv < 1e-12) {
            for (double& v : g) v = rng.next_gaussian();
            const double gc = minkowski_inner(g, b.center.coords);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += gc * b.center.coords[i];
            vv = minkowski_inner(g, g);
          }
          const double inv = 1.0 / std::sqrt(vv);
          const double ch = std::cosh(b.radius);
          const double sh = std::sinh(b.radius);
          for (std::size_t i = 0; i < q.coords.size(); ++i)
            q.coords[i] = ch * b.center.coords[i] + sh * inv * g[i];
          const double norm = std::sqrt(-minkowski_inner(q.coords, q.coords));
          for (double& c : q.coords) c /= norm;
          return combine(space, b.center, q, t);
        }
        case ModelKind::StarTree: {
          const int branch = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(space.dim)));
          const Point q = tree_walk(space, b.center, branch, b.radius);
          return combine(space, b.center, q, t);
        }
      }
      return b.center;
    }
    case ConvexSet::Kind::HalfSpace: {
      const auto& h = K.as_half_space();
      const double nn = dot(h.normal, h.normal);
      Point g = K.witness();
      for (double& c : g.coords) c += 2.0 * rng.next_gaussian();
      const bool at_boundary = rng.next_double() < 0.5;
      const double excess = dot_point(h.normal, g) - h.offset;
      if (at_boundary || excess > 0.0)
        for (std::size_t i = 0; i < g.coords.size(); ++i) g.coords[i] -= excess / nn * h.normal[i];
      return g;
    }
    case ConvexSet::Kind::SubTree: {
      const auto& t = K.as_sub_tree();
      const int branch = t.branches[rng.next_below(t.branches.size())];
      const bool capped = std::isfinite(t.radius_cap);
      const double reach = capped ? t.radius_cap : 4.0;
      double r = rng.next_double() * reach;
      if (capped && rng.next_double() < 0.5) r = t.radius_cap;
      return star_tree_point(branch, r);
    }
    case ConvexSet::Kind::Intersection: {
      const auto& members = K.as_intersection().members;
      const Point cand = draw_in_set(members[static_cast<std::size_t>(index) % members.size()],
                                     rng, index);
      return project(K, cand);
    }
  }
  return K.witness();
}

}  // namespace detail

/// Deterministic sample of m points of K. The first point is always the
/// witness; the remainder mixes interior and boundary-biased draws. Points
/// closer than 1e-12 collapse under FinitePointSet normalization.
inline SampleSet sample(const ConvexSet& K, int m, std::uint64_t seed) {
  if (m < 1) throw DomainError("sample: need m >= 1");
  SplitMix64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m));
  pts.push_back(K.witness());
  for (int i = 1; i < m; ++i) pts.push_back(detail::draw_in_set(K, rng, i));
  return SampleSet{FinitePointSet(K.space(), std::move(pts)), seed};
}

/// Berg-Nikolaev projection certificate: max over sample points y of
/// <xu, yu>. Nonpositive (within tolerance) exactly when u = P_K(x) relative
/// to the sampled portion of K.
inline double projection_defect(const ConvexSet& K, const Point& x, const Point& u,
                                const SampleSet& S) {
  if (S.points.size() == 0) throw DomainError("projection_defect: empty sample");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& y : S.points.points())
    worst = std::max(worst, quasi_inner(K.space(), x, u, y, u));
  return worst;
}

inline ConvexSet ConvexSet::intersection(std::vector<ConvexSet> members, Point witness) {
  if (members.empty()) throw DomainError("ConvexSet::intersection: member list must be nonempty");
  const SpaceModel space = members.front().space();
  for (const auto& m : members)
    if (!(m.space() == space))
      throw DomainError("ConvexSet::intersection: members live in different spaces");
  check_point(space, witness, "ConvexSet::intersection");
  for (const auto& m : members)
    if (!contains(m, witness, 1e-9))
      throw DomainError("ConvexSet::intersection: witness is not in every member");
  ConvexSet k(space, witness);
  k.v_ = IntersectionSet{std::move(members), std::move(witness)};
  return k;
}

}  // namespace hadamard
