#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "hadamard/convex_set.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/point_set.hpp"
#include "hadamard/rng.hpp"
#include "hadamard/space.hpp"

namespace hadamard {

class MapDescriptor;

struct IdentityMap {};
struct ConstantMap {
  Point value;
};
struct ProjectionMap {
  ConvexSet set;
};
/// x -> combine(anchor, x, factor): geodesic contraction toward the anchor
/// with Lipschitz constant `factor` in (0, 1].
struct ContractionMap {
  Point anchor;
  double factor{};
};
struct ChainMap {
  std::vector<MapDescriptor> maps;  // applied first to last
};

/// Single-valued nonexpansive building block for multivalued mappings.
class MapDescriptor {
 public:
  static MapDescriptor identity() { return MapDescriptor(IdentityMap{}); }
  static MapDescriptor constant(Point value) { return MapDescriptor(ConstantMap{std::move(value)}); }
  static MapDescriptor projection(ConvexSet set) {
    return MapDescriptor(ProjectionMap{std::move(set)});
  }
  static MapDescriptor contraction(Point anchor, double factor) {
    if (!(factor > 0.0 && factor <= 1.0))
      throw DomainError("MapDescriptor::contraction: factor must lie in (0,1]");
    return MapDescriptor(ContractionMap{std::move(anchor), factor});
  }
  static MapDescriptor chain(std::vector<MapDescriptor> maps) {
    if (maps.empty()) throw DomainError("MapDescriptor::chain: at least one map required");
    return MapDescriptor(ChainMap{std::move(maps)});
  }

  using Variant = std::variant<IdentityMap, ConstantMap, ProjectionMap, ContractionMap, ChainMap>;
  const Variant& value() const { return v_; }

 private:
  explicit MapDescriptor(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline Point apply_map(const SpaceModel& space, const MapDescriptor& f, const Point& x) {
  check_point(space, x, "apply_map");
  struct Visitor {
    const SpaceModel& space;
    const Point& x;
    Point operator()(const IdentityMap&) const { return x; }
    Point operator()(const ConstantMap& m) const { return m.value; }
    Point operator()(const ProjectionMap& m) const { return project(m.set, x); }
    Point operator()(const ContractionMap& m) const { return combine(space, m.anchor, x, m.factor); }
    Point operator()(const ChainMap& m) const {
      Point cur = x;
      for (const auto& g : m.maps) cur = apply_map(space, g, cur);
      return cur;
    }
  };
  return std::visit(Visitor{space, x}, f.value());
}

class MultiMap;

/// Tx = {f_1(x), ..., f_m(x)}.
struct UnionOfMaps {
  std::vector<MapDescriptor> maps;
};
/// Tx = a fixed finite set, independent of x.
struct ConstantSetValue {
  FinitePointSet set;
};
/// Tx = the geodesic segment [g1(x), g2(x)] discretized into segments+1
/// equally spaced points; Hausdorff error of the surrogate is at most
/// (segment length) / (2 * segments).
struct SegmentValue {
  MapDescriptor first;
  MapDescriptor second;
  int segments{};
};
/// Tx = {P_K(x') : x' in inner(x)}: the projected multimap.
struct ProjectedValue {
  ConvexSet set;
  std::shared_ptr<const MultiMap> inner;
};

/// A multivalued mapping with finite (hence compact) values.
class MultiMap {
 public:
  static MultiMap union_of(const SpaceModel& space, std::vector<MapDescriptor> maps) {
    if (maps.empty()) throw DomainError("MultiMap::union_of: at least one map required");
    return MultiMap(space, UnionOfMaps{std::move(maps)});
  }
  static MultiMap constant_set(FinitePointSet set) {
    const SpaceModel space = set.space();
    return MultiMap(space, ConstantSetValue{std::move(set)});
  }
  static MultiMap segment(const SpaceModel& space, MapDescriptor first, MapDescriptor second,
                          int segments) {
    if (segments < 1) throw DomainError("MultiMap::segment: need at least one segment");
    return MultiMap(space, SegmentValue{std::move(first), std::move(second), segments});
  }

  using Variant = std::variant<UnionOfMaps, ConstantSetValue, SegmentValue, ProjectedValue>;
  const SpaceModel& space() const { return space_; }
  const Variant& value() const { return v_; }

  friend MultiMap projected_multimap(const ConvexSet& K, const MultiMap& T);

 private:
  MultiMap(SpaceModel space, Variant v) : space_(space), v_(std::move(v)) {}
  SpaceModel space_;
  Variant v_;
};

/// Evaluate Tx as a finite point set.
inline FinitePointSet evaluate(const MultiMap& T, const Point& x) {
  check_point(T.space(), x, "evaluate");
  struct Visitor {
    const MultiMap& T;
    const Point& x;
    FinitePointSet operator()(const UnionOfMaps& u) const {
      std::vector<Point> pts;
      pts.reserve(u.maps.size());
      for (const auto& f : u.maps) pts.push_back(apply_map(T.space(), f, x));
      return FinitePointSet(T.space(), std::move(pts));
    }
    FinitePointSet operator()(const ConstantSetValue& c) const { return c.set; }
    FinitePointSet operator()(const SegmentValue& s) const {
      const Point a = apply_map(T.space(), s.first, x);
      const Point b = apply_map(T.space(), s.second, x);
      std::vector<Point> pts;
      pts.reserve(static_cast<std::size_t>(s.segments) + 1);
      for (int i = 0; i <= s.segments; ++i)
        pts.push_back(combine(T.space(), a, b, static_cast<double>(i) / s.segments));
      return FinitePointSet(T.space(), std::move(pts));
    }
    FinitePointSet operator()(const ProjectedValue& p) const {
      const FinitePointSet inner = evaluate(*p.inner, x);
      std::vector<Point> pts;
      pts.reserve(inner.size());
      for (const auto& q : inner.points()) pts.push_back(project(p.set, q));
      return FinitePointSet(T.space(), std::move(pts));
    }
  };
  return std::visit(Visitor{T, x}, T.value());
}

/// The member of Tx nearest to x; ties break toward the lowest construction
/// index, which keeps runs reproducible.
inline Point nearest_selection(const MultiMap& T, const Point& x) {
  const FinitePointSet set = evaluate(T, x);
  const Point* best = &set.points().front();
  double best_d = dist(T.space(), x, *best);
  for (const auto& p : set.points()) {
    const double d = dist(T.space(), x, p);
    if (d < best_d) {
      best_d = d;
      best = &p;
    }
  }
  return *best;
}

/// P*_K T: project every value of T onto K pointwise. Preserves finiteness
/// and cannot worsen the Lipschitz estimate of T.
inline MultiMap projected_multimap(const ConvexSet& K, const MultiMap& T) {
  if (!(K.space() == T.space()))
    throw DomainError("projected_multimap: set and map live in different spaces");
  return MultiMap(T.space(), ProjectedValue{K, std::make_shared<const MultiMap>(T)});
}

/// Empirical Lipschitz certificate: max over sampled pairs x != y in K of
/// H(Tx, Ty) / d(x, y). Deterministic given the seed.
inline double nonexpansiveness_ratio(const MultiMap& T, const ConvexSet& K, int trials,
                                     std::uint64_t seed) {
  if (trials < 1) throw DomainError("nonexpansiveness_ratio: need trials >= 1");
  const SampleSet S = sample(K, 2 * trials, seed);
  const auto& pts = S.points.points();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double d = dist(K.space(), pts[i], pts[i + 1]);
    if (d < 1e-9) continue;
    const double h = hausdorff(evaluate(T, pts[i]), evaluate(T, pts[i + 1]));
    worst = std::max(worst, h / d);
  }
  return worst;
}

}  // namespace hadamard
