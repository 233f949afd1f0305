#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hadamard/errors.hpp"

namespace hadamard {

enum class ModelKind { Euclidean, Hyperboloid, StarTree };

inline const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Euclidean: return "euclidean";
    case ModelKind::Hyperboloid: return "hyperboloid";
    case ModelKind::StarTree: return "star_tree";
  }
  return "?";
}

/// One of the three complete CAT(0) model spaces the library computes in:
/// Euclidean R^d, the hyperboloid model of H^d, and the star metric tree
/// (branches of R_{>=0} glued at a common origin).
struct SpaceModel {
  ModelKind kind{ModelKind::Euclidean};
  int dim{1};  // Euclidean/hyperboloid dimension; branch count for star trees

  static SpaceModel euclidean(int dim) {
    if (dim < 1) throw DomainError("SpaceModel: euclidean dimension must be >= 1");
    return {ModelKind::Euclidean, dim};
  }
  static SpaceModel hyperboloid(int dim) {
    if (dim < 1) throw DomainError("SpaceModel: hyperboloid dimension must be >= 1");
    return {ModelKind::Hyperboloid, dim};
  }
  static SpaceModel star_tree(int branch_count) {
    if (branch_count < 2) throw DomainError("SpaceModel: star tree needs at least 2 branches");
    return {ModelKind::StarTree, branch_count};
  }

  /// Number of stored coordinates per point in this model.
  int coord_size() const {
    switch (kind) {
      case ModelKind::Euclidean: return dim;
      case ModelKind::Hyperboloid: return dim + 1;
      case ModelKind::StarTree: return 2;
    }
    return 0;
  }

  friend bool operator==(const SpaceModel&, const SpaceModel&) = default;
};

/// A location in a model space.
///
/// Euclidean: the coordinate vector itself. Hyperboloid: ambient coordinates
/// (x0,...,xd) on the sheet -x0^2 + sum_i xi^2 = -1 with x0 > 0. Star tree:
/// coords = {branch index, radius}; radius 0 is the common origin on every
/// branch and normalizes to branch 0 on construction.
struct Point {
  ModelKind model{ModelKind::Euclidean};
  std::vector<double> coords;

  int branch() const { return static_cast<int>(coords[0]); }
  double radius() const { return coords[1]; }
};

namespace detail {

inline double minkowski_inner(std::span<const double> a, std::span<const double> b) {
  double s = -a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Sheet tolerance at construction time; operations accept looser drift.
inline constexpr double kSheetBuildTol = 1e-9;
inline constexpr double kSheetOpTol = 1e-6;

}  // namespace detail

inline Point euclidean_point(std::vector<double> coords) {
  if (coords.empty()) throw InvalidPointError("euclidean point needs at least one coordinate");
  return Point{ModelKind::Euclidean, std::move(coords)};
}

inline Point hyperboloid_point(std::vector<double> coords) {
  if (coords.size() < 2) throw InvalidPointError("hyperboloid point needs ambient dimension >= 2");
  if (coords[0] <= 0.0) throw InvalidPointError("hyperboloid point must lie on the upper sheet (x0 > 0)");
  const double q = detail::minkowski_inner(coords, coords);
  if (std::abs(q + 1.0) > detail::kSheetBuildTol)
    throw InvalidPointError("hyperboloid point violates the Minkowski constraint <x,x> = -1");
  return Point{ModelKind::Hyperboloid, std::move(coords)};
}

/// Build a hyperboloid point from its spatial part, solving for x0.
inline Point lift_to_hyperboloid(std::span<const double> spatial) {
  std::vector<double> coords(spatial.size() + 1);
  double s = 0.0;
  for (std::size_t i = 0; i < spatial.size(); ++i) {
    coords[i + 1] = spatial[i];
    s += spatial[i] * spatial[i];
  }
  coords[0] = std::sqrt(1.0 + s);
  return Point{ModelKind::Hyperboloid, std::move(coords)};
}

inline Point hyperboloid_base(int dim) {
  std::vector<double> coords(static_cast<std::size_t>(dim) + 1, 0.0);
  coords[0] = 1.0;
  return Point{ModelKind::Hyperboloid, std::move(coords)};
}

inline Point star_tree_point(int branch, double radius) {
  if (branch < 0) throw InvalidPointError("star tree branch index must be nonnegative");
  if (!(radius >= 0.0)) throw InvalidPointError("star tree radius must be nonnegative");
  if (radius == 0.0) branch = 0;  // canonical origin
  return Point{ModelKind::StarTree, {static_cast<double>(branch), radius}};
}

inline Point tree_origin() { return star_tree_point(0, 0.0); }

/// Validate that `p` is a well-formed point of `space`; throws DomainError on
/// model mismatch and InvalidPointError on constraint violations.
inline void check_point(const SpaceModel& space, const Point& p, const char* where) {
  if (p.model != space.kind)
    throw DomainError(std::string(where) + ": point model " + model_name(p.model) +
                      " does not match space " + model_name(space.kind));
  if (static_cast<int>(p.coords.size()) != space.coord_size())
    throw InvalidPointError(std::string(where) + ": point has wrong coordinate count for the space");
  switch (space.kind) {
    case ModelKind::Euclidean:
      break;
    case ModelKind::Hyperboloid: {
      const double q = detail::minkowski_inner(p.coords, p.coords);
      if (p.coords[0] <= 0.0 || std::abs(q + 1.0) > detail::kSheetOpTol)
        throw InvalidPointError(std::string(where) + ": hyperboloid constraint violated beyond tolerance");
      break;
    }
    case ModelKind::StarTree: {
      if (p.branch() < 0 || p.branch() >= space.dim)
        throw InvalidPointError(std::string(where) + ": star tree branch index out of range");
      if (!(p.radius() >= 0.0))
        throw InvalidPointError(std::string(where) + ": star tree radius must be nonnegative");
      break;
    }
  }
}

/// Geodesic distance between two points of `space`.
///
/// Hyperboloid distances use cosh d = 1 + q/2 with q the Minkowski square of
/// the coordinate difference; this form stays accurate for nearby points
/// where -<a,b> suffers cancellation.
inline double dist(const SpaceModel& space, const Point& a, const Point& b) {
  check_point(space, a, "dist");
  check_point(space, b, "dist");
  switch (space.kind) {
    case ModelKind::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.coords.size(); ++i) {
        const double d = a.coords[i] - b.coords[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case ModelKind::Hyperboloid: {
      std::vector<double> diff(a.coords.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.coords[i] - b.coords[i];
      const double q = std::max(0.0, detail::minkowski_inner(diff, diff));
      return 2.0 * std::asinh(0.5 * std::sqrt(q));
    }
    case ModelKind::StarTree: {
      if (a.branch() == b.branch()) return std::abs(a.radius() - b.radius());
      return a.radius() + b.radius();
    }
  }
  return 0.0;
}

/// The geodesic point z = (1-lambda) x (+) lambda y, i.e. the unique point
/// with d(x,z) = lambda d(x,y) and d(y,z) = (1-lambda) d(x,y).
///
/// Endpoints are exact: lambda 0 returns x, lambda 1 returns y. Hyperboloid
/// results are re-projected onto the sheet to suppress drift.
inline Point combine(const SpaceModel& space, const Point& x, const Point& y, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("combine: lambda must lie in [0,1]");
  check_point(space, x, "combine");
  check_point(space, y, "combine");
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  switch (space.kind) {
    case ModelKind::Euclidean: {
      Point z = x;
      for (std::size_t i = 0; i < z.coords.size(); ++i)
        z.coords[i] = x.coords[i] + lambda * (y.coords[i] - x.coords[i]);
      return z;
    }
    case ModelKind::Hyperboloid: {
      const double total = dist(space, x, y);
      if (total == 0.0) return x;
      // gamma(t) = cosh(t) x + sinh(t) u with u the unit tangent toward y.
      const double ch = std::cosh(total);
      const double sh = std::sinh(total);
      const double t = lambda * total;
      const double ct = std::cosh(t);
      const double st = std::sinh(t);
      Point z = x;
      for (std::size_t i = 0; i < z.coords.size(); ++i)
        z.coords[i] = ct * x.coords[i] + st * (y.coords[i] - ch * x.coords[i]) / sh;
      const double norm = std::sqrt(-detail::minkowski_inner(z.coords, z.coords));
      for (double& c : z.coords) c /= norm;
      if (z.coords[0] < 0.0)
        for (double& c : z.coords) c = -c;
      return z;
    }
    case ModelKind::StarTree: {
      const double total = dist(space, x, y);
      if (total == 0.0) return x;
      const double s = lambda * total;  // arc length walked from x toward y
      if (x.branch() == y.branch()) {
        const double r = x.radius() + (y.radius() >= x.radius() ? s : -s);
        return star_tree_point(x.branch(), std::max(0.0, r));
      }
      if (s <= x.radius()) return star_tree_point(x.branch(), x.radius() - s);
      return star_tree_point(y.branch(), s - x.radius());
    }
  }
  return x;
}

/// Convex weights: components in [0,1] summing to 1 within 1e-12.
struct Weights {
  std::vector<double> values;

  explicit Weights(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw DomainError("Weights: at least one component required");
    double sum = 0.0;
    for (double w : values) {
      if (!(w >= 0.0 && w <= 1.0)) throw DomainError("Weights: components must lie in [0,1]");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("Weights: components must sum to 1");
  }

  static Weights uniform(std::size_t n) {
    return Weights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return values.size(); }
};

/// N-point geodesic combination, realized as the inductive left fold
/// c_1 = x_1, c_k = combine(c_{k-1}, x_k, w_k / (w_1 + ... + w_k)).
///
/// The fold reduces to the affine combination in Euclidean space and obeys
/// d(result, z) <= sum_i w_i d(x_i, z) in every model. The final fold
/// denominator is exactly 1 because the weights are validated to sum to 1,
/// which keeps the two-point case identical to a plain combine call.
inline Point multi_combine(const SpaceModel& space, std::span<const Point> points, const Weights& w) {
  if (points.size() != w.size()) throw DomainError("multi_combine: points/weights length mismatch");
  if (points.empty()) throw DomainError("multi_combine: at least one point required");
  Point acc = points[0];
  double prefix = w.values[0];
  const std::size_t n = points.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double lam = w.values[k];
    const double denom = (k + 1 == n) ? 1.0 : prefix + lam;
    if (denom > 0.0) acc = combine(space, acc, points[k], std::clamp(lam / denom, 0.0, 1.0));
    prefix = denom;
  }
  return acc;
}

/// Quasi-linearization <ab, cd> = (d^2(a,d) + d^2(b,c) - d^2(a,c) - d^2(b,d)) / 2,
/// the generalized inner product on vectors ab and cd.
inline double quasi_inner(const SpaceModel& space, const Point& a, const Point& b, const Point& c,
                          const Point& d) {
  const double ad = dist(space, a, d);
  const double bc = dist(space, b, c);
  const double ac = dist(space, a, c);
  const double bd = dist(space, b, d);
  return 0.5 * (ad * ad + bc * bc - ac * ac - bd * bd);
}

/// Defect of the CAT(0) comparison inequality at (x, y, z, lambda):
///   d^2(x, (1-l)y (+) l z) - [(1-l) d^2(x,y) + l d^2(x,z) - l(1-l) d^2(y,z)].
/// Nonpositive (up to rounding) in every CAT(0) space; identically zero in
/// Euclidean space.
inline double cat0_defect(const SpaceModel& space, const Point& x, const Point& y, const Point& z,
                          double lambda) {
  const Point mid = combine(space, y, z, lambda);
  const double xm = dist(space, x, mid);
  const double xy = dist(space, x, y);
  const double xz = dist(space, x, z);
  const double yz = dist(space, y, z);
  return xm * xm - ((1.0 - lambda) * xy * xy + lambda * xz * xz - lambda * (1.0 - lambda) * yz * yz);
}

}  // namespace hadamard
