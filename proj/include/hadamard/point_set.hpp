#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "hadamard/errors.hpp"
#include "hadamard/space.hpp"

namespace hadamard {

/// Finite surrogate for a compact set of points: the value type of a
/// multivalued mapping. Construction drops near-duplicates (pairwise distance
/// below 1e-12), keeping first occurrences so selection indices stay stable.
class FinitePointSet {
 public:
  FinitePointSet(SpaceModel space, std::vector<Point> pts) : space_(space) {
    if (pts.empty()) throw DomainError("FinitePointSet: at least one point required");
    for (auto& p : pts) {
      check_point(space_, p, "FinitePointSet");
      bool duplicate = false;
      for (const auto& q : points_) {
        if (dist(space_, p, q) < 1e-12) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) points_.push_back(std::move(p));
    }
  }

  const SpaceModel& space() const { return space_; }
  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  SpaceModel space_;
  std::vector<Point> points_;
};

/// d(x, A) = min over members of A.
inline double dist_point_set(const Point& x, const FinitePointSet& A) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : A.points()) best = std::min(best, dist(A.space(), x, a));
  return best;
}

/// Hausdorff distance between two finite sets of the same model:
/// max of the two directed sup-inf distances.
inline double hausdorff(const FinitePointSet& A, const FinitePointSet& B) {
  if (!(A.space() == B.space())) throw DomainError("hausdorff: sets live in different spaces");
  double forward = 0.0;
  for (const auto& a : A.points()) forward = std::max(forward, dist_point_set(a, B));
  double backward = 0.0;
  for (const auto& b : B.points()) backward = std::max(backward, dist_point_set(b, A));
  return std::max(forward, backward);
}

}  // namespace hadamard
