#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hadamard/errors.hpp"
#include "hadamard/rng.hpp"
#include "hadamard/space.hpp"
#include "hadamard/trace.hpp"

namespace hadamard {

/// Half-open index window [start, end) into a point sequence; the finite
/// stand-in for "eventually" in the asymptotic quantities.
struct TailWindow {
  std::size_t start{};
  std::size_t end{};
};

inline TailWindow last_half(std::size_t len) { return {len / 2, len}; }
inline TailWindow last_quarter(std::size_t len) { return {len - len / 4, len}; }

struct CenterEstimate {
  Point center;
  double radius{};
};

/// Estimate the minimax center of the windowed points: the desk-scale
/// surrogate for the asymptotic center of a sequence.
///
/// Geodesic descent toward the current farthest point with step
/// eta_0 / (k+1), eta_0 = half the window diameter, keeping the best point
/// seen. Stops once the best value has not improved by 1e-10 for a stretch
/// of steps, or after 1e4 steps.
inline CenterEstimate asymptotic_center_estimate(const SpaceModel& space,
                                                 std::span<const Point> pts, TailWindow w) {
  if (!(w.start < w.end && w.end <= pts.size()))
    throw DomainError("asymptotic_center_estimate: empty or out-of-range window");
  const auto minimax = [&](const Point& c) {
    double worst = 0.0;
    for (std::size_t i = w.start; i < w.end; ++i) worst = std::max(worst, dist(space, c, pts[i]));
    return worst;
  };

  double diameter = 0.0;
  for (std::size_t i = w.start; i < w.end; ++i)
    for (std::size_t j = i + 1; j < w.end; ++j)
      diameter = std::max(diameter, dist(space, pts[i], pts[j]));

  Point best = pts[w.end - 1];
  double best_f = minimax(best);
  if (diameter == 0.0) return {best, best_f};

  const double eta0 = 0.5 * diameter;
  Point cur = best;
  int stall = 0;
  for (int k = 0; k < 10000; ++k) {
    std::size_t far = w.start;
    double fc = 0.0;
    for (std::size_t i = w.start; i < w.end; ++i) {
      const double d = dist(space, cur, pts[i]);
      if (d > fc) {
        fc = d;
        far = i;
      }
    }
    if (fc == 0.0) break;
    const double step = eta0 / (k + 1);
    cur = combine(space, cur, pts[far], std::min(1.0, step / fc));
    const double fn = minimax(cur);
    if (fn < best_f - 1e-10) {
      best_f = fn;
      best = cur;
      stall = 0;
    } else if (++stall >= 200) {
      break;
    }
  }
  return {best, minimax(best)};
}

struct DeltaEntry {
  std::string mask;
  std::size_t count{};
  CenterEstimate estimate;
};

struct DeltaReport {
  std::vector<DeltaEntry> entries;
  double max_center_gap{};
  double tol{};
  bool pass{};
};

/// Check the Delta-convergence surrogate on a recorded trace: the asymptotic
/// center estimates of the tail, the even- and odd-indexed subsequences and
/// two seeded random-mask subsequences must agree within tol.
inline DeltaReport delta_convergence_check(const SpaceModel& space, const IterationTrace& trace,
                                           double tol) {
  const auto& xs = trace.iterates;
  if (xs.size() < 40)
    throw DomainError("delta_convergence_check: trace too short (need at least 40 iterates)");
  const TailWindow w = last_half(xs.size());

  std::vector<std::pair<std::string, std::vector<Point>>> masks;
  auto collect = [&](const std::string& label, auto&& keep) {
    std::vector<Point> sel;
    for (std::size_t i = w.start; i < w.end; ++i)
      if (keep(i)) sel.push_back(xs[i]);
    if (sel.size() < 2) sel.assign(xs.begin() + static_cast<std::ptrdiff_t>(w.start),
                                   xs.begin() + static_cast<std::ptrdiff_t>(w.start) + 2);
    masks.emplace_back(label, std::move(sel));
  };
  collect("tail", [](std::size_t) { return true; });
  collect("even", [](std::size_t i) { return i % 2 == 0; });
  collect("odd", [](std::size_t i) { return i % 2 == 1; });
  SplitMix64 rng(trace.seed ^ 0xC2B2AE3D27D4EB4FULL);
  for (int m = 0; m < 2; ++m)
    collect("random" + std::to_string(m + 1), [&](std::size_t) { return rng.next_double() < 0.5; });

  DeltaReport report;
  report.tol = tol;
  for (auto& [label, sel] : masks) {
    const TailWindow full{0, sel.size()};
    report.entries.push_back({label, sel.size(), asymptotic_center_estimate(space, sel, full)});
  }
  for (std::size_t i = 0; i < report.entries.size(); ++i)
    for (std::size_t j = i + 1; j < report.entries.size(); ++j)
      report.max_center_gap =
          std::max(report.max_center_gap, dist(space, report.entries[i].estimate.center,
                                               report.entries[j].estimate.center));
  report.pass = report.max_center_gap <= tol;
  return report;
}

/// Largest one-step increase of d(x_n, p) along the trace; at most ~0 when
/// the iteration is Fejer monotone with respect to p.
inline double fejer_audit(const SpaceModel& space, const IterationTrace& trace, const Point& p) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < trace.iterates.size(); ++k)
    worst = std::max(worst, dist(space, trace.iterates[k + 1], p) -
                                dist(space, trace.iterates[k], p));
  return worst;
}

struct CauchyReport {
  double max_gap{};
  double tol{};
  bool pass{};
};

/// Strong-convergence surrogate: the last-quarter window of the trace must
/// be Cauchy, i.e. have small diameter.
inline CauchyReport strong_convergence_check(const SpaceModel& space, const IterationTrace& trace,
                                             double tol) {
  const auto& xs = trace.iterates;
  CauchyReport r;
  r.tol = tol;
  if (xs.empty()) {
    r.pass = false;
    return r;
  }
  const TailWindow w = last_quarter(xs.size());
  for (std::size_t i = w.start; i < w.end; ++i)
    for (std::size_t j = i + 1; j < w.end; ++j)
      r.max_gap = std::max(r.max_gap, dist(space, xs[i], xs[j]));
  r.pass = r.max_gap <= tol;
  return r;
}

struct RateEntry {
  std::string scheme;
  std::optional<int> first_index;  // empty: target never reached within max_iter
};

struct RateTable {
  double target{};
  std::vector<RateEntry> entries;

  std::string to_text() const {
    std::ostringstream os;
    os << "first index with d(x_n, Tx_n) < " << target << "\n";
    for (const auto& e : entries) {
      os << "  " << e.scheme << ": ";
      if (e.first_index)
        os << *e.first_index;
      else
        os << "not reached (max_iter)";
      os << "\n";
    }
    return os.str();
  }
};

/// First index per scheme at which the displacement d(x_n, Tx_n) drops below
/// the target. Reports indices only; asserts no winner.
inline RateTable rate_report(const std::vector<std::pair<std::string, const IterationTrace*>>& traces,
                             double target) {
  RateTable table;
  table.target = target;
  for (const auto& [label, trace] : traces) {
    RateEntry entry{label, std::nullopt};
    for (std::size_t k = 0; k < trace->rows.size(); ++k) {
      if (trace->rows[k].d_x_Tx < target) {
        entry.first_index = static_cast<int>(k);
        break;
      }
    }
    if (!entry.first_index && trace->final_d_x_Tx < target)
      entry.first_index = static_cast<int>(trace->rows.size());
    table.entries.push_back(std::move(entry));
  }
  return table;
}

}  // namespace hadamard
