#pragma once

#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "hadamard/space.hpp"

namespace hadamard {

/// Per-step record: row k describes the step taken from iterate x_k.
struct TraceRow {
  int n{};
  double d_x_Tx{};  // distance to the mapping value at x_n (max over mappings for systems)
  double step_displacement{};
  double residual_sample = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> d_to_fixed;    // d(x_n, p) per declared fixed point
  std::vector<double> d_y_to_fixed;  // d(y_n, p) when the scheme has an intermediate y_n
  std::vector<double> d_z_to_fixed;  // d(z_n, p) likewise (not emitted to CSV)
  std::vector<double> per_map_d_x_Tx;  // systems: d(x_n, T_i x_n) per mapping
  double max_selection_gap{};          // systems: max pairwise d(u_{n,i}, u_{n,j})
};

/// Full iteration history of one solve: iterates x_0..x_T plus one TraceRow
/// per step, aligned 1:1.
struct IterationTrace {
  SpaceModel space;
  std::string scheme = "picard_s";
  int map_count = 1;
  std::vector<Point> iterates;
  std::vector<TraceRow> rows;
  std::vector<Point> fixed_points;
  std::string schedule_echo;
  std::uint64_t seed{};
  // displacement at the final iterate; rows only record pre-step values
  double final_d_x_Tx = std::numeric_limits<double>::quiet_NaN();

  void write_csv(std::ostream& os) const {
    const std::size_t fp = fixed_points.size();
    const bool has_y = !rows.empty() && !rows.front().d_y_to_fixed.empty();
    const bool system = map_count > 1;
    os << "n,d_x_Tx";
    for (std::size_t i = 0; i < fp; ++i) os << ",d_to_p" << i;
    os << ",residual_sample,step_displacement";
    if (has_y)
      for (std::size_t i = 0; i < fp; ++i) os << ",d_y_to_p" << i;
    if (system) {
      for (int i = 0; i < map_count; ++i) os << ",d_x_T" << i << "x";
      os << ",sel_gap_max";
    }
    os << "\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
      os << r.n << ',' << r.d_x_Tx;
      for (std::size_t i = 0; i < fp; ++i) os << ',' << r.d_to_fixed[i];
      os << ',' << r.residual_sample << ',' << r.step_displacement;
      if (has_y)
        for (std::size_t i = 0; i < fp; ++i) os << ',' << r.d_y_to_fixed[i];
      if (system) {
        for (int i = 0; i < map_count; ++i) os << ',' << r.per_map_d_x_Tx[i];
        os << ',' << r.max_selection_gap;
      }
      os << "\n";
    }
  }
};

}  // namespace hadamard
