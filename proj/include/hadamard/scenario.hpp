#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hadamard/diagnostics.hpp"
#include "hadamard/json_io.hpp"
#include "hadamard/solver.hpp"

namespace hadamard {

struct CertificateOutcome {
  std::string name;
  bool applicable{};
  bool pass{};
  std::string detail;
};

struct RunResult {
  Scenario scenario;
  VipSolution solution;
  IterationTrace trace;
  bool truncated = false;
  bool strict_interior = false;
  double truncation_radius = 0.0;
  double fejer_max = std::numeric_limits<double>::quiet_NaN();
  std::optional<DeltaReport> delta;
  CauchyReport tail_cauchy;
  std::vector<std::pair<std::string, SolveOutput>> comparisons;
  RateTable rates;
  std::vector<CertificateOutcome> certificates;
  bool all_certificates_pass = true;
  json summary;
  std::string report_text;
};

namespace detail {

inline void build_summary(RunResult& out) {
  const Scenario& s = out.scenario;
  json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["scheme"] = out.trace.scheme;
  j["x"] = to_json(out.solution.x);
  j["u"] = to_json(out.solution.u);
  j["residual"] = out.solution.residual;
  j["residuals"] = out.solution.residuals;
  j["iterations"] = out.solution.iterations;
  j["converged"] = out.solution.converged;
  j["certified"] = out.solution.certified;
  j["final_d_x_Tx"] = out.trace.final_d_x_Tx;
  if (out.truncated) {
    j["strict_interior"] = out.strict_interior;
    j["truncation_radius"] = out.truncation_radius;
  }
  if (!s.fixed_points.empty()) j["fejer_max"] = out.fejer_max;
  if (out.delta)
    j["delta"] = json{{"pass", out.delta->pass}, {"max_center_gap", out.delta->max_center_gap}};
  j["tail_cauchy"] = json{{"pass", out.tail_cauchy.pass}, {"max_gap", out.tail_cauchy.max_gap}};
  if (!out.rates.entries.empty()) {
    json rates;
    for (const auto& e : out.rates.entries)
      rates[e.scheme] = e.first_index ? json(*e.first_index) : json(nullptr);
    j["rate_indices"] = rates;
  }
  json certs = json::array();
  for (const auto& c : out.certificates)
    certs.push_back(json{
        {"name", c.name}, {"applicable", c.applicable}, {"pass", c.pass}, {"detail", c.detail}});
  j["certificates"] = certs;
  j["all_certificates_pass"] = out.all_certificates_pass;
  out.summary = std::move(j);
}

inline void build_report(RunResult& out) {
  const Scenario& s = out.scenario;
  std::ostringstream os;
  os << "scenario: " << s.name << "\n";
  if (!s.description.empty()) os << "  " << s.description << "\n";
  os << "space: " << to_json(s.space).dump() << ", mappings: " << s.maps.size()
     << ", seed: " << s.seed << "\n";
  os << "schedule: " << to_json(s.schedule).dump() << "\n\n";
  os << "iterations: " << out.solution.iterations << " (max " << s.max_iter << ")\n";
  os << "converged (d(x,Tx) < " << s.tol_fp << "): " << (out.solution.converged ? "yes" : "no")
     << ", final d(x,Tx) = " << out.trace.final_d_x_Tx << "\n";
  os << "x = " << to_json(out.solution.x).dump() << "\n";
  os << "u = " << to_json(out.solution.u).dump() << "\n";
  os << "residual = " << out.solution.residual << " (tol " << s.tol_res << ")\n";
  if (out.truncated)
    os << "truncation: radius " << out.truncation_radius << ", strict interior: "
       << (out.strict_interior ? "yes" : "no") << "\n";
  if (!s.fixed_points.empty()) os << "fejer max violation: " << out.fejer_max << "\n";
  if (out.delta)
    os << "delta check: " << (out.delta->pass ? "pass" : "FAIL")
       << " (max center gap " << out.delta->max_center_gap << ", tol " << out.delta->tol << ")\n";
  os << "tail cauchy gap: " << out.tail_cauchy.max_gap << "\n";
  if (!out.rates.entries.empty()) os << "\n" << out.rates.to_text();
  os << "\ncertificates:\n";
  for (const auto& c : out.certificates) {
    os << "  " << c.name << ": ";
    if (!c.applicable)
      os << "skipped (" << c.detail << ")";
    else
      os << (c.pass ? "pass" : "FAIL") << (c.detail.empty() ? "" : " (" + c.detail + ")");
    os << "\n";
  }
  os << "overall: " << (out.all_certificates_pass ? "PASS" : "FAIL") << "\n";
  out.report_text = os.str();
}

}  // namespace detail

/// Execute a scenario: solve, run the requested diagnostics and certificates,
/// and assemble the summary/report artifacts. Deterministic given the seed.
inline RunResult run_scenario(const Scenario& input,
                              std::optional<std::uint64_t> seed_override = std::nullopt) {
  RunResult out;
  out.scenario = input;
  if (seed_override) out.scenario.seed = *seed_override;
  const Scenario& s = out.scenario;
  const VipProblem problem = s.problem();

  if (s.truncation) {
    if (problem.is_system())
      throw DomainError("run_scenario: truncation applies to single-mapping problems");
    auto tr = s.truncation->expand
                  ? truncated_solve_expanding(problem, s.truncation->origin, s.truncation->radius)
                  : truncated_solve(problem, s.truncation->origin, s.truncation->radius);
    out.truncated = true;
    out.strict_interior = tr.strict_interior;
    out.truncation_radius = tr.radius;
    out.solution = std::move(tr.solution);
    out.trace = std::move(tr.trace);
  } else if (problem.is_system()) {
    auto r = solve_system(problem);
    out.solution = std::move(r.solution);
    out.trace = std::move(r.trace);
  } else {
    auto r = solve_vip(problem);
    out.solution = std::move(r.solution);
    out.trace = std::move(r.trace);
  }

  if (!s.fixed_points.empty()) {
    out.fejer_max = 0.0;
    for (const auto& p : s.fixed_points)
      out.fejer_max = std::max(out.fejer_max, fejer_audit(s.space, out.trace, p));
  }
  if (out.trace.iterates.size() >= 40)
    out.delta = delta_convergence_check(s.space, out.trace, s.certificates.delta_tol);
  out.tail_cauchy = strong_convergence_check(s.space, out.trace, s.certificates.delta_tol);

  if (!s.schemes.empty()) {
    std::vector<std::pair<std::string, const IterationTrace*>> labeled;
    for (const auto& name : s.schemes) {
      const auto scheme = scheme_from_name(name);
      out.comparisons.emplace_back(name, run_scheme(problem, *scheme));
      labeled.emplace_back(name, &out.comparisons.back().second.trace);
    }
    out.rates = rate_report(labeled, s.tol_fp);
  }

  auto add_cert = [&](const std::string& name, bool applicable, bool pass, std::string detail) {
    out.certificates.push_back({name, applicable, pass, std::move(detail)});
    if (applicable && !pass) out.all_certificates_pass = false;
  };
  if (s.certificates.residual) {
    std::ostringstream d;
    d << "residual " << out.solution.residual << " >= -" << s.tol_res;
    add_cert("residual", true, out.solution.certified, d.str());
  }
  if (s.certificates.convergence) {
    std::ostringstream d;
    d << "final d(x,Tx) = " << out.trace.final_d_x_Tx;
    add_cert("convergence", true, out.solution.converged, d.str());
  }
  if (s.certificates.fejer) {
    const bool applicable = !s.fixed_points.empty();
    std::ostringstream d;
    if (applicable)
      d << "max step-wise increase " << out.fejer_max;
    else
      d << "no declared fixed points";
    add_cert("fejer", applicable, applicable && out.fejer_max <= 1e-9, d.str());
  }
  if (s.certificates.delta) {
    const bool applicable = out.delta.has_value();
    std::ostringstream d;
    if (applicable)
      d << "max center gap " << out.delta->max_center_gap << ", tol " << out.delta->tol;
    else
      d << "trace shorter than 40 iterates";
    add_cert("delta", applicable, applicable && out.delta->pass, d.str());
  }

  detail::build_summary(out);
  detail::build_report(out);
  return out;
}

/// Write trace.csv, summary.json and report.txt into the output directory.
inline void write_artifacts(const RunResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / "trace.csv");
    result.trace.write_csv(csv);
  }
  {
    std::ofstream summary(out_dir / "summary.json");
    summary << result.summary.dump(2) << "\n";
  }
  {
    std::ofstream report(out_dir / "report.txt");
    report << result.report_text;
  }
}

/// The shipped scenario catalog, in stable order.
inline const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> scenarios = [] {
    std::vector<Scenario> all;
    const auto e2 = SpaceModel::euclidean(2);
    const auto h2 = SpaceModel::hyperboloid(2);
    const auto tree = SpaceModel::star_tree(4);

    {
      Scenario s;
      s.name = "ball-constant";
      s.description = "unit ball with an outside constant target; the solution is its boundary projection";
      s.space = e2;
      s.sets = {ConvexSet::ball(e2, euclidean_point({0, 0}), 1.0)};
      s.maps = {MultiMap::constant_set(FinitePointSet(e2, {euclidean_point({2, 0})}))};
      s.x0 = euclidean_point({0, 0});
      s.max_iter = 200;
      s.sample_size = 512;
      s.seed = 1;
      s.certificates.convergence = false;  // the target is not a fixed point inside K
      s.certificates.delta = true;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "ball-contraction";
      s.description = "interior contraction anchor: the iterates collapse onto the fixed point";
      s.space = e2;
      s.sets = {ConvexSet::ball(e2, euclidean_point({0, 0}), 2.0)};
      s.maps = {MultiMap::union_of(
          e2, {MapDescriptor::contraction(euclidean_point({0.3, 0.2}), 0.5)})};
      s.x0 = euclidean_point({1.5, -0.8});
      s.fixed_points = {euclidean_point({0.3, 0.2})};
      s.schemes = {"picard_s", "mann", "ishikawa", "picard"};
      s.seed = 2;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "ball-segment";
      s.description = "segment-valued mapping between two contractions sharing an anchor";
      s.space = e2;
      s.sets = {ConvexSet::ball(e2, euclidean_point({0, 0}), 2.0)};
      s.maps = {MultiMap::segment(e2,
                                  MapDescriptor::contraction(euclidean_point({-0.4, 0.3}), 0.7),
                                  MapDescriptor::contraction(euclidean_point({-0.4, 0.3}), 0.95), 8)};
      s.x0 = euclidean_point({1.2, 0.9});
      s.fixed_points = {euclidean_point({-0.4, 0.3})};
      s.certificates.delta = true;
      s.seed = 3;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "halfspace-truncation";
      s.description = "unbounded half-space solved through the truncated problem on K n Ball(o, 5)";
      s.space = e2;
      s.sets = {ConvexSet::half_space(e2, {1, 0}, 0.0)};
      s.maps = {MultiMap::union_of(e2, {MapDescriptor::contraction(euclidean_point({-2, 0}), 0.5)})};
      s.x0 = euclidean_point({-0.5, 0});
      s.fixed_points = {euclidean_point({-2, 0})};
      s.truncation = TruncationSpec{euclidean_point({0, 0}), 5.0, false};
      s.max_iter = 400;
      s.seed = 4;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "hyperboloid-constant";
      s.description = "hyperbolic ball with a constant target two units out along a geodesic";
      s.space = h2;
      s.sets = {ConvexSet::ball(h2, hyperboloid_base(2), 1.0)};
      s.maps = {MultiMap::constant_set(
          FinitePointSet(h2, {hyperboloid_point({std::cosh(2.0), std::sinh(2.0), 0.0})}))};
      s.x0 = hyperboloid_base(2);
      s.max_iter = 200;
      s.seed = 5;
      s.certificates.convergence = false;
      s.certificates.delta = true;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "hyperboloid-contraction";
      s.description = "contraction toward an interior anchor of a hyperbolic ball";
      s.space = h2;
      s.sets = {ConvexSet::ball(h2, hyperboloid_base(2), 1.5)};
      s.maps = {MultiMap::union_of(
          h2, {MapDescriptor::contraction(lift_to_hyperboloid(std::vector<double>{0.3, 0.2}), 0.6)})};
      s.x0 = hyperboloid_base(2);
      s.fixed_points = {lift_to_hyperboloid(std::vector<double>{0.3, 0.2})};
      s.seed = 6;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "tree-constant";
      s.description = "star-tree ball with a constant target beyond the rim";
      s.space = tree;
      s.sets = {ConvexSet::ball(tree, tree_origin(), 1.0)};
      s.maps = {MultiMap::constant_set(FinitePointSet(tree, {star_tree_point(2, 2.0)}))};
      s.x0 = tree_origin();
      s.max_iter = 200;
      s.seed = 7;
      s.certificates.convergence = false;
      s.certificates.delta = true;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "tree-contraction";
      s.description = "union of two contractions toward a point on branch 1 of a capped subtree";
      s.space = tree;
      s.sets = {ConvexSet::sub_tree(tree, {0, 1, 2, 3}, 3.0)};
      s.maps = {MultiMap::union_of(tree, {MapDescriptor::contraction(star_tree_point(1, 0.5), 0.5),
                                          MapDescriptor::contraction(star_tree_point(1, 0.5), 0.75)})};
      s.x0 = star_tree_point(2, 2.0);
      s.fixed_points = {star_tree_point(1, 0.5)};
      s.seed = 8;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "system-contractions";
      s.description = "three contractions with a common anchor under the N-mapping iteration";
      s.space = e2;
      const auto big = ConvexSet::ball(e2, euclidean_point({0, 0}), 3.0);
      s.sets = {big, big, big};
      const Point anchor = euclidean_point({0.3, -0.2});
      s.maps = {MultiMap::union_of(e2, {MapDescriptor::contraction(anchor, 0.3)}),
                MultiMap::union_of(e2, {MapDescriptor::contraction(anchor, 0.5)}),
                MultiMap::union_of(e2, {MapDescriptor::contraction(anchor, 0.7)})};
      s.x0 = euclidean_point({2, 1});
      s.schedule = ScheduleSpec::uniform_system(3);
      s.fixed_points = {anchor};
      s.seed = 9;
      all.push_back(std::move(s));
    }
    {
      Scenario s;
      s.name = "system-feasibility";
      s.description = "convex feasibility: each mapping projects onto its own ball";
      s.space = e2;
      s.sets = {ConvexSet::ball(e2, euclidean_point({0.5, 0}), 1.0),
                ConvexSet::ball(e2, euclidean_point({-0.5, 0}), 1.0)};
      s.maps = {MultiMap::union_of(e2, {MapDescriptor::projection(s.sets[0])}),
                MultiMap::union_of(e2, {MapDescriptor::projection(s.sets[1])})};
      s.x0 = euclidean_point({0, 0.2});
      s.schedule = ScheduleSpec::uniform_system(2);
      s.seed = 10;
      all.push_back(std::move(s));
    }
    return all;
  }();
  return scenarios;
}

inline const Scenario* find_builtin(const std::string& name) {
  for (const auto& s : builtin_scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace hadamard
