#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hadamard/convex_set.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/multimap.hpp"
#include "hadamard/schedule.hpp"
#include "hadamard/solver.hpp"
#include "hadamard/space.hpp"

namespace hadamard {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key, const char* context) {
  const auto it = j.find(key);
  if (it == j.end())
    throw DomainError(std::string(context) + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

}  // namespace detail

// ---------- SpaceModel ----------

inline json to_json(const SpaceModel& s) {
  if (s.kind == ModelKind::StarTree) return json{{"kind", "star_tree"}, {"branches", s.dim}};
  return json{{"kind", model_name(s.kind)}, {"dim", s.dim}};
}

inline SpaceModel space_from_json(const json& j) {
  const std::string kind = detail::field(j, "kind", "space").get<std::string>();
  if (kind == "euclidean") return SpaceModel::euclidean(detail::field(j, "dim", "space").get<int>());
  if (kind == "hyperboloid")
    return SpaceModel::hyperboloid(detail::field(j, "dim", "space").get<int>());
  if (kind == "star_tree")
    return SpaceModel::star_tree(detail::field(j, "branches", "space").get<int>());
  throw DomainError("space: unknown kind '" + kind + "'");
}

// ---------- Point ----------

inline json to_json(const Point& p) {
  if (p.model == ModelKind::StarTree)
    return json{{"model", "star_tree"}, {"branch", p.branch()}, {"radius", p.radius()}};
  return json{{"model", model_name(p.model)}, {"coords", p.coords}};
}

inline Point point_from_json(const json& j, const SpaceModel& space) {
  const std::string model = detail::field(j, "model", "point").get<std::string>();
  Point p;
  if (model == "euclidean") {
    p = euclidean_point(detail::field(j, "coords", "point").get<std::vector<double>>());
  } else if (model == "hyperboloid") {
    p = hyperboloid_point(detail::field(j, "coords", "point").get<std::vector<double>>());
  } else if (model == "star_tree") {
    p = star_tree_point(detail::field(j, "branch", "point").get<int>(),
                        detail::field(j, "radius", "point").get<double>());
  } else {
    throw DomainError("point: unknown model '" + model + "'");
  }
  check_point(space, p, "point");
  return p;
}

// ---------- ConvexSet ----------

inline json to_json(const ConvexSet& k) {
  switch (k.kind()) {
    case ConvexSet::Kind::Ball: {
      const auto& b = k.as_ball();
      return json{{"type", "ball"}, {"center", to_json(b.center)}, {"radius", b.radius}};
    }
    case ConvexSet::Kind::HalfSpace: {
      const auto& h = k.as_half_space();
      return json{{"type", "half_space"}, {"normal", h.normal}, {"offset", h.offset}};
    }
    case ConvexSet::Kind::SubTree: {
      const auto& t = k.as_sub_tree();
      json cap;
      if (std::isfinite(t.radius_cap)) cap = t.radius_cap;
      return json{{"type", "subtree"}, {"branches", t.branches}, {"radius_cap", cap}};
    }
    case ConvexSet::Kind::Intersection: {
      const auto& i = k.as_intersection();
      json members = json::array();
      for (const auto& m : i.members) members.push_back(to_json(m));
      return json{{"type", "intersection"}, {"members", members}, {"witness", to_json(i.witness)}};
    }
  }
  throw DomainError("convex set: unknown variant");
}

inline ConvexSet set_from_json(const json& j, const SpaceModel& space) {
  const std::string type = detail::field(j, "type", "set").get<std::string>();
  if (type == "ball")
    return ConvexSet::ball(space, point_from_json(detail::field(j, "center", "ball"), space),
                           detail::field(j, "radius", "ball").get<double>());
  if (type == "half_space")
    return ConvexSet::half_space(space,
                                 detail::field(j, "normal", "half_space").get<std::vector<double>>(),
                                 detail::field(j, "offset", "half_space").get<double>());
  if (type == "subtree") {
    const json& cap = detail::field(j, "radius_cap", "subtree");
    return ConvexSet::sub_tree(space, detail::field(j, "branches", "subtree").get<std::vector<int>>(),
                               cap.is_null() ? std::numeric_limits<double>::infinity()
                                             : cap.get<double>());
  }
  if (type == "intersection") {
    std::vector<ConvexSet> members;
    for (const auto& m : detail::field(j, "members", "intersection"))
      members.push_back(set_from_json(m, space));
    return ConvexSet::intersection(std::move(members),
                                   point_from_json(detail::field(j, "witness", "intersection"), space));
  }
  throw DomainError("set: unknown type '" + type + "'");
}

// ---------- MapDescriptor ----------

inline json to_json(const MapDescriptor& f) {
  struct Visitor {
    json operator()(const IdentityMap&) const { return json{{"type", "identity"}}; }
    json operator()(const ConstantMap& m) const {
      return json{{"type", "constant"}, {"point", to_json(m.value)}};
    }
    json operator()(const ProjectionMap& m) const {
      return json{{"type", "project"}, {"set", to_json(m.set)}};
    }
    json operator()(const ContractionMap& m) const {
      return json{{"type", "contraction"}, {"anchor", to_json(m.anchor)}, {"factor", m.factor}};
    }
    json operator()(const ChainMap& m) const {
      json maps = json::array();
      for (const auto& g : m.maps) maps.push_back(to_json(g));
      return json{{"type", "chain"}, {"maps", maps}};
    }
  };
  return std::visit(Visitor{}, f.value());
}

inline MapDescriptor map_from_json(const json& j, const SpaceModel& space) {
  const std::string type = detail::field(j, "type", "map").get<std::string>();
  if (type == "identity") return MapDescriptor::identity();
  if (type == "constant")
    return MapDescriptor::constant(point_from_json(detail::field(j, "point", "map"), space));
  if (type == "project") return MapDescriptor::projection(set_from_json(detail::field(j, "set", "map"), space));
  if (type == "contraction")
    return MapDescriptor::contraction(point_from_json(detail::field(j, "anchor", "map"), space),
                                      detail::field(j, "factor", "map").get<double>());
  if (type == "chain") {
    std::vector<MapDescriptor> maps;
    for (const auto& g : detail::field(j, "maps", "chain")) maps.push_back(map_from_json(g, space));
    return MapDescriptor::chain(std::move(maps));
  }
  throw DomainError("map: unknown type '" + type + "'");
}

// ---------- MultiMap ----------

inline json to_json(const MultiMap& T) {
  struct Visitor {
    json operator()(const UnionOfMaps& u) const {
      json maps = json::array();
      for (const auto& f : u.maps) maps.push_back(to_json(f));
      return json{{"variant", "union"}, {"maps", maps}};
    }
    json operator()(const ConstantSetValue& c) const {
      json pts = json::array();
      for (const auto& p : c.set.points()) pts.push_back(to_json(p));
      return json{{"variant", "constant_set"}, {"points", pts}};
    }
    json operator()(const SegmentValue& s) const {
      return json{{"variant", "segment"},
                  {"first", to_json(s.first)},
                  {"second", to_json(s.second)},
                  {"samples", s.segments}};
    }
    json operator()(const ProjectedValue&) const {
      throw DomainError("multimap: projected multimaps are built programmatically, not serialized");
    }
  };
  return std::visit(Visitor{}, T.value());
}

inline MultiMap multimap_from_json(const json& j, const SpaceModel& space) {
  const std::string variant = detail::field(j, "variant", "multimap").get<std::string>();
  if (variant == "union") {
    std::vector<MapDescriptor> maps;
    for (const auto& f : detail::field(j, "maps", "multimap")) maps.push_back(map_from_json(f, space));
    return MultiMap::union_of(space, std::move(maps));
  }
  if (variant == "constant_set") {
    std::vector<Point> pts;
    for (const auto& p : detail::field(j, "points", "multimap"))
      pts.push_back(point_from_json(p, space));
    return MultiMap::constant_set(FinitePointSet(space, std::move(pts)));
  }
  if (variant == "segment")
    return MultiMap::segment(space, map_from_json(detail::field(j, "first", "segment"), space),
                             map_from_json(detail::field(j, "second", "segment"), space),
                             detail::field(j, "samples", "segment").get<int>());
  throw DomainError("multimap: unknown variant '" + variant + "'");
}

// ---------- Schedule (serializable constant form) ----------

/// Constant-weight schedule description; the serializable surface of
/// Schedule. Function-valued schedules exist only in code.
struct ScheduleSpec {
  double alpha = 0.5;
  double beta = 0.5;
  std::vector<double> lambda;  // nonempty: system schedule
  std::vector<double> alpha_vec;
  std::vector<double> beta_vec;
  std::vector<double> gamma;

  bool is_system() const { return !lambda.empty(); }

  Schedule build() const {
    if (is_system()) return Schedule::system_constant(lambda, alpha_vec, beta_vec, gamma);
    return Schedule::constant(alpha, beta);
  }

  static ScheduleSpec single(double a, double b) {
    ScheduleSpec s;
    s.alpha = a;
    s.beta = b;
    return s;
  }

  static ScheduleSpec uniform_system(int n) {
    ScheduleSpec s;
    s.lambda.assign(static_cast<std::size_t>(n), 1.0 / n);
    s.alpha_vec.assign(static_cast<std::size_t>(n), 0.5 / n);
    s.beta_vec.assign(static_cast<std::size_t>(n), 0.5 / n);
    s.gamma.assign(static_cast<std::size_t>(n) + 1, 1.0 / (n + 1));
    return s;
  }
};

inline json to_json(const ScheduleSpec& s) {
  if (s.is_system())
    return json{{"lambda", s.lambda}, {"alpha", s.alpha_vec}, {"beta", s.beta_vec}, {"gamma", s.gamma}};
  return json{{"alpha", s.alpha}, {"beta", s.beta}};
}

inline ScheduleSpec schedule_from_json(const json& j) {
  ScheduleSpec s;
  if (j.contains("lambda")) {
    s.lambda = detail::field(j, "lambda", "schedule").get<std::vector<double>>();
    s.alpha_vec = detail::field(j, "alpha", "schedule").get<std::vector<double>>();
    s.beta_vec = detail::field(j, "beta", "schedule").get<std::vector<double>>();
    s.gamma = detail::field(j, "gamma", "schedule").get<std::vector<double>>();
  } else {
    s.alpha = detail::field(j, "alpha", "schedule").get<double>();
    s.beta = detail::field(j, "beta", "schedule").get<double>();
  }
  return s;
}

// ---------- Scenario ----------

struct TruncationSpec {
  Point origin;
  double radius{};
  bool expand = false;
};

struct CertificateSpec {
  bool residual = true;
  bool convergence = true;
  bool fejer = true;  // evaluated only when fixed points are declared
  bool delta = false;
  double delta_tol = 1e-4;
};

/// A complete problem description: what the CLI loads, runs and round-trips.
struct Scenario {
  std::string name;
  std::string description;
  SpaceModel space;
  std::vector<ConvexSet> sets;
  std::vector<MultiMap> maps;
  Point x0;
  ScheduleSpec schedule;
  int max_iter = 500;
  double tol_fp = 1e-8;
  double tol_res = 1e-6;
  int sample_size = 256;
  std::uint64_t seed = 0;
  std::vector<Point> fixed_points;
  std::vector<std::string> schemes;  // baseline comparison labels
  std::optional<TruncationSpec> truncation;
  CertificateSpec certificates;

  VipProblem problem() const {
    VipProblem p;
    p.space = space;
    p.sets = sets;
    p.maps = maps;
    p.x0 = x0;
    p.schedule = schedule.build();
    p.max_iter = max_iter;
    p.tol_fp = tol_fp;
    p.tol_res = tol_res;
    p.sample_size = sample_size;
    p.seed = seed;
    p.fixed_points = fixed_points;
    return p;
  }
};

inline json to_json(const Scenario& s) {
  json sets = json::array();
  for (const auto& k : s.sets) sets.push_back(to_json(k));
  json maps = json::array();
  for (const auto& t : s.maps) maps.push_back(to_json(t));
  json fps = json::array();
  for (const auto& p : s.fixed_points) fps.push_back(to_json(p));
  json j{{"name", s.name},
         {"description", s.description},
         {"space", to_json(s.space)},
         {"sets", sets},
         {"multimaps", maps},
         {"x0", to_json(s.x0)},
         {"schedule", to_json(s.schedule)},
         {"max_iter", s.max_iter},
         {"tol_fp", s.tol_fp},
         {"tol_res", s.tol_res},
         {"sample_size", s.sample_size},
         {"seed", s.seed},
         {"fixed_points", fps},
         {"schemes", s.schemes},
         {"certificates",
          {{"residual", s.certificates.residual},
           {"convergence", s.certificates.convergence},
           {"fejer", s.certificates.fejer},
           {"delta", s.certificates.delta},
           {"delta_tol", s.certificates.delta_tol}}}};
  if (s.truncation) {
    j["truncation"] = json{{"origin", to_json(s.truncation->origin)},
                           {"radius", s.truncation->radius},
                           {"expand", s.truncation->expand}};
  }
  return j;
}

inline Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.name = detail::field(j, "name", "scenario").get<std::string>();
  s.description = detail::field_or<std::string>(j, "description", "");
  s.space = space_from_json(detail::field(j, "space", "scenario"));
  for (const auto& k : detail::field(j, "sets", "scenario")) s.sets.push_back(set_from_json(k, s.space));
  for (const auto& t : detail::field(j, "multimaps", "scenario"))
    s.maps.push_back(multimap_from_json(t, s.space));
  if (s.sets.empty() || s.maps.empty())
    throw DomainError("scenario: sets and multimaps must be nonempty");
  if (s.sets.size() != s.maps.size())
    throw DomainError("scenario: sets and multimaps must pair up one-to-one");
  s.x0 = point_from_json(detail::field(j, "x0", "scenario"), s.space);
  s.schedule = schedule_from_json(detail::field(j, "schedule", "scenario"));
  s.max_iter = detail::field_or(j, "max_iter", 500);
  s.tol_fp = detail::field_or(j, "tol_fp", 1e-8);
  s.tol_res = detail::field_or(j, "tol_res", 1e-6);
  s.sample_size = detail::field_or(j, "sample_size", 256);
  s.seed = detail::field(j, "seed", "scenario").get<std::uint64_t>();  // seed is mandatory
  if (j.contains("fixed_points"))
    for (const auto& p : j["fixed_points"]) s.fixed_points.push_back(point_from_json(p, s.space));
  s.schemes = detail::field_or(j, "schemes", std::vector<std::string>{});
  for (const auto& name : s.schemes)
    if (!scheme_from_name(name)) throw DomainError("scenario: unknown scheme '" + name + "'");
  if (!s.schemes.empty() && s.maps.size() > 1)
    throw DomainError("scenario: scheme comparison applies to single-mapping problems only");
  if (j.contains("truncation")) {
    const json& t = j["truncation"];
    TruncationSpec tr;
    tr.origin = point_from_json(detail::field(t, "origin", "truncation"), s.space);
    tr.radius = detail::field(t, "radius", "truncation").get<double>();
    tr.expand = detail::field_or(t, "expand", false);
    s.truncation = tr;
  }
  if (j.contains("certificates")) {
    const json& c = j["certificates"];
    s.certificates.residual = detail::field_or(c, "residual", true);
    s.certificates.convergence = detail::field_or(c, "convergence", true);
    s.certificates.fejer = detail::field_or(c, "fejer", true);
    s.certificates.delta = detail::field_or(c, "delta", false);
    s.certificates.delta_tol = detail::field_or(c, "delta_tol", 1e-4);
  }
  return s;
}

/// Turn a byte offset from a JSON parse error into "line L, column C".
inline std::string line_anchor(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace hadamard
