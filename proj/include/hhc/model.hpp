#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhc/errors.hpp"

namespace hhc {

inline constexpr int kFormatVersion = 1;

// Five binary automation criteria. pass == the robot can handle this aspect.
struct Criteria {
  bool part = false;
  bool feeding = false;
  bool joining = false;
  bool mounting = false;
  bool safety = false;

  bool all_pass() const { return part && feeding && joining && mounting && safety; }

  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    if (!part) out.push_back("part");
    if (!feeding) out.push_back("feeding");
    if (!joining) out.push_back("joining");
    if (!mounting) out.push_back("mounting");
    if (!safety) out.push_back("safety");
    return out;
  }

  bool operator==(const Criteria&) const = default;
};

enum class Category { Assembly, MaterialHandling, PickPlace, ScrewDriving, QualityTest };

inline std::string to_string(Category c) {
  switch (c) {
    case Category::Assembly: return "assembly";
    case Category::MaterialHandling: return "material_handling";
    case Category::PickPlace: return "pick_place";
    case Category::ScrewDriving: return "screw_driving";
    case Category::QualityTest: return "quality_test";
  }
  return "assembly";
}

inline Category category_from_string(const std::string& s) {
  if (s == "assembly") return Category::Assembly;
  if (s == "material_handling") return Category::MaterialHandling;
  if (s == "pick_place") return Category::PickPlace;
  if (s == "screw_driving") return Category::ScrewDriving;
  if (s == "quality_test") return Category::QualityTest;
  throw SchemaError("unknown task category '" + s + "'");
}

enum class Resource { Robot, Human };

inline std::string to_string(Resource r) { return r == Resource::Robot ? "Robot" : "Human"; }

struct Task {
  int id = 0;
  std::string name;
  double duration_s = 0.0;
  std::set<int> predecessors;
  Criteria criteria;
  Category category = Category::Assembly;
  std::optional<Resource> forced_assignment;

  bool operator==(const Task&) const = default;
};

struct Product {
  std::string name;
  std::vector<Task> tasks;

  double total_duration_s() const {
    double t = 0.0;
    for (const auto& task : tasks) t += task.duration_s;
    return t;
  }

  const Task& task_by_id(int id) const {
    for (const auto& t : tasks)
      if (t.id == id) return t;
    throw RefError("no task with id " + std::to_string(id));
  }

  bool operator==(const Product&) const = default;
};

enum class ResourceKind { Human, Humanoid };

struct ResourceSpec {
  ResourceKind kind = ResourceKind::Human;
  double payload_kg = 0.0;
  double reach_mm = 0.0;
  double max_speed_mm_s = 0.0;
  std::optional<double> charge_interval_s;  // Humanoid only
  std::optional<double> charge_duration_s;  // Humanoid only

  bool operator==(const ResourceSpec&) const = default;
};

struct ShiftConfig {
  double duration_s = 0.0;   // T_D
  int demand_units = 0;      // N

  bool operator==(const ShiftConfig&) const = default;
};

struct Dataset {
  Product product;
  std::vector<ResourceSpec> resources;
  ShiftConfig shift;

  bool operator==(const Dataset&) const = default;
};

// ---------------------------------------------------------------------------
// Precedence graph services

// Deterministic topological order, Kahn frontier with smallest id first.
// Throws CycleError carrying one closed cycle walk.
inline std::vector<int> check_precedence(const Product& product) {
  std::map<int, int> indegree;
  std::map<int, std::vector<int>> successors;
  for (const auto& t : product.tasks) indegree[t.id] = 0;
  for (const auto& t : product.tasks) {
    for (int p : t.predecessors) {
      successors[p].push_back(t.id);
      indegree[t.id]++;
    }
  }
  for (auto& [id, succ] : successors) std::sort(succ.begin(), succ.end());

  std::priority_queue<int, std::vector<int>, std::greater<>> frontier;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) frontier.push(id);

  std::vector<int> order;
  while (!frontier.empty()) {
    int id = frontier.top();
    frontier.pop();
    order.push_back(id);
    for (int s : successors[id])
      if (--indegree[s] == 0) frontier.push(s);
  }

  if (order.size() == product.tasks.size()) return order;

  // Cycle extraction: every unresolved node keeps at least one unresolved
  // predecessor, so walk predecessor edges until a node repeats, then flip
  // the walk into forward edge direction.
  std::set<int> remaining;
  for (const auto& [id, deg] : indegree)
    if (deg > 0) remaining.insert(id);
  std::map<int, int> pred_in_residue;
  for (const auto& t : product.tasks) {
    if (!remaining.count(t.id)) continue;
    for (int p : t.predecessors) {
      if (remaining.count(p)) {
        auto it = pred_in_residue.find(t.id);
        if (it == pred_in_residue.end() || p < it->second) pred_in_residue[t.id] = p;
      }
    }
  }
  std::vector<int> path;
  std::map<int, size_t> seen;
  int cur = *remaining.begin();
  while (!seen.count(cur)) {
    seen[cur] = path.size();
    path.push_back(cur);
    cur = pred_in_residue.at(cur);
  }
  std::vector<int> cycle(path.begin() + static_cast<long>(seen[cur]), path.end());
  std::reverse(cycle.begin(), cycle.end());
  auto lo = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), lo, cycle.end());
  cycle.push_back(cycle.front());
  std::string msg = "precedence cycle:";
  for (int id : cycle) msg += " " + std::to_string(id);
  throw CycleError(msg, cycle);
}

// ---------------------------------------------------------------------------
// Dataset parsing / serialization (schema documented in docs/format.md)

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key,
                                     const char* ctx) {
  if (!j.contains(key))
    throw SchemaError(std::string(ctx) + ": missing field '" + key + "'");
  return j.at(key);
}

inline double require_number(const nlohmann::json& j, const char* key, const char* ctx) {
  const auto& v = require(j, key, ctx);
  if (!v.is_number())
    throw SchemaError(std::string(ctx) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline std::string require_string(const nlohmann::json& j, const char* key, const char* ctx) {
  const auto& v = require(j, key, ctx);
  if (!v.is_string())
    throw SchemaError(std::string(ctx) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline bool require_bool(const nlohmann::json& j, const char* key, const char* ctx) {
  const auto& v = require(j, key, ctx);
  if (!v.is_boolean())
    throw SchemaError(std::string(ctx) + ": field '" + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace detail

inline Dataset parse_dataset(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("dataset is not valid JSON: ") + e.what());
  }

  if (static_cast<int>(detail::require_number(j, "format", "dataset")) != kFormatVersion)
    throw SchemaError("unsupported dataset format version");

  Dataset ds;

  const auto& jp = detail::require(j, "product", "dataset");
  ds.product.name = detail::require_string(jp, "name", "product");
  const auto& jtasks = detail::require(jp, "tasks", "product");
  if (!jtasks.is_array()) throw SchemaError("product: 'tasks' must be an array");
  if (jtasks.empty()) throw ValueError("product has zero tasks");

  std::set<int> ids;
  for (const auto& jt : jtasks) {
    Task t;
    double idn = detail::require_number(jt, "id", "task");
    t.id = static_cast<int>(idn);
    if (t.id <= 0 || idn != t.id) throw ValueError("task id must be a positive integer");
    if (!ids.insert(t.id).second)
      throw SchemaError("duplicate task id " + std::to_string(t.id));
    t.name = detail::require_string(jt, "name", "task");
    t.duration_s = detail::require_number(jt, "duration_s", "task");
    if (t.duration_s <= 0.0)
      throw ValueError("task " + std::to_string(t.id) + " has non-positive duration");
    const auto& jpred = detail::require(jt, "predecessors", "task");
    if (!jpred.is_array()) throw SchemaError("task: 'predecessors' must be an array");
    for (const auto& p : jpred) {
      if (!p.is_number_integer()) throw SchemaError("predecessor ids must be integers");
      t.predecessors.insert(p.get<int>());
    }
    const auto& jc = detail::require(jt, "criteria", "task");
    t.criteria.part = detail::require_bool(jc, "part", "criteria");
    t.criteria.feeding = detail::require_bool(jc, "feeding", "criteria");
    t.criteria.joining = detail::require_bool(jc, "joining", "criteria");
    t.criteria.mounting = detail::require_bool(jc, "mounting", "criteria");
    t.criteria.safety = detail::require_bool(jc, "safety", "criteria");
    t.category = category_from_string(detail::require_string(jt, "category", "task"));
    if (jt.contains("forced_assignment")) {
      std::string f = jt.at("forced_assignment").get<std::string>();
      if (f == "Robot") t.forced_assignment = Resource::Robot;
      else if (f == "Human") t.forced_assignment = Resource::Human;
      else throw SchemaError("forced_assignment must be 'Robot' or 'Human'");
    }
    ds.product.tasks.push_back(std::move(t));
  }

  for (const auto& t : ds.product.tasks)
    for (int p : t.predecessors)
      if (!ids.count(p))
        throw RefError("task " + std::to_string(t.id) + " references unknown predecessor " +
                       std::to_string(p));

  const auto& jres = detail::require(j, "resources", "dataset");
  if (!jres.is_array()) throw SchemaError("'resources' must be an array");
  for (const auto& jr : jres) {
    ResourceSpec r;
    std::string kind = detail::require_string(jr, "kind", "resource");
    if (kind == "Human") r.kind = ResourceKind::Human;
    else if (kind == "Humanoid") r.kind = ResourceKind::Humanoid;
    else throw SchemaError("resource kind must be 'Human' or 'Humanoid'");
    r.payload_kg = detail::require_number(jr, "payload_kg", "resource");
    r.reach_mm = detail::require_number(jr, "reach_mm", "resource");
    r.max_speed_mm_s = detail::require_number(jr, "max_speed_mm_s", "resource");
    if (r.payload_kg <= 0.0) throw ValueError("resource payload_kg must be > 0");
    if (r.reach_mm <= 0.0) throw ValueError("resource reach_mm must be > 0");
    bool has_charge = jr.contains("charge_interval_s") || jr.contains("charge_duration_s");
    if (r.kind == ResourceKind::Human && has_charge)
      throw SchemaError("Human resource must not carry charge fields");
    if (jr.contains("charge_interval_s"))
      r.charge_interval_s = jr.at("charge_interval_s").get<double>();
    if (jr.contains("charge_duration_s"))
      r.charge_duration_s = jr.at("charge_duration_s").get<double>();
    ds.resources.push_back(r);
  }

  const auto& js = detail::require(j, "shift", "dataset");
  ds.shift.duration_s = detail::require_number(js, "duration_s", "shift");
  ds.shift.demand_units = static_cast<int>(detail::require_number(js, "demand_units", "shift"));
  if (ds.shift.duration_s <= 0.0) throw ValueError("shift duration_s must be > 0");
  if (ds.shift.demand_units < 1) throw ValueError("shift demand_units must be >= 1");

  check_precedence(ds.product);
  return ds;
}

inline nlohmann::ordered_json dataset_to_json(const Dataset& ds) {
  nlohmann::ordered_json j;
  j["format"] = kFormatVersion;
  j["product"]["name"] = ds.product.name;
  auto& jtasks = j["product"]["tasks"];
  jtasks = nlohmann::ordered_json::array();
  for (const auto& t : ds.product.tasks) {
    nlohmann::ordered_json jt;
    jt["id"] = t.id;
    jt["name"] = t.name;
    jt["duration_s"] = t.duration_s;
    jt["predecessors"] = t.predecessors;
    jt["criteria"] = {{"part", t.criteria.part},
                      {"feeding", t.criteria.feeding},
                      {"joining", t.criteria.joining},
                      {"mounting", t.criteria.mounting},
                      {"safety", t.criteria.safety}};
    jt["category"] = to_string(t.category);
    if (t.forced_assignment) jt["forced_assignment"] = to_string(*t.forced_assignment);
    jtasks.push_back(std::move(jt));
  }
  j["resources"] = nlohmann::ordered_json::array();
  for (const auto& r : ds.resources) {
    nlohmann::ordered_json jr;
    jr["kind"] = r.kind == ResourceKind::Human ? "Human" : "Humanoid";
    jr["payload_kg"] = r.payload_kg;
    jr["reach_mm"] = r.reach_mm;
    jr["max_speed_mm_s"] = r.max_speed_mm_s;
    if (r.charge_interval_s) jr["charge_interval_s"] = *r.charge_interval_s;
    if (r.charge_duration_s) jr["charge_duration_s"] = *r.charge_duration_s;
    j["resources"].push_back(std::move(jr));
  }
  j["shift"]["duration_s"] = ds.shift.duration_s;
  j["shift"]["demand_units"] = ds.shift.demand_units;
  return j;
}

inline std::string serialize_dataset(const Dataset& ds) {
  return dataset_to_json(ds).dump(2) + "\n";
}

}  // namespace hhc
