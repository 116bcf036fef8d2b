#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hhc/allocate.hpp"
#include "hhc/model.hpp"

namespace hhc {

struct Station {
  int index = 0;  // 1-based
  Resource resource = Resource::Human;
  std::vector<int> task_ids;        // in assignment order
  std::vector<double> task_durations;  // parallel to task_ids
  double load_s = 0.0;
  double idle_s = 0.0;
};

struct LinePlan {
  double takt_s = 0.0;
  std::vector<Station> stations;
  double total_time_s = 0.0;
  double idle_total_s = 0.0;
};

// T_K = floor(T_D / N), integer seconds.
inline double takt(const ShiftConfig& shift) {
  if (shift.demand_units <= 0) throw ValueError("takt: demand_units must be >= 1");
  return std::floor(shift.duration_s / shift.demand_units);
}

inline int min_stations(double total_time_s, double takt_s) {
  if (takt_s <= 0.0) throw ValueError("min_stations: takt must be > 0");
  return static_cast<int>(std::ceil(total_time_s / takt_s));
}

inline int min_stations(const Product& product, double takt_s) {
  for (const auto& t : product.tasks)
    if (t.duration_s > takt_s)
      throw InfeasibleError("task " + std::to_string(t.id) + " exceeds takt", t.id);
  return min_stations(product.total_duration_s(), takt_s);
}

namespace detail {

// Positional weight per task: own duration plus the durations of all
// transitive successors (each counted once).
inline std::map<int, double> positional_weights(const Product& product) {
  std::vector<int> order = check_precedence(product);
  std::map<int, size_t> pos;
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  size_t n = order.size();

  // descendants[i] over topo positions, filled back to front
  std::vector<std::vector<bool>> desc(n, std::vector<bool>(n, false));
  std::map<int, std::vector<int>> successors;
  for (const auto& t : product.tasks)
    for (int p : t.predecessors) successors[p].push_back(t.id);

  for (size_t i = n; i-- > 0;) {
    int id = order[i];
    for (int s : successors[id]) {
      size_t sp = pos[s];
      desc[i][sp] = true;
      for (size_t k = 0; k < n; ++k)
        if (desc[sp][k]) desc[i][k] = true;
    }
  }

  std::map<int, double> dur;
  for (const auto& t : product.tasks) dur[t.id] = t.duration_s;
  std::map<int, double> weight;
  for (size_t i = 0; i < n; ++i) {
    double w = dur[order[i]];
    for (size_t k = 0; k < n; ++k)
      if (desc[i][k]) w += dur[order[k]];
    weight[order[i]] = w;
  }
  return weight;
}

}  // namespace detail

// Greedy ranked-positional-weight balancing. Stations are resource-pure; the
// first task assigned fixes the station's resource. Deterministic: highest
// weight first, ties by smaller id.
inline LinePlan balance_line(const Product& product, const AllocationPlan& plan,
                             double takt_s) {
  for (const auto& t : product.tasks)
    if (t.duration_s > takt_s)
      throw InfeasibleError("task " + std::to_string(t.id) + " exceeds takt " +
                                std::to_string(takt_s),
                            t.id);

  auto weight = detail::positional_weights(product);  // throws CycleError on cycles
  std::map<int, const Task*> task_of;
  for (const auto& t : product.tasks) task_of[t.id] = &t;
  std::map<int, Resource> res_of;
  for (const auto& e : plan.entries) res_of[e.task_id] = e.assignment;
  for (const auto& t : product.tasks)
    if (!res_of.count(t.id))
      throw RefError("allocation plan missing task " + std::to_string(t.id));

  std::set<int> assigned;
  std::set<int> unassigned;
  for (const auto& t : product.tasks) unassigned.insert(t.id);

  LinePlan out;
  out.takt_s = takt_s;
  Station cur;
  cur.index = 1;
  std::optional<Resource> cur_res;

  auto flush = [&] {
    cur.idle_s = takt_s - cur.load_s;
    out.stations.push_back(cur);
    cur = Station{};
    cur.index = static_cast<int>(out.stations.size()) + 1;
    cur_res.reset();
  };

  while (!unassigned.empty()) {
    int pick = -1;
    double pick_w = -1.0;
    for (int id : unassigned) {
      const Task& t = *task_of[id];
      bool ready = std::all_of(t.predecessors.begin(), t.predecessors.end(),
                               [&](int p) { return assigned.count(p) > 0; });
      if (!ready) continue;
      if (t.duration_s > takt_s - cur.load_s) continue;
      if (cur_res && *cur_res != res_of[id]) continue;
      double w = weight[id];
      if (w > pick_w || (w == pick_w && (pick < 0 || id < pick))) {
        pick = id;
        pick_w = w;
      }
    }
    if (pick < 0) {
      flush();
      continue;
    }
    if (!cur_res) {
      cur_res = res_of[pick];
      cur.resource = *cur_res;
    }
    cur.task_ids.push_back(pick);
    cur.task_durations.push_back(task_of[pick]->duration_s);
    cur.load_s += task_of[pick]->duration_s;
    assigned.insert(pick);
    unassigned.erase(pick);
  }
  if (!cur.task_ids.empty()) flush();

  out.total_time_s = product.total_duration_s();
  out.idle_total_s = static_cast<double>(out.stations.size()) * takt_s - out.total_time_s;
  return out;
}

// Structural re-check of a LinePlan against the raw inputs. Kept independent
// of balance_line's bookkeeping; used by tests and `--verify`.
inline void verify_line_plan(const LinePlan& line, const Product& product,
                             const AllocationPlan& plan) {
  std::map<int, int> station_of;
  for (const auto& st : line.stations) {
    double load = 0.0;
    for (int id : st.task_ids) {
      if (station_of.count(id))
        throw InvariantError("task " + std::to_string(id) + " assigned twice");
      station_of[id] = st.index;
      if (plan.assignment_of(id) != st.resource)
        throw InvariantError("station " + std::to_string(st.index) + " is not resource-pure");
      load += product.task_by_id(id).duration_s;
    }
    if (std::abs(load - st.load_s) > 1e-9)
      throw InvariantError("station " + std::to_string(st.index) + " load mismatch");
    if (load > line.takt_s + 1e-9)
      throw InvariantError("station " + std::to_string(st.index) + " exceeds takt");
  }
  for (const auto& t : product.tasks) {
    if (!station_of.count(t.id))
      throw InvariantError("task " + std::to_string(t.id) + " not assigned");
    for (int p : t.predecessors)
      if (station_of.at(p) > station_of.at(t.id))
        throw InvariantError("task " + std::to_string(t.id) +
                             " scheduled before predecessor " + std::to_string(p));
  }
}

// Exact minimum station count by depth-first branch and bound over maximal
// station loads. Exponential; guarded by the task-count budget.
inline int oracle_min_stations(const Product& product, const AllocationPlan& plan,
                               double takt_s, int budget = 14) {
  int n = static_cast<int>(product.tasks.size());
  if (n > budget)
    throw BudgetError("oracle limited to " + std::to_string(budget) + " tasks, got " +
                      std::to_string(n));
  for (const auto& t : product.tasks)
    if (t.duration_s > takt_s)
      throw InfeasibleError("task " + std::to_string(t.id) + " exceeds takt", t.id);

  std::vector<double> dur(n);
  std::vector<Resource> res(n);
  std::vector<std::uint32_t> preds(n, 0);
  std::map<int, int> idx;
  for (int i = 0; i < n; ++i) idx[product.tasks[i].id] = i;
  for (int i = 0; i < n; ++i) {
    const Task& t = product.tasks[i];
    dur[i] = t.duration_s;
    res[i] = plan.assignment_of(t.id);
    for (int p : t.predecessors) preds[i] |= 1u << idx.at(p);
  }

  int best = static_cast<int>(balance_line(product, plan, takt_s).stations.size());
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;

  auto lower_bound = [&](std::uint32_t assigned, int open_res, double open_rem) {
    double rob = 0.0, hum = 0.0;
    for (int i = 0; i < n; ++i)
      if (!(assigned & (1u << i))) (res[i] == Resource::Robot ? rob : hum) += dur[i];
    if (open_res == 0) rob = std::max(0.0, rob - open_rem);
    if (open_res == 1) hum = std::max(0.0, hum - open_rem);
    return static_cast<int>(std::ceil(rob / takt_s)) +
           static_cast<int>(std::ceil(hum / takt_s));
  };

  // open_res: -1 empty station, 0 Robot, 1 Human
  auto rec = [&](auto&& self, std::uint32_t assigned, int stations, int open_res,
                 double open_rem) -> void {
    if (assigned == full) {
      best = std::min(best, stations);
      return;
    }
    if (stations + lower_bound(assigned, open_res, open_rem) >= best) return;

    bool any_fit = false;
    for (int i = 0; i < n; ++i) {
      if (assigned & (1u << i)) continue;
      if ((preds[i] & assigned) != preds[i]) continue;
      int r = res[i] == Resource::Robot ? 0 : 1;
      if (open_res != -1 && r != open_res) continue;
      if (dur[i] > open_rem + 1e-9) continue;
      any_fit = true;
      self(self, assigned | (1u << i), stations, r, open_rem - dur[i]);
    }
    if (!any_fit) {
      // close the current station, open a fresh one
      self(self, assigned, stations + 1, -1, takt_s);
    }
  };

  rec(rec, 0u, 0, -1, 0.0);  // forces the first station to be opened
  return best;
}

}  // namespace hhc
