#pragma once

#include <map>
#include <string>
#include <vector>

#include "hhc/model.hpp"

namespace hhc {

// One allocation verdict. The rule is a pure conjunction: a task goes to the
// robot iff all five criteria pass. `failed_criteria` is empty iff Robot,
// except when a dataset-level forced_assignment overrides the rule (then
// `forced` is set and the rationale reflects the criteria, not the override).
struct Allocation {
  int task_id = 0;
  Resource assignment = Resource::Human;
  std::vector<std::string> failed_criteria;
  bool forced = false;
};

struct AllocationPlan {
  std::vector<Allocation> entries;  // ordered by task id

  Resource assignment_of(int task_id) const {
    for (const auto& e : entries)
      if (e.task_id == task_id) return e.assignment;
    throw RefError("allocation plan has no entry for task " + std::to_string(task_id));
  }

  int robot_count() const {
    int n = 0;
    for (const auto& e : entries) n += e.assignment == Resource::Robot;
    return n;
  }
};

struct AutomationMetrics {
  double task_share = 0.0;
  double time_share = 0.0;
  double automated_time_s = 0.0;  // T_H
  double manual_time_s = 0.0;     // T_M
};

inline Allocation rate_task(const Criteria& c) {
  Allocation a;
  a.failed_criteria = c.failed();
  a.assignment = a.failed_criteria.empty() ? Resource::Robot : Resource::Human;
  return a;
}

inline AllocationPlan allocate_all(const Product& product) {
  AllocationPlan plan;
  for (const auto& t : product.tasks) {
    Allocation a = rate_task(t.criteria);
    a.task_id = t.id;
    if (t.forced_assignment && *t.forced_assignment != a.assignment) {
      a.assignment = *t.forced_assignment;
      a.forced = true;
    }
    plan.entries.push_back(std::move(a));
  }
  std::sort(plan.entries.begin(), plan.entries.end(),
            [](const Allocation& x, const Allocation& y) { return x.task_id < y.task_id; });
  return plan;
}

inline AutomationMetrics automation_metrics(const AllocationPlan& plan, const Product& product) {
  AutomationMetrics m;
  std::map<int, double> durations;
  for (const auto& t : product.tasks) durations[t.id] = t.duration_s;
  for (const auto& e : plan.entries) {
    auto it = durations.find(e.task_id);
    if (it == durations.end())
      throw RefError("allocation entry for unknown task " + std::to_string(e.task_id));
    if (e.assignment == Resource::Robot)
      m.automated_time_s += it->second;
    else
      m.manual_time_s += it->second;
  }
  double total = m.automated_time_s + m.manual_time_s;
  m.time_share = total > 0.0 ? m.automated_time_s / total : 0.0;
  m.task_share = plan.entries.empty()
                     ? 0.0
                     : static_cast<double>(plan.robot_count()) / plan.entries.size();
  return m;
}

}  // namespace hhc
