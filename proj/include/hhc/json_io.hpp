#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hhc/allocate.hpp"
#include "hhc/balance.hpp"
#include "hhc/safety.hpp"
#include "hhc/scenarios.hpp"
#include "hhc/simulate.hpp"

namespace hhc {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const Allocation& a) {
  ojson j;
  j["task_id"] = a.task_id;
  j["assignment"] = to_string(a.assignment);
  j["failed_criteria"] = a.failed_criteria;
  if (a.forced) j["forced"] = true;
  return j;
}

inline ojson to_json(const AllocationPlan& plan) {
  ojson arr = ojson::array();
  for (const auto& e : plan.entries) arr.push_back(to_json(e));
  return arr;
}

inline ojson to_json(const AutomationMetrics& m) {
  return {{"task_share", m.task_share},
          {"time_share", m.time_share},
          {"automated_time_s", m.automated_time_s},
          {"manual_time_s", m.manual_time_s}};
}

inline ojson to_json(const LinePlan& line) {
  ojson j;
  j["takt_s"] = line.takt_s;
  j["total_time_s"] = line.total_time_s;
  j["idle_total_s"] = line.idle_total_s;
  j["stations"] = ojson::array();
  for (const auto& st : line.stations) {
    j["stations"].push_back({{"station", st.index},
                             {"resource", to_string(st.resource)},
                             {"tasks", st.task_ids},
                             {"load_s", st.load_s},
                             {"idle_s", st.idle_s}});
  }
  return j;
}

inline ojson to_json(const SafetyChecklist& c) {
  ojson j;
  j["imr_classification"] = c.imr_classification;
  j["stations"] = ojson::array();
  for (const auto& s : c.stations)
    j["stations"].push_back(
        {{"station", s.station_index}, {"required_features", s.required_features}});
  return j;
}

inline ojson to_json(const SimResult& r) {
  return {{"completed_units", r.completed_units},
          {"throughput_per_shift", r.throughput_per_shift},
          {"station_utilization", r.station_utilization},
          {"bottleneck_utilization", r.bottleneck_utilization},
          {"avg_wip", r.avg_wip},
          {"avg_lead_time_s", r.avg_lead_time_s},
          {"downtime_s", r.downtime_s},
          {"busy_s", r.busy_s},
          {"units_entered", r.units_entered},
          {"wip_at_end", r.wip_at_end},
          {"event_count", r.event_count},
          {"trace_hash", r.trace_hash}};
}

inline ojson to_json(const Stats& s) {
  ojson j;
  j["mean"] = s.mean;
  j["stddev"] = std::isnan(s.stddev) ? ojson(nullptr) : ojson(s.stddev);
  j["ci95_half"] = std::isnan(s.ci95_half) ? ojson(nullptr) : ojson(s.ci95_half);
  return j;
}

inline ojson to_json(const Aggregate& a) {
  ojson j;
  j["replications"] = a.replications;
  j["completed_units"] = to_json(a.completed_units);
  j["throughput_per_shift"] = to_json(a.throughput_per_shift);
  j["avg_wip"] = to_json(a.avg_wip);
  j["avg_lead_time_s"] = to_json(a.avg_lead_time_s);
  j["bottleneck_utilization"] = to_json(a.bottleneck_utilization);
  j["event_count"] = to_json(a.event_count);
  j["station_utilization"] = ojson::array();
  for (const auto& s : a.station_utilization) j["station_utilization"].push_back(to_json(s));
  j["downtime_s"] = ojson::array();
  for (const auto& s : a.downtime_s) j["downtime_s"].push_back(to_json(s));
  return j;
}

inline ojson to_json(const EconomicsResult& e) {
  ojson j;
  j["labor_s_saved_per_shift"] = e.labor_s_saved_per_shift;
  j["annual_saving"] = e.annual_saving;
  j["payback_years"] = e.payback_years ? ojson(*e.payback_years) : ojson(nullptr);
  return j;
}

inline ojson to_json(const ScenarioRow& r) {
  ojson j;
  j["variant"] = r.variant;
  j["robot_task_share"] = r.robot_task_share;
  j["time_share"] = r.time_share;
  j["stations"] = r.stations;
  j["feasible"] = r.feasible;
  j["throughput"] = r.throughput ? ojson(*r.throughput) : ojson(nullptr);
  j["takt_compliance"] = r.takt_compliance ? ojson(*r.takt_compliance) : ojson(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// CSV emitters (headers fixed by the CLI contract)

inline std::string allocation_csv(const AllocationPlan& plan) {
  std::ostringstream out;
  out << "task_id,assignment,failed_criteria\n";
  for (const auto& e : plan.entries) {
    out << e.task_id << ',' << to_string(e.assignment) << ',';
    for (size_t i = 0; i < e.failed_criteria.size(); ++i) {
      if (i) out << ';';
      out << e.failed_criteria[i];
    }
    out << '\n';
  }
  return out.str();
}

inline std::string line_plan_csv(const LinePlan& line) {
  std::ostringstream out;
  out << "station,resource,tasks,load_s,idle_s\n";
  for (const auto& st : line.stations) {
    out << st.index << ',' << to_string(st.resource) << ',';
    for (size_t i = 0; i < st.task_ids.size(); ++i) {
      if (i) out << ';';
      out << st.task_ids[i];
    }
    out << ',' << st.load_s << ',' << st.idle_s << '\n';
  }
  return out.str();
}

inline std::string scenario_csv(const std::vector<ScenarioRow>& rows) {
  std::ostringstream out;
  out << "variant,robot_task_share,time_share,stations,feasible,throughput,takt_compliance\n";
  for (const auto& r : rows) {
    out << r.variant << ',' << r.robot_task_share << ',' << r.time_share << ','
        << r.stations << ',' << (r.feasible ? "true" : "false") << ',';
    if (r.throughput) out << *r.throughput;
    out << ',';
    if (r.takt_compliance) out << (*r.takt_compliance ? "true" : "false");
    out << '\n';
  }
  return out.str();
}

inline std::string trace_csv(std::vector<TraceRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TraceRow& a, const TraceRow& b) { return a.t_s < b.t_s; });
  std::ostringstream out;
  out << "t_s,station,event,unit_id\n";
  for (const auto& r : rows)
    out << r.t_s << ',' << r.station << ',' << r.event << ',' << r.unit_id << '\n';
  return out.str();
}

}  // namespace hhc
