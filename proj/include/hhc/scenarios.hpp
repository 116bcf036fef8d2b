#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hhc/allocate.hpp"
#include "hhc/balance.hpp"
#include "hhc/model.hpp"
#include "hhc/rng.hpp"
#include "hhc/simulate.hpp"

namespace hhc {

struct VariantRule {
  double duration_lo = 0.9;   // multiplicative range, lo <= 1 <= hi
  double duration_hi = 1.1;
  double criteria_flip_probability = 0.05;
  std::uint64_t seed = 0;
};

inline void validate(const VariantRule& rule) {
  if (!(rule.duration_lo > 0.0 && rule.duration_lo <= 1.0 && rule.duration_hi >= 1.0))
    throw ConfigError("variant rule requires 0 < lo <= 1 <= hi");
  if (rule.criteria_flip_probability < 0.0 || rule.criteria_flip_probability > 0.5)
    throw ConfigError("criteria_flip_probability must be in [0, 0.5]");
}

// n perturbed copies of the base dataset, named <base>-v001... Durations are
// scaled by an independent uniform draw and rounded to whole seconds (min 1);
// criteria flip independently; precedence is untouched.
inline std::vector<Dataset> generate_variants(const Dataset& base, int n,
                                              const VariantRule& rule) {
  validate(rule);
  std::vector<Dataset> out;
  for (int v = 0; v < n; ++v) {
    RandomStream rng = RandomStream::derive(rule.seed, static_cast<std::uint64_t>(v), 0, 0);
    Dataset ds = base;
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "-v%03d", v + 1);
    ds.product.name = base.product.name + suffix;
    for (auto& t : ds.product.tasks) {
      double factor = rng.uniform(rule.duration_lo, rule.duration_hi);
      t.duration_s = std::max(1.0, std::round(t.duration_s * factor));
      auto flip = [&](bool& b) {
        if (rng.uniform01() < rule.criteria_flip_probability) b = !b;
      };
      flip(t.criteria.part);
      flip(t.criteria.feeding);
      flip(t.criteria.joining);
      flip(t.criteria.mounting);
      flip(t.criteria.safety);
    }
    out.push_back(std::move(ds));
  }
  return out;
}

struct ScenarioRow {
  std::string variant;
  double robot_task_share = 0.0;
  double time_share = 0.0;
  int stations = 0;
  bool feasible = false;
  std::optional<double> throughput;       // mean units per shift
  std::optional<bool> takt_compliance;    // throughput >= demand
};

// allocate -> takt -> balance -> simulate per variant; infeasible balances
// become feasible=false rows instead of aborting the batch. Variants are
// independent; `jobs` caps the fan-out, output order stays by variant.
inline std::vector<ScenarioRow> batch_run(const std::vector<Dataset>& variants,
                                          const ShiftConfig& shift, const SimConfig& sim_cfg,
                                          int jobs = 1) {
  std::vector<ScenarioRow> rows(variants.size());
  auto run_one = [&](size_t v) {
    const Dataset& ds = variants[v];
    ScenarioRow row;
    row.variant = ds.product.name;
    AllocationPlan plan = allocate_all(ds.product);
    AutomationMetrics m = automation_metrics(plan, ds.product);
    row.robot_task_share = m.task_share;
    row.time_share = m.time_share;
    double takt_s = takt(shift);
    try {
      LinePlan line = balance_line(ds.product, plan, takt_s);
      row.stations = static_cast<int>(line.stations.size());
      row.feasible = true;
      SimConfig cfg = sim_cfg;
      cfg.shift = shift;
      Aggregate agg = run_replications(line, cfg);
      row.throughput = agg.completed_units.mean;
      row.takt_compliance = agg.completed_units.mean >= shift.demand_units;
    } catch (const InfeasibleError&) {
      row.feasible = false;
    }
    rows[v] = std::move(row);
  };

  if (jobs <= 1 || variants.size() <= 1) {
    for (size_t v = 0; v < variants.size(); ++v) run_one(v);
    return rows;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t v = next.fetch_add(1); v < variants.size(); v = next.fetch_add(1)) run_one(v);
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

struct CostConfig {
  double labor_rate_per_h = 0.0;
  double robot_capex = 0.0;
  double robot_operating_per_h = 0.0;
  double material_handling_saved_s_per_shift = 3600.0;
  int shifts_per_year = 0;
};

inline void validate(const CostConfig& c) {
  if (c.labor_rate_per_h < 0 || c.robot_capex < 0 || c.robot_operating_per_h < 0 ||
      c.material_handling_saved_s_per_shift < 0 || c.shifts_per_year < 0)
    throw ConfigError("cost config fields must be >= 0");
}

struct EconomicsResult {
  double labor_s_saved_per_shift = 0.0;
  double annual_saving = 0.0;
  std::optional<double> payback_years;  // empty when annual_saving <= 0
};

// Transparent linear model: labor seconds displaced by the robot per shift,
// priced at the labor rate, net of robot operating cost.
inline EconomicsResult economics(const SimResult& result, const AllocationPlan& plan,
                                 const Product& product, const ShiftConfig& shift,
                                 const CostConfig& cost) {
  validate(cost);
  double robot_s_per_unit = 0.0;
  for (const auto& t : product.tasks)
    if (plan.assignment_of(t.id) == Resource::Robot) robot_s_per_unit += t.duration_s;

  EconomicsResult e;
  e.labor_s_saved_per_shift = robot_s_per_unit * static_cast<double>(result.completed_units) +
                              cost.material_handling_saved_s_per_shift;
  double shift_h = shift.duration_s / 3600.0;
  e.annual_saving = e.labor_s_saved_per_shift / 3600.0 * cost.labor_rate_per_h *
                        cost.shifts_per_year -
                    cost.robot_operating_per_h * shift_h * cost.shifts_per_year;
  if (e.annual_saving > 0.0) e.payback_years = cost.robot_capex / e.annual_saving;
  return e;
}

}  // namespace hhc
