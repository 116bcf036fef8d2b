// hhc: planning and simulation toolkit for human-humanoid assembly cells.
//
// Subcommands mirror the pipeline: validate -> allocate -> balance ->
// simulate -> report, plus scenario batches and a safety speed calculator.
// Human-readable summaries go to stdout; machine artifacts only via --out.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hhc/allocate.hpp"
#include "hhc/balance.hpp"
#include "hhc/errors.hpp"
#include "hhc/json_io.hpp"
#include "hhc/manifest.hpp"
#include "hhc/model.hpp"
#include "hhc/safety.hpp"
#include "hhc/scenarios.hpp"
#include "hhc/simulate.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hhc::SchemaError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hhc::Error("cannot write output file: " + path);
  out << bytes;
}

struct SimFlags {
  std::uint64_t seed = 0;
  int reps = 1;
  double shift_s = 0.0;  // 0 = use dataset value
  int buffer = 1;
  std::string model = "det";
  double cv = 0.05;
  double tri_lo = 0.9, tri_hi = 1.1;
  double mttf = 0.0, mttr = 0.0;  // 0 = disabled
  double changeover = 0.0;
  double charge_interval = 0.0, charge_duration = 0.0;  // 0 = disabled

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master random seed");
    cmd->add_option("--reps", reps, "number of replications");
    cmd->add_option("--shift-s", shift_s, "override shift duration in seconds");
    cmd->add_option("--buffer", buffer, "inter-station buffer capacity");
    cmd->add_option("--model", model, "task time model: det|normal|tri");
    cmd->add_option("--cv", cv, "coefficient of variation (normal model)");
    cmd->add_option("--tri-lo", tri_lo, "triangular min factor");
    cmd->add_option("--tri-hi", tri_hi, "triangular max factor");
    cmd->add_option("--mttf", mttf, "mean time to failure, robot stations (s)");
    cmd->add_option("--mttr", mttr, "mean time to repair (s)");
    cmd->add_option("--changeover", changeover, "line changeover before first unit (s)");
    cmd->add_option("--charge-interval", charge_interval, "busy seconds between charges");
    cmd->add_option("--charge-duration", charge_duration, "charge duration (s)");
  }

  hhc::SimConfig build(const hhc::ShiftConfig& shift) const {
    hhc::SimConfig cfg;
    cfg.seed = seed;
    cfg.replications = reps;
    if (model == "det") cfg.time_model = hhc::TimeModel::Deterministic;
    else if (model == "normal") cfg.time_model = hhc::TimeModel::NormalTruncated;
    else if (model == "tri") cfg.time_model = hhc::TimeModel::Triangular;
    else throw hhc::ConfigError("--model must be det, normal or tri");
    cfg.cv = cv;
    cfg.tri_min_factor = tri_lo;
    cfg.tri_max_factor = tri_hi;
    cfg.buffer_capacity = buffer;
    if (mttf > 0.0) cfg.failures = hhc::FailureConfig{mttf, mttr};
    cfg.changeover_s = changeover;
    if (charge_interval > 0.0)
      cfg.charging = hhc::ChargingConfig{charge_interval, charge_duration};
    cfg.shift = shift;
    if (shift_s > 0.0) cfg.shift.duration_s = shift_s;
    return cfg;
  }
};

hhc::CostConfig load_cost(const std::string& path) {
  hhc::CostConfig c;
  if (path.empty()) return c;
  auto j = nlohmann::json::parse(read_file(path));
  c.labor_rate_per_h = j.value("labor_rate_per_h", 0.0);
  c.robot_capex = j.value("robot_capex", 0.0);
  c.robot_operating_per_h = j.value("robot_operating_per_h", 0.0);
  c.material_handling_saved_s_per_shift = j.value("material_handling_saved_s_per_shift", 3600.0);
  c.shifts_per_year = j.value("shifts_per_year", 0);
  return c;
}

int run(int argc, char** argv) {
  CLI::App app{"human-humanoid assembly cell planning toolkit"};
  app.require_subcommand(1);

  std::string dataset_path, out_path, rule_path, cost_path, trace_path;
  bool csv = false, verify = false, with_safety = false;
  int jobs = 1, n_variants = 50;
  SimFlags sim;
  double rule_lo = 0.9, rule_hi = 1.1, rule_flip = 0.05;
  double distance_mm = 0.0, vh_mm_s = 1600.0;
  std::string zone = "collaborative";

  auto* validate_cmd = app.add_subcommand("validate", "parse and check a dataset");
  validate_cmd->add_option("dataset", dataset_path)->required();

  auto* allocate_cmd = app.add_subcommand("allocate", "rule-based task allocation");
  allocate_cmd->add_option("dataset", dataset_path)->required();
  allocate_cmd->add_option("--out", out_path, "artifact path");
  allocate_cmd->add_flag("--csv", csv, "write CSV instead of JSON");

  auto* balance_cmd = app.add_subcommand("balance", "takt and line balancing");
  balance_cmd->add_option("dataset", dataset_path)->required();
  balance_cmd->add_option("--out", out_path);
  balance_cmd->add_flag("--csv", csv);
  balance_cmd->add_flag("--verify", verify, "cross-check with the exact oracle");
  balance_cmd->add_flag("--with-safety", with_safety, "attach the safety checklist");

  auto* simulate_cmd = app.add_subcommand("simulate", "seeded discrete-event simulation");
  simulate_cmd->add_option("dataset", dataset_path)->required();
  simulate_cmd->add_option("--out", out_path);
  simulate_cmd->add_flag("--csv", csv, "one row per replication");
  simulate_cmd->add_option("--trace", trace_path, "event trace CSV (replication 0)");
  sim.add_to(simulate_cmd);

  auto* scenarios_cmd = app.add_subcommand("scenarios", "variant batch study");
  scenarios_cmd->add_option("dataset", dataset_path)->required();
  scenarios_cmd->add_option("--n", n_variants, "number of variants");
  scenarios_cmd->add_option("--rule", rule_path, "variant rule JSON");
  scenarios_cmd->add_option("--out", out_path, "scenario table CSV");
  scenarios_cmd->add_option("--jobs", jobs, "parallel variant workers");
  sim.add_to(scenarios_cmd);

  auto* report_cmd = app.add_subcommand("report", "full pipeline report as one JSON");
  report_cmd->add_option("dataset", dataset_path)->required();
  report_cmd->add_option("--out", out_path);
  report_cmd->add_option("--cost", cost_path, "cost config JSON for economics");
  report_cmd->add_flag("--verify", verify);
  sim.add_to(report_cmd);

  auto* speed_cmd = app.add_subcommand("safety-speed", "allowed robot speed at a separation");
  speed_cmd->add_option("--distance-mm", distance_mm)->required();
  speed_cmd->add_option("--zone", zone, "collaborative|open");
  speed_cmd->add_option("--v-h", vh_mm_s, "human approach speed mm/s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage errors exit 2
  }

  if (speed_cmd->parsed()) {
    hhc::SafetyConfig cfg;
    hhc::Zone z;
    if (zone == "collaborative") z = hhc::Zone::Collaborative;
    else if (zone == "open") z = hhc::Zone::Open;
    else throw hhc::ConfigError("--zone must be collaborative or open");
    double v = hhc::allowed_speed(distance_mm, vh_mm_s, cfg, z);
    std::cout << v << "\n";
    return 0;
  }

  const std::string input = read_file(dataset_path);
  hhc::Dataset ds = hhc::parse_dataset(input);
  hhc::AllocationPlan plan = hhc::allocate_all(ds.product);
  hhc::AutomationMetrics metrics = hhc::automation_metrics(plan, ds.product);
  double takt_s = hhc::takt(ds.shift);

  if (validate_cmd->parsed()) {
    std::cout << ds.product.name << ": " << ds.product.tasks.size() << " tasks, total "
              << ds.product.total_duration_s() << " s, takt " << takt_s << " s\n";
    return 0;
  }

  if (allocate_cmd->parsed()) {
    std::cout << hhc::allocation_csv(plan);
    std::cout << hhc::to_json(metrics).dump(2) << "\n";
    if (!out_path.empty()) {
      if (csv) {
        write_file(out_path, hhc::allocation_csv(plan));
      } else {
        hhc::ojson doc;
        doc["manifest"] = hhc::make_manifest("allocate", input, 0).to_json();
        doc["allocation"] = hhc::to_json(plan);
        doc["metrics"] = hhc::to_json(metrics);
        write_file(out_path, doc.dump(2) + "\n");
      }
    }
    return 0;
  }

  if (balance_cmd->parsed()) {
    hhc::LinePlan line = hhc::balance_line(ds.product, plan, takt_s);
    hhc::verify_line_plan(line, ds.product, plan);
    std::cout << hhc::line_plan_csv(line);
    std::cout << "stations=" << line.stations.size() << " takt=" << takt_s
              << " idle_total=" << line.idle_total_s << "\n";
    if (verify) {
      int exact = hhc::oracle_min_stations(ds.product, plan, takt_s,
                                           static_cast<int>(ds.product.tasks.size()));
      std::cout << "oracle_min_stations=" << exact << "\n";
    }
    if (!out_path.empty()) {
      if (csv) {
        write_file(out_path, hhc::line_plan_csv(line));
      } else {
        hhc::ojson doc;
        doc["manifest"] = hhc::make_manifest("balance", input, 0).to_json();
        doc["line_plan"] = hhc::to_json(line);
        if (with_safety) doc["safety_checklist"] = hhc::to_json(hhc::safety_checklist(line));
        write_file(out_path, doc.dump(2) + "\n");
      }
    }
    return 0;
  }

  if (simulate_cmd->parsed()) {
    hhc::LinePlan line = hhc::balance_line(ds.product, plan, takt_s);
    hhc::SimConfig cfg = sim.build(ds.shift);
    hhc::Aggregate agg = hhc::run_replications(line, cfg);
    std::cout << "completed_units mean=" << agg.completed_units.mean
              << " reps=" << agg.replications << "\n";
    if (!trace_path.empty()) {
      std::vector<hhc::TraceRow> trace;
      hhc::run_sim(line, cfg, 0, &trace);
      write_file(trace_path, hhc::trace_csv(trace));
    }
    if (!out_path.empty()) {
      if (csv) {
        std::ostringstream t;
        t << "replication,completed_units,avg_wip,avg_lead_time_s,bottleneck_utilization,"
             "trace_hash\n";
        for (size_t r = 0; r < agg.runs.size(); ++r) {
          const auto& run = agg.runs[r];
          t << r << ',' << run.completed_units << ',' << run.avg_wip << ','
            << run.avg_lead_time_s << ',' << run.bottleneck_utilization << ','
            << run.trace_hash << '\n';
        }
        write_file(out_path, t.str());
      } else {
        hhc::ojson doc;
        doc["manifest"] = hhc::make_manifest("simulate", input, cfg.seed).to_json();
        doc["aggregate"] = hhc::to_json(agg);
        doc["replication_0"] = hhc::to_json(agg.runs.front());
        write_file(out_path, doc.dump(2) + "\n");
      }
    }
    return 0;
  }

  if (scenarios_cmd->parsed()) {
    hhc::VariantRule rule;
    rule.seed = sim.seed;
    if (!rule_path.empty()) {
      auto j = nlohmann::json::parse(read_file(rule_path));
      rule.duration_lo = j.value("duration_lo", rule.duration_lo);
      rule.duration_hi = j.value("duration_hi", rule.duration_hi);
      rule.criteria_flip_probability =
          j.value("criteria_flip_probability", rule.criteria_flip_probability);
    } else {
      rule.duration_lo = rule_lo;
      rule.duration_hi = rule_hi;
      rule.criteria_flip_probability = rule_flip;
    }
    auto variants = hhc::generate_variants(ds, n_variants, rule);
    hhc::SimConfig cfg = sim.build(ds.shift);
    auto rows = hhc::batch_run(variants, cfg.shift, cfg, jobs);
    int feasible = 0;
    for (const auto& r : rows) feasible += r.feasible;
    std::cout << rows.size() << " variants, " << feasible << " feasible\n";
    if (!out_path.empty()) write_file(out_path, hhc::scenario_csv(rows));
    return 0;
  }

  if (report_cmd->parsed()) {
    hhc::LinePlan line = hhc::balance_line(ds.product, plan, takt_s);
    hhc::verify_line_plan(line, ds.product, plan);
    hhc::SimConfig cfg = sim.build(ds.shift);
    hhc::Aggregate agg = hhc::run_replications(line, cfg);
    hhc::CostConfig cost = load_cost(cost_path);
    hhc::EconomicsResult econ =
        hhc::economics(agg.runs.front(), plan, ds.product, cfg.shift, cost);

    hhc::ojson doc;
    doc["manifest"] = hhc::make_manifest("report", input, cfg.seed).to_json();
    doc["product"] = {{"name", ds.product.name},
                      {"tasks", ds.product.tasks.size()},
                      {"total_time_s", ds.product.total_duration_s()}};
    doc["takt_s"] = takt_s;
    doc["min_stations"] = hhc::min_stations(ds.product, takt_s);
    doc["allocation_metrics"] = hhc::to_json(metrics);
    doc["allocation"] = hhc::to_json(plan);
    doc["line_plan"] = hhc::to_json(line);
    doc["safety_checklist"] = hhc::to_json(hhc::safety_checklist(line));
    doc["simulation"] = hhc::to_json(agg);
    doc["economics"] = hhc::to_json(econ);
    doc["takt_compliance"] = agg.completed_units.mean >= ds.shift.demand_units;
    if (verify) {
      doc["oracle_min_stations"] = hhc::oracle_min_stations(
          ds.product, plan, takt_s, static_cast<int>(ds.product.tasks.size()));
    }
    std::string text = doc.dump(2) + "\n";
    if (!out_path.empty()) write_file(out_path, text);
    else std::cout << text;
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hhc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const hhc::SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hhc::RefError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hhc::ValueError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hhc::CycleError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hhc::ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
