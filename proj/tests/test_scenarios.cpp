#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hhc/scenarios.hpp"

#include "helpers.hpp"

using namespace hhc;

TEST_CASE("50 variants all parse and pass dataset invariants") {
  Dataset base = testutil::pb560();
  VariantRule rule;
  rule.seed = 42;
  auto variants = generate_variants(base, 50, rule);
  REQUIRE(variants.size() == 50);
  CHECK(variants[0].product.name == "PB560-v001");
  CHECK(variants[49].product.name == "PB560-v050");
  for (const auto& v : variants) {
    // round through the parser so every invariant is re-checked
    Dataset reparsed = parse_dataset(serialize_dataset(v));
    CHECK(reparsed == v);
    for (const auto& t : v.product.tasks) CHECK(t.duration_s >= 1.0);
  }
}

TEST_CASE("n=0 -> empty list") {
  Dataset base = testutil::pb560();
  CHECK(generate_variants(base, 0, VariantRule{}).empty());
}

TEST_CASE("identity rule copies the base except for names") {
  Dataset base = testutil::pb560();
  VariantRule rule;
  rule.duration_lo = 1.0;
  rule.duration_hi = 1.0;
  rule.criteria_flip_probability = 0.0;
  auto variants = generate_variants(base, 3, rule);
  for (auto v : variants) {
    v.product.name = base.product.name;
    CHECK(v == base);
  }
}

TEST_CASE("same seed is byte-deterministic; different seeds perturb differently") {
  Dataset base = testutil::pb560();
  VariantRule rule;
  rule.seed = 7;
  auto a = generate_variants(base, 10, rule);
  auto b = generate_variants(base, 10, rule);
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(serialize_dataset(a[i]) == serialize_dataset(b[i]));
  rule.seed = 8;
  auto c = generate_variants(base, 10, rule);
  bool any_diff = false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t t = 0; t < a[i].product.tasks.size(); ++t)
      if (a[i].product.tasks[t].duration_s != c[i].product.tasks[t].duration_s)
        any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("batch of one identity variant equals a direct pipeline run") {
  Dataset base = testutil::pb560();
  VariantRule rule;
  rule.duration_lo = rule.duration_hi = 1.0;
  rule.criteria_flip_probability = 0.0;
  auto variants = generate_variants(base, 1, rule);
  SimConfig cfg;
  cfg.shift = base.shift;
  auto rows = batch_run(variants, base.shift, cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].feasible);
  CHECK(rows[0].stations == 5);
  CHECK(rows[0].robot_task_share == doctest::Approx(0.6));
  REQUIRE(rows[0].throughput.has_value());
  CHECK(*rows[0].throughput == doctest::Approx(163.0));
  CHECK(rows[0].takt_compliance.has_value());
  CHECK_FALSE(*rows[0].takt_compliance);  // 163 < 167 demand
}

TEST_CASE("infeasible variant becomes a feasible=false row without throughput") {
  Dataset base = testutil::pb560();
  base.product.tasks[0].duration_s = 500.0;  // above takt 161
  std::vector<Dataset> variants = {base};
  SimConfig cfg;
  cfg.shift = base.shift;
  auto rows = batch_run(variants, base.shift, cfg);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].feasible);
  CHECK_FALSE(rows[0].throughput.has_value());
  CHECK_FALSE(rows[0].takt_compliance.has_value());
}

TEST_CASE("50-variant batch: row per variant, >= 80% feasible at default rule") {
  Dataset base = testutil::pb560();
  VariantRule rule;
  rule.seed = 42;
  auto variants = generate_variants(base, 50, rule);
  SimConfig cfg;
  cfg.shift = base.shift;
  auto rows = batch_run(variants, base.shift, cfg, 4);
  REQUIRE(rows.size() == 50);
  int feasible = 0;
  for (const auto& r : rows) {
    if (r.feasible) {
      ++feasible;
      CHECK(r.throughput.has_value());
    } else {
      CHECK_FALSE(r.throughput.has_value());
    }
  }
  CHECK(feasible >= 40);
  // parallel execution matches serial, row for row
  auto serial = batch_run(variants, base.shift, cfg, 1);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].variant == serial[i].variant);
    CHECK(rows[i].feasible == serial[i].feasible);
    if (rows[i].throughput) CHECK(*rows[i].throughput == *serial[i].throughput);
  }
}

TEST_CASE("economics: fixed material handling credit only when nothing completes") {
  Dataset base = testutil::pb560();
  AllocationPlan plan = allocate_all(base.product);
  SimResult r;
  r.completed_units = 0;
  CostConfig cost;
  cost.material_handling_saved_s_per_shift = 3600.0;
  EconomicsResult e = economics(r, plan, base.product, base.shift, cost);
  CHECK(e.labor_s_saved_per_shift == 3600.0);
}

TEST_CASE("economics: PB560 deterministic run saves 55923 s per shift") {
  Dataset base = testutil::pb560();
  AllocationPlan plan = allocate_all(base.product);
  SimResult r;
  r.completed_units = 163;
  CostConfig cost;
  cost.labor_rate_per_h = 30.0;
  cost.shifts_per_year = 250;
  EconomicsResult e = economics(r, plan, base.product, base.shift, cost);
  CHECK(e.labor_s_saved_per_shift == doctest::Approx(163.0 * 321.0 + 3600.0));
  CHECK(e.labor_s_saved_per_shift == doctest::Approx(55923.0));
}

TEST_CASE("economics: zero capex pays back immediately when saving is positive") {
  Dataset base = testutil::pb560();
  AllocationPlan plan = allocate_all(base.product);
  SimResult r;
  r.completed_units = 100;
  CostConfig cost;
  cost.labor_rate_per_h = 30.0;
  cost.shifts_per_year = 250;
  cost.robot_capex = 0.0;
  EconomicsResult e = economics(r, plan, base.product, base.shift, cost);
  REQUIRE(e.payback_years.has_value());
  CHECK(*e.payback_years == 0.0);
}

TEST_CASE("economics: no payback when operating cost dominates") {
  Dataset base = testutil::pb560();
  AllocationPlan plan = allocate_all(base.product);
  SimResult r;
  r.completed_units = 1;
  CostConfig cost;
  cost.labor_rate_per_h = 1.0;
  cost.robot_operating_per_h = 1000.0;
  cost.shifts_per_year = 250;
  cost.robot_capex = 10000.0;
  EconomicsResult e = economics(r, plan, base.product, base.shift, cost);
  CHECK(e.annual_saving < 0.0);
  CHECK_FALSE(e.payback_years.has_value());
}

TEST_CASE("economics is linear in labor rate and completed units") {
  Dataset base = testutil::pb560();
  AllocationPlan plan = allocate_all(base.product);
  CostConfig cost;
  cost.labor_rate_per_h = 20.0;
  cost.shifts_per_year = 200;
  cost.material_handling_saved_s_per_shift = 0.0;
  SimResult r1, r2;
  r1.completed_units = 50;
  r2.completed_units = 100;
  EconomicsResult e1 = economics(r1, plan, base.product, base.shift, cost);
  EconomicsResult e2 = economics(r2, plan, base.product, base.shift, cost);
  CHECK(e2.labor_s_saved_per_shift == doctest::Approx(2.0 * e1.labor_s_saved_per_shift));
  CostConfig cost2 = cost;
  cost2.labor_rate_per_h = 40.0;
  EconomicsResult e3 = economics(r1, plan, base.product, base.shift, cost2);
  CHECK(e3.annual_saving == doctest::Approx(2.0 * e1.annual_saving));
}

TEST_CASE("variant rule validation") {
  VariantRule bad;
  bad.duration_lo = 0.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = VariantRule{};
  bad.criteria_flip_probability = 0.6;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}
