#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "hhc/allocate.hpp"
#include "hhc/model.hpp"
#include "hhc/rng.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string pb560_text() { return read_file(std::string(HHC_DATA_DIR) + "/pb560.json"); }

inline hhc::Dataset pb560() { return hhc::parse_dataset(pb560_text()); }

// Random DAG product: edges only from lower to higher ids, so always acyclic.
inline hhc::Product random_product(hhc::RandomStream& rng, int n, double edge_prob,
                                   double dur_lo, double dur_hi) {
  hhc::Product p;
  p.name = "random";
  for (int i = 1; i <= n; ++i) {
    hhc::Task t;
    t.id = i;
    t.name = "t" + std::to_string(i);
    t.duration_s = std::floor(rng.uniform(dur_lo, dur_hi)) + 1.0;
    for (int j = 1; j < i; ++j)
      if (rng.uniform01() < edge_prob) t.predecessors.insert(j);
    // random criteria; robot iff all pass
    t.criteria.part = rng.uniform01() < 0.8;
    t.criteria.feeding = rng.uniform01() < 0.8;
    t.criteria.joining = rng.uniform01() < 0.8;
    t.criteria.mounting = rng.uniform01() < 0.8;
    t.criteria.safety = rng.uniform01() < 0.8;
    p.tasks.push_back(std::move(t));
  }
  return p;
}

}  // namespace testutil
