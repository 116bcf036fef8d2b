#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hhc/balance.hpp"
#include "hhc/errors.hpp"

namespace hhc {

// Speed-governor parameters. The 250 mm/s collaborative cap and the 2222 mm/s
// free-run cap come from the robot's platform limits; the remaining defaults
// are configurable engineering assumptions (walking-speed human, 0.1 s
// detection, 0.3 s stop actuation).
struct SafetyConfig {
  double v_max_mm_s = 2222.0;
  double v_collab_cap_mm_s = 250.0;
  double v_h_mm_s = 1600.0;
  double t_r_s = 0.1;
  double t_s_s = 0.3;
  double a_brake_mm_s2 = 500.0;
  double clearance_mm = 200.0;    // C
  double uncertainty_mm = 60.0;   // Z
};

enum class Zone { Open, Collaborative };

enum class InteractionMode { Isolated, Coexistence, Synchronized, Cooperation, Collaboration };

inline std::string to_string(InteractionMode m) {
  switch (m) {
    case InteractionMode::Isolated: return "Isolated";
    case InteractionMode::Coexistence: return "Coexistence";
    case InteractionMode::Synchronized: return "Synchronized";
    case InteractionMode::Cooperation: return "Cooperation";
    case InteractionMode::Collaboration: return "Collaboration";
  }
  return "Isolated";
}

struct InteractionQuery {
  bool shares_cell = false;
  bool zone_overlap = false;
  bool time_overlap = false;
  bool same_task = false;
};

// Protective separation distance:
//   S_p = v_h (t_r + t_s) + v_r t_r + v_r^2 / (2 a) + C + Z
inline double protective_distance(double v_r_mm_s, double v_h_mm_s, const SafetyConfig& cfg) {
  return v_h_mm_s * (cfg.t_r_s + cfg.t_s_s) + v_r_mm_s * cfg.t_r_s +
         v_r_mm_s * v_r_mm_s / (2.0 * cfg.a_brake_mm_s2) + cfg.clearance_mm +
         cfg.uncertainty_mm;
}

// Largest speed (1 mm/s resolution) whose protective distance fits inside the
// measured separation; 0 means monitored stop.
inline double allowed_speed(double separation_mm, double v_h_mm_s, const SafetyConfig& cfg,
                            Zone zone) {
  double cap = zone == Zone::Collaborative ? cfg.v_collab_cap_mm_s : cfg.v_max_mm_s;
  if (protective_distance(0.0, v_h_mm_s, cfg) > separation_mm) return 0.0;
  // S_p is monotone increasing in v, bisect on whole mm/s
  long lo = 0, hi = static_cast<long>(cap);
  while (lo < hi) {
    long mid = (lo + hi + 1) / 2;
    if (protective_distance(static_cast<double>(mid), v_h_mm_s, cfg) <= separation_mm)
      lo = mid;
    else
      hi = mid - 1;
  }
  return std::min(static_cast<double>(lo), cap);
}

inline InteractionMode classify_mode(const InteractionQuery& q) {
  if (q.same_task && !q.zone_overlap)
    throw InvariantError("same_task requires zone_overlap");
  if (q.zone_overlap && !q.shares_cell)
    throw InvariantError("zone_overlap requires shares_cell");
  if (!q.shares_cell) return InteractionMode::Isolated;
  if (!q.zone_overlap) return InteractionMode::Coexistence;
  if (!q.time_overlap) return InteractionMode::Synchronized;
  if (!q.same_task) return InteractionMode::Cooperation;
  return InteractionMode::Collaboration;
}

struct StationSafety {
  int station_index = 0;
  std::vector<std::string> required_features;
};

struct SafetyChecklist {
  std::vector<StationSafety> stations;  // Robot stations only
  std::string imr_classification;       // "IMR type-C" when the line has robots
};

// Every robot station needs power/force limiting and hand guiding; robot
// stations next to a human station additionally need speed-and-separation
// monitoring and a safety-rated stop.
inline SafetyChecklist safety_checklist(const LinePlan& line) {
  SafetyChecklist out;
  int n = static_cast<int>(line.stations.size());
  for (int i = 0; i < n; ++i) {
    if (line.stations[i].resource != Resource::Robot) continue;
    StationSafety s;
    s.station_index = line.stations[i].index;
    s.required_features = {"power_force_limiting", "hand_guiding"};
    bool human_adjacent =
        (i > 0 && line.stations[i - 1].resource == Resource::Human) ||
        (i + 1 < n && line.stations[i + 1].resource == Resource::Human);
    if (human_adjacent) {
      s.required_features.push_back("speed_separation_monitoring");
      s.required_features.push_back("safety_rated_stop");
    }
    out.stations.push_back(std::move(s));
  }
  if (!out.stations.empty()) out.imr_classification = "IMR type-C";
  return out;
}

}  // namespace hhc
