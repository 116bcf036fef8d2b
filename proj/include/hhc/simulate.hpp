#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "hhc/balance.hpp"
#include "hhc/model.hpp"
#include "hhc/rng.hpp"

namespace hhc {

enum class TimeModel { Deterministic, NormalTruncated, Triangular };

struct FailureConfig {
  double mttf_s = std::numeric_limits<double>::infinity();  // inf disables
  double mttr_s = 0.0;
};

struct ChargingConfig {
  double interval_s = 0.0;  // busy time between charges
  double duration_s = 0.0;
};

struct SimConfig {
  std::uint64_t seed = 0;
  int replications = 1;
  TimeModel time_model = TimeModel::Deterministic;
  double cv = 0.0;                // NormalTruncated
  double tri_min_factor = 1.0;    // Triangular, mode fixed at 1.0
  double tri_max_factor = 1.0;
  int buffer_capacity = 1;        // per inter-station buffer
  std::optional<FailureConfig> failures;  // Robot stations
  double changeover_s = 0.0;      // line setup before the first unit
  std::optional<ChargingConfig> charging; // Robot (humanoid) stations
  ShiftConfig shift;
};

inline void validate(const SimConfig& cfg) {
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  if (cfg.cv < 0.0) throw ConfigError("cv must be >= 0");
  if (!(cfg.tri_min_factor <= 1.0 && 1.0 <= cfg.tri_max_factor))
    throw ConfigError("triangular factors must satisfy min <= 1 <= max");
  if (cfg.buffer_capacity < 0) throw ConfigError("buffer_capacity must be >= 0");
  if (cfg.failures && !(cfg.failures->mttf_s > 0.0))
    throw ConfigError("mttf_s must be > 0");
  if (cfg.failures && cfg.failures->mttr_s < 0.0) throw ConfigError("mttr_s must be >= 0");
  if (cfg.charging && !(cfg.charging->interval_s > 0.0 && cfg.charging->duration_s >= 0.0))
    throw ConfigError("charging interval must be > 0 and duration >= 0");
  if (cfg.changeover_s < 0.0) throw ConfigError("changeover_s must be >= 0");
  if (cfg.shift.duration_s <= 0.0) throw ConfigError("shift duration must be > 0");
}

struct TraceRow {
  double t_s = 0.0;
  int station = 0;  // 1-based, 0 for line-level events
  std::string event;
  long unit_id = -1;
};

struct SimResult {
  long completed_units = 0;
  double throughput_per_shift = 0.0;
  std::vector<double> station_utilization;  // completed-output service time / shift
  double bottleneck_utilization = 0.0;      // utilization of the max-load station
  double avg_wip = 0.0;
  double avg_lead_time_s = 0.0;
  std::vector<double> downtime_s;
  std::vector<double> busy_s;
  long units_entered = 0;
  long wip_at_end = 0;
  long event_count = 0;
  std::uint64_t trace_hash = 0;
};

namespace detail {

inline std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct UnitRecord {
  double entry = 0.0;
  std::vector<double> service;  // base service time per station
};

}  // namespace detail

// Event-driven serial line with blocking-after-service, preemptive failures
// and scheduled charging folded into each service completion. Fully
// deterministic for a given (seed, replication_index).
inline SimResult run_sim(const LinePlan& line, const SimConfig& cfg,
                         int replication_index, std::vector<TraceRow>* trace = nullptr) {
  validate(cfg);
  const int n = static_cast<int>(line.stations.size());
  if (n == 0) throw ConfigError("line plan has no stations");
  const double horizon = cfg.shift.duration_s;
  const double inf = std::numeric_limits<double>::infinity();

  bool failures_on = cfg.failures && std::isfinite(cfg.failures->mttf_s);
  bool charging_on = cfg.charging.has_value();

  enum Purpose : std::uint64_t { kService = 0, kFailure = 1, kRepair = 2 };
  std::vector<RandomStream> svc_rng(n), fail_rng(n), rep_rng(n);
  for (int i = 0; i < n; ++i) {
    svc_rng[i] = RandomStream::derive(cfg.seed, replication_index, i, kService);
    fail_rng[i] = RandomStream::derive(cfg.seed, replication_index, i, kFailure);
    rep_rng[i] = RandomStream::derive(cfg.seed, replication_index, i, kRepair);
  }

  // station state
  enum class St { Idle, Busy, Blocked };
  std::vector<St> state(n, St::Idle);
  std::vector<long> holding(n, -1);
  std::vector<double> ttf_rem(n, inf);
  std::vector<double> busy_since_charge(n, 0.0);
  std::vector<double> busy_s(n, 0.0), downtime_s(n, 0.0), util_service(n, 0.0);
  std::vector<bool> robot_station(n, false);
  for (int i = 0; i < n; ++i) {
    robot_station[i] = line.stations[i].resource == Resource::Robot;
    if (failures_on && robot_station[i]) ttf_rem[i] = fail_rng[i].exponential(cfg.failures->mttf_s);
  }

  std::vector<std::deque<long>> buffer(n > 1 ? n - 1 : 0);

  std::vector<detail::UnitRecord> units;
  long completed = 0;
  double lead_sum = 0.0;
  double wip_integral = 0.0, wip_last_t = 0.0;
  long wip_now = 0;
  long event_count = 0;
  std::uint64_t hash = 0xcbf29ce484222325ull;

  auto note = [&](double t, int station, const char* ev, long unit) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f,%d,%s,%ld", t, station, ev, unit);
    hash = detail::fnv1a(hash, buf);
    if (trace) trace->push_back({t, station, ev, unit});
  };

  auto wip_advance = [&](double t) {
    double upto = std::min(t, horizon);
    if (upto > wip_last_t) {
      wip_integral += wip_now * (upto - wip_last_t);
      wip_last_t = upto;
    }
  };

  struct Ev {
    double t;
    long seq;
    int station;
    long unit;
  };
  struct EvCmp {
    bool operator()(const Ev& a, const Ev& b) const {
      if (a.t != b.t) return a.t > b.t;
      return a.seq > b.seq;  // FIFO tie-break
    }
  };
  std::priority_queue<Ev, std::vector<Ev>, EvCmp> fel;
  long seq = 0;

  auto accrue_busy = [&](int i, double from, double dt) {
    double a = std::min(from, horizon);
    double b = std::min(from + dt, horizon);
    if (b > a) busy_s[i] += b - a;
  };
  auto accrue_down = [&](int i, double from, double dt) {
    double a = std::min(from, horizon);
    double b = std::min(from + dt, horizon);
    if (b > a) downtime_s[i] += b - a;
  };

  // per-station task durations, in assignment order
  std::vector<std::vector<double>> task_durations(n);
  for (int i = 0; i < n; ++i) task_durations[i] = line.stations[i].task_durations;

  auto sample_service = [&](int i) {
    double s = 0.0;
    for (double d : task_durations[i]) {
      switch (cfg.time_model) {
        case TimeModel::Deterministic: s += d; break;
        case TimeModel::NormalTruncated:
          s += svc_rng[i].normal_truncated_positive(d, cfg.cv * d);
          break;
        case TimeModel::Triangular:
          s += d * svc_rng[i].triangular(cfg.tri_min_factor, 1.0, cfg.tri_max_factor);
          break;
      }
    }
    return s;
  };

  auto begin_service = [&](int i, long unit, double t) {
    double s = sample_service(i);
    units[static_cast<size_t>(unit)].service[i] = s;
    note(t, i + 1, "start", unit);

    // walk the busy-time axis, inserting repairs and charges
    double clock = t, remaining = s;
    bool fail_here = failures_on && robot_station[i];
    bool charge_here = charging_on && robot_station[i];
    while (true) {
      double to_fail = fail_here ? ttf_rem[i] : inf;
      double to_charge = charge_here ? cfg.charging->interval_s - busy_since_charge[i] : inf;
      double next = std::min(to_fail, to_charge);
      if (next >= remaining) {
        accrue_busy(i, clock, remaining);
        if (fail_here) ttf_rem[i] -= remaining;
        if (charge_here) busy_since_charge[i] += remaining;
        clock += remaining;
        break;
      }
      accrue_busy(i, clock, next);
      clock += next;
      remaining -= next;
      if (fail_here) ttf_rem[i] -= next;
      if (charge_here) busy_since_charge[i] += next;
      if (to_fail <= to_charge) {
        double repair = rep_rng[i].exponential(cfg.failures->mttr_s);
        note(clock, i + 1, "failure", unit);
        accrue_down(i, clock, repair);
        clock += repair;
        ttf_rem[i] = fail_rng[i].exponential(cfg.failures->mttf_s);
      } else {
        note(clock, i + 1, "charge", unit);
        accrue_down(i, clock, cfg.charging->duration_s);
        clock += cfg.charging->duration_s;
        busy_since_charge[i] = 0.0;
      }
    }

    state[i] = St::Busy;
    holding[i] = unit;
    fel.push({clock, seq++, i, unit});
  };

  // forward declarations via std::function-free recursion
  auto try_start = [&](auto&& self_push, int i, double t) -> void {
    if (state[i] != St::Idle) return;
    if (i == 0) {
      if (t < cfg.changeover_s) return;  // line not yet open
      long unit = static_cast<long>(units.size());
      units.push_back({t, std::vector<double>(static_cast<size_t>(n), 0.0)});
      wip_advance(t);
      ++wip_now;
      note(t, 1, "enter", unit);
      begin_service(0, unit, t);
      return;
    }
    if (!buffer[i - 1].empty()) {
      long unit = buffer[i - 1].front();
      buffer[i - 1].pop_front();
      begin_service(i, unit, t);
      // upstream may have been blocked on this buffer
      if (state[i - 1] == St::Blocked) {
        long held = holding[i - 1];
        state[i - 1] = St::Idle;
        holding[i - 1] = -1;
        self_push(self_push, i - 1, held, t);
      }
    }
  };

  auto push_forward = [&](auto&& self, int i, long unit, double t) -> void {
    if (i == n - 1) {
      // line exit
      wip_advance(t);
      --wip_now;
      ++completed;
      note(t, n, "exit", unit);
      const auto& u = units[static_cast<size_t>(unit)];
      lead_sum += t - u.entry;
      for (int k = 0; k < n; ++k) util_service[k] += u.service[k];
      state[i] = St::Idle;
      holding[i] = -1;
      try_start(self, i, t);
      return;
    }
    if (static_cast<int>(buffer[i].size()) < cfg.buffer_capacity) {
      buffer[i].push_back(unit);
      state[i] = St::Idle;
      holding[i] = -1;
      try_start(self, i + 1, t);  // downstream may pull immediately
      try_start(self, i, t);
    } else {
      state[i] = St::Blocked;
      holding[i] = unit;
    }
  };

  // open the line
  if (cfg.changeover_s > 0.0) {
    note(cfg.changeover_s, 0, "line_open", -1);
    fel.push({cfg.changeover_s, seq++, -1, -1});
  } else {
    try_start(push_forward, 0, 0.0);
  }

  while (!fel.empty()) {
    Ev ev = fel.top();
    fel.pop();
    if (ev.t > horizon) break;
    ++event_count;
    if (ev.station < 0) {  // line_open
      try_start(push_forward, 0, ev.t);
      continue;
    }
    int i = ev.station;
    note(ev.t, i + 1, "end", ev.unit);
    push_forward(push_forward, i, ev.unit, ev.t);
  }
  wip_advance(horizon);

  SimResult res;
  res.completed_units = completed;
  res.throughput_per_shift = static_cast<double>(completed);
  res.avg_wip = wip_integral / horizon;
  res.avg_lead_time_s = completed > 0 ? lead_sum / completed : 0.0;
  res.busy_s = busy_s;
  res.downtime_s = downtime_s;
  res.units_entered = static_cast<long>(units.size());
  res.wip_at_end = wip_now;
  res.event_count = event_count;
  res.trace_hash = hash;
  res.station_utilization.resize(n);
  for (int i = 0; i < n; ++i) res.station_utilization[i] = util_service[i] / horizon;
  int bottleneck = 0;
  for (int i = 1; i < n; ++i)
    if (line.stations[i].load_s > line.stations[bottleneck].load_s) bottleneck = i;
  res.bottleneck_utilization = res.station_utilization[bottleneck];
  return res;
}

// ---------------------------------------------------------------------------
// Replication statistics

struct Stats {
  double mean = 0.0;
  double stddev = std::numeric_limits<double>::quiet_NaN();  // NaN when n == 1
  double ci95_half = std::numeric_limits<double>::quiet_NaN();
};

inline Stats summarize(const std::vector<double>& xs) {
  Stats s;
  size_t n = xs.size();
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    boost::math::students_t_distribution<double> t(static_cast<double>(n - 1));
    s.ci95_half = boost::math::quantile(t, 0.975) * s.stddev / std::sqrt(static_cast<double>(n));
  }
  return s;
}

struct Aggregate {
  int replications = 0;
  Stats completed_units;
  Stats throughput_per_shift;
  Stats avg_wip;
  Stats avg_lead_time_s;
  Stats bottleneck_utilization;
  Stats event_count;
  std::vector<Stats> station_utilization;
  std::vector<Stats> downtime_s;
  std::vector<SimResult> runs;  // ordered by replication index
};

inline Aggregate run_replications(const LinePlan& line, const SimConfig& cfg) {
  validate(cfg);
  Aggregate agg;
  agg.replications = cfg.replications;
  for (int r = 0; r < cfg.replications; ++r) agg.runs.push_back(run_sim(line, cfg, r));

  auto collect = [&](auto&& get) {
    std::vector<double> xs;
    for (const auto& run : agg.runs) xs.push_back(get(run));
    return summarize(xs);
  };
  agg.completed_units = collect([](const SimResult& r) { return double(r.completed_units); });
  agg.throughput_per_shift = collect([](const SimResult& r) { return r.throughput_per_shift; });
  agg.avg_wip = collect([](const SimResult& r) { return r.avg_wip; });
  agg.avg_lead_time_s = collect([](const SimResult& r) { return r.avg_lead_time_s; });
  agg.bottleneck_utilization =
      collect([](const SimResult& r) { return r.bottleneck_utilization; });
  agg.event_count = collect([](const SimResult& r) { return double(r.event_count); });
  size_t n = agg.runs.front().station_utilization.size();
  for (size_t i = 0; i < n; ++i) {
    agg.station_utilization.push_back(
        collect([i](const SimResult& r) { return r.station_utilization[i]; }));
    agg.downtime_s.push_back(collect([i](const SimResult& r) { return r.downtime_s[i]; }));
  }
  return agg;
}

}  // namespace hhc
