#ifndef GRETA_BENCH_HPP
#define GRETA_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/engine.hpp"
#include "greta/event.hpp"
#include "greta/oracle.hpp"

namespace greta {

/// Measurements of one instrumented run.
/// Peak latency is taken per emitted window result against the arrival
/// wall-clock of the last stream event that can contribute to that window.
struct RunMetrics {
  std::string engine;
  std::uint64_t events = 0;
  std::uint64_t rows = 0;
  double elapsed_ms = 0.0;
  double peak_latency_ms = 0.0;
  double throughput_eps = 0.0;  // events per second
  std::uint64_t peak_payload_bytes = 0;
  bool saturated = false;
  std::string status = "ok";  // ok | timeout | skipped
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

}  // namespace detail

inline std::vector<ResultRow> run_engine_instrumented(
    const CompiledQuery& cq, const std::vector<Event>& events,
    RunMetrics& m) {
  using detail::Clock;
  m.engine = "greta";
  m.events = events.size();
  Engine engine(cq);
  std::vector<ResultRow> rows;
  // arrival clock per event timestamp, pruned as windows close
  std::deque<std::pair<Time, Clock::time_point>> arrivals;
  const auto t0 = Clock::now();
  auto note_rows = [&](const std::vector<ResultRow>& emitted) {
    if (emitted.empty()) return;
    const auto now = Clock::now();
    for (const auto& r : emitted) {
      Clock::time_point last = t0;
      for (const auto& [t, at] : arrivals)
        if (t < r.window_end) last = at;
      m.peak_latency_ms = std::max(m.peak_latency_ms,
                                   detail::ms_between(last, now));
    }
    const Time horizon = emitted.back().window_end;
    while (arrivals.size() > 1 && arrivals[1].first < horizon)
      arrivals.pop_front();
    rows.insert(rows.end(), emitted.begin(), emitted.end());
  };
  for (const Event& ev : events) {
    engine.ingest(ev);
    if (arrivals.empty() || arrivals.back().first != ev.time)
      arrivals.emplace_back(ev.time, Clock::now());
    note_rows(engine.advance_watermark(ev.time));
  }
  note_rows(engine.finish());
  const auto t1 = Clock::now();
  m.elapsed_ms = detail::ms_between(t0, t1);
  m.rows = rows.size();
  if (m.elapsed_ms > 0 && m.events > 0)
    m.throughput_eps = 1000.0 * static_cast<double>(m.events) / m.elapsed_ms;
  EngineMetrics em = engine.metrics();
  m.peak_payload_bytes = em.peak_accounted_bytes();
  m.saturated = em.saturated;
  return rows;
}

inline std::vector<ResultRow> run_oracle_instrumented(
    const Query& q, const std::vector<Event>& events, OracleOptions opt,
    RunMetrics& m) {
  using detail::Clock;
  m.engine = "oracle";
  m.events = events.size();
  const auto t0 = Clock::now();
  std::vector<ResultRow> rows;
  try {
    rows = run_oracle(q, events, opt);
  } catch (const OracleBudgetError&) {
    m.status = "timeout";
  }
  const auto t1 = Clock::now();
  m.elapsed_ms = detail::ms_between(t0, t1);
  m.rows = rows.size();
  // batch evaluation: every result is as stale as the whole run
  m.peak_latency_ms = m.elapsed_ms;
  if (m.elapsed_ms > 0 && m.events > 0 && m.status == "ok")
    m.throughput_eps = 1000.0 * static_cast<double>(m.events) / m.elapsed_ms;
  return rows;
}

/// Largest per-window per-partition event pool the oracle would face.
inline std::size_t max_window_pool(const Query& q,
                                   const std::vector<Event>& events) {
  std::vector<std::string> part_attrs = q.group_by;
  for (const auto& a : q.equivalence_attrs())
    if (std::find(part_attrs.begin(), part_attrs.end(), a) == part_attrs.end())
      part_attrs.push_back(a);
  std::set<std::string> types;
  for (const auto& t : pattern_types(q.pattern)) types.insert(q.base_type(t));
  Time max_time = -1;
  for (const auto& e : events) max_time = std::max(max_time, e.time);
  std::size_t worst = 0;
  if (max_time < 0) return 0;
  for (std::int64_t wid = 0; wid <= q.window.last_window(max_time); ++wid) {
    std::map<std::vector<Value>, std::size_t> sizes;
    for (const auto& e : events) {
      if (e.time < q.window.start(wid) || e.time >= q.window.end(wid) ||
          !types.count(e.type))
        continue;
      worst = std::max(worst, ++sizes[partition_key(e, part_attrs)]);
    }
  }
  return worst;
}

inline void write_metrics_csv(std::ostream& out,
                              const std::vector<RunMetrics>& ms) {
  out << "engine,events,rows,elapsed_ms,throughput_eps,peak_latency_ms,"
         "peak_payload_bytes,saturated,status\n";
  for (const auto& m : ms)
    out << m.engine << "," << m.events << "," << m.rows << "," << m.elapsed_ms
        << "," << m.throughput_eps << "," << m.peak_latency_ms << ","
        << m.peak_payload_bytes << "," << (m.saturated ? 1 : 0) << ","
        << m.status << "\n";
}

inline void print_metrics_table(std::ostream& out,
                                const std::vector<RunMetrics>& ms) {
  out << "engine   events      rows   elapsed_ms  throughput_eps  "
         "peak_latency_ms  peak_payload_bytes  status\n";
  char buf[256];
  for (const auto& m : ms) {
    std::snprintf(buf, sizeof buf,
                  "%-8s %-11llu %-6llu %-11.2f %-15.1f %-16.2f %-19llu %s\n",
                  m.engine.c_str(),
                  static_cast<unsigned long long>(m.events),
                  static_cast<unsigned long long>(m.rows), m.elapsed_ms,
                  m.throughput_eps, m.peak_latency_ms,
                  static_cast<unsigned long long>(m.peak_payload_bytes),
                  m.status.c_str());
    out << buf;
  }
}

}  // namespace greta

#endif
