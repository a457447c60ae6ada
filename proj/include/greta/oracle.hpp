#ifndef GRETA_ORACLE_HPP
#define GRETA_ORACLE_HPP

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/engine.hpp"
#include "greta/event.hpp"
#include "greta/payload.hpp"
#include "greta/query.hpp"
#include "greta/rewrite.hpp"

namespace greta {

/// The two-step reference implementation exceeded its enumeration budget.
class OracleBudgetError : public Error {
public:
  using Error::Error;
};

struct OracleOptions {
  /// Hard cap on events per window pool; exceeding it aborts the run.
  std::size_t max_window_events = 20;
  /// Wall-clock budget; zero means unlimited.
  std::chrono::milliseconds timeout{0};
  /// Cap on materialized trends, so an exponential blow-up aborts instead of
  /// exhausting memory before the wall-clock budget is reached.
  std::uint64_t max_trends = 8'000'000;
  /// Minimal trend length (matches the engine's Kleene-plus unrolling).
  int min_length = 1;
};

/// Brute-force two-step evaluator: enumerates every event trend of the
/// pattern by recursive descent over the pattern syntax, then aggregates the
/// enumerated trends. Deliberately shares no graph machinery with the engine.
class Oracle {
public:
  Oracle(const Query& q, OracleOptions opt = {})
      : q_(q), opt_(opt) {
    for (const auto& p : q.predicates) {
      if (p.kind == Predicate::Kind::Local) local_.push_back(p);
      if (p.kind == Predicate::Kind::Edge) edge_.push_back(p);
    }
    if (opt_.timeout.count() > 0)
      deadline_ = std::chrono::steady_clock::now() + opt_.timeout;
  }

  using Trend = std::vector<int>;  // indices into the event pool

  /// All trends of the query pattern among `pool` (indices into `events`,
  /// time-ordered), all of whose events lie in [lo, hi).
  std::set<Trend> trends(const std::vector<Event>& events,
                         const std::vector<int>& pool, Time lo, Time hi) {
    if (pool.size() > opt_.max_window_events)
      throw OracleBudgetError(
          "window holds " + std::to_string(pool.size()) +
          " events, above the enumeration cap of " +
          std::to_string(opt_.max_window_events));
    evs_ = &events;
    lo_ = lo;
    hi_ = hi;
    Matches m = match(q_.pattern, pool);
    std::set<Trend> out(m.trends.begin(), m.trends.end());
    if (opt_.min_length > 1) {
      for (auto it = out.begin(); it != out.end();)
        it = it->size() < static_cast<std::size_t>(opt_.min_length)
                 ? out.erase(it)
                 : std::next(it);
    }
    return out;
  }

private:
  struct Matches {
    std::vector<Trend> trends;
    bool allows_empty = false;  // an optional/star element may vanish
  };

  void charge() {
    if (++steps_ % 4096 == 0 && deadline_ &&
        std::chrono::steady_clock::now() > *deadline_)
      throw OracleBudgetError("trend enumeration exceeded its time budget");
  }

  void charge_trend() {
    charge();
    if (++stored_trends_ > opt_.max_trends)
      throw OracleBudgetError(
          "trend enumeration exceeded the cap of " +
          std::to_string(opt_.max_trends) + " materialized trends");
  }

  const Event& ev(int i) const { return (*evs_)[i]; }

  bool adjacent_ok(int a, int b) const {
    if (!(ev(a).time < ev(b).time)) return false;
    for (const auto& p : edge_)
      if (q_.base_type(p.subject_type) == ev(a).type &&
          q_.base_type(p.next_type) == ev(b).type && !p.eval_edge(ev(a), ev(b)))
        return false;
    return true;
  }

  Matches match(const Pattern& p, const std::vector<int>& pool) {
    charge();
    switch (p.op) {
      case PatternOp::Type: {
        Matches m;
        for (int i : pool) {
          if (ev(i).type != q_.base_type(p.type)) continue;
          bool ok = true;
          for (const auto& pr : local_)
            if (q_.base_type(pr.subject_type) == ev(i).type &&
                !pr.eval_local(ev(i))) {
              ok = false;
              break;
            }
          if (ok) m.trends.push_back({i});
        }
        return m;
      }
      case PatternOp::Plus: {
        Matches base = match(p.children[0], pool);
        Matches m;
        std::set<Trend> seen;
        // breadth-first closure: repeatedly append one more base match
        std::vector<Trend> frontier = base.trends;
        for (const Trend& t : frontier)
          if (seen.insert(t).second) m.trends.push_back(t);
        while (!frontier.empty()) {
          std::vector<Trend> next;
          for (const Trend& t : frontier) {
            for (const Trend& ext : base.trends) {
              charge();
              if (!adjacent_ok(t.back(), ext.front())) continue;
              Trend joined = t;
              joined.insert(joined.end(), ext.begin(), ext.end());
              if (seen.insert(joined).second) {
                charge_trend();
                m.trends.push_back(joined);
                next.push_back(std::move(joined));
              }
            }
          }
          frontier = std::move(next);
        }
        return m;
      }
      case PatternOp::Star: {
        Matches m = match(Pattern::make_plus(p.children[0]), pool);
        m.allows_empty = true;
        return m;
      }
      case PatternOp::Optional: {
        Matches m = match(p.children[0], pool);
        m.allows_empty = true;
        return m;
      }
      case PatternOp::Seq:
        return match_chain(flatten_seq(p), pool);
      case PatternOp::Not:
        throw Error("negation may only appear inside an event sequence");
    }
    throw Error("unreachable pattern op");
  }

  /// Is there a complete match of the negative pattern strictly inside the
  /// open gap (after, before)? Window bounds stand in for a missing flank.
  bool gap_blocked(const Pattern& negative, const std::vector<int>& pool,
                   std::optional<Time> after, std::optional<Time> before) {
    Matches m = match(negative, pool);
    for (const Trend& t : m.trends) {
      charge();
      if (after && !(ev(t.front()).time > *after)) continue;
      if (before && !(ev(t.back()).time < *before)) continue;
      return true;
    }
    return false;
  }

  Matches match_chain(const std::vector<Pattern>& chain,
                      const std::vector<int>& pool) {
    struct Element {
      const Pattern* negative = nullptr;  // body of a NOT element
      Matches matches;                    // for positive elements
    };
    std::vector<Element> elems;
    for (const auto& c : chain) {
      Element e;
      if (c.op == PatternOp::Not)
        e.negative = &c.children[0];
      else
        e.matches = match(c, pool);
      elems.push_back(std::move(e));
    }

    Matches out;
    std::set<Trend> seen;
    // DFS over the chain, tracking the last bound event and any negation
    // waiting to be checked against the next bound event.
    struct Frame {
      std::size_t pos;
      Trend trend;
      const Pattern* pending_not;
    };
    std::vector<Frame> stack{{0, {}, nullptr}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      charge();
      if (f.pos == elems.size()) {
        if (f.trend.empty()) {
          out.allows_empty = true;
          continue;
        }
        if (f.pending_not &&
            gap_blocked(*f.pending_not, pool,
                        ev(f.trend.back()).time, std::nullopt))
          continue;
        if (seen.insert(f.trend).second) {
          charge_trend();
          out.trends.push_back(f.trend);
        }
        continue;
      }
      Element& e = elems[f.pos];
      if (e.negative) {
        if (f.pending_not)
          throw Error("consecutive negations must be merged");
        Frame nf = f;
        nf.pos = f.pos + 1;
        nf.pending_not = e.negative;
        stack.push_back(std::move(nf));
        continue;
      }
      if (e.matches.allows_empty) {
        Frame skip = f;
        skip.pos = f.pos + 1;
        stack.push_back(std::move(skip));
      }
      for (const Trend& t : e.matches.trends) {
        charge();
        if (!f.trend.empty() && !adjacent_ok(f.trend.back(), t.front()))
          continue;
        if (f.pending_not) {
          std::optional<Time> after;
          if (!f.trend.empty()) after = ev(f.trend.back()).time;
          if (gap_blocked(*f.pending_not, pool, after, ev(t.front()).time))
            continue;
        }
        Frame nf;
        nf.pos = f.pos + 1;
        nf.trend = f.trend;
        nf.trend.insert(nf.trend.end(), t.begin(), t.end());
        nf.pending_not = nullptr;
        stack.push_back(std::move(nf));
      }
    }
    return out;
  }

  const Query& q_;
  OracleOptions opt_;
  std::vector<Predicate> local_;
  std::vector<Predicate> edge_;
  const std::vector<Event>* evs_ = nullptr;
  Time lo_ = 0;
  Time hi_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t stored_trends_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

/// Aggregates an enumerated trend set per the query's aggregate function.
struct TrendAggregate {
  std::uint64_t count = 0;    // trends
  std::uint64_t count_e = 0;  // aggregated-type events, over all trends
  Sum128 sum = 0;
  std::optional<Value> min;
  std::optional<Value> max;
};

inline TrendAggregate aggregate_trends(const Query& q,
                                       const std::vector<Event>& events,
                                       const std::set<Oracle::Trend>& trends) {
  TrendAggregate out;
  const AggregateSpec& a = q.aggregate;
  for (const auto& t : trends) {
    ++out.count;
    if (a.kind == AggregateSpec::Kind::CountStar) continue;
    for (int i : t) {
      const Event& e = events[i];
      if (e.type != a.type) continue;
      ++out.count_e;
      if (!a.needs_attr()) continue;
      const Value v = e.attr(a.attr);
      Sum128 next;
      if (__builtin_add_overflow(out.sum, static_cast<Sum128>(v), &next))
        throw OverflowError("oracle sum overflow");
      out.sum = next;
      if (!out.min || v < *out.min) out.min = v;
      if (!out.max || v > *out.max) out.max = v;
    }
  }
  return out;
}

/// Full-query reference run: per window and per partition, enumerate the
/// trends, aggregate them, and fold partitions into their groups. Produces
/// the same row format as the engine.
inline std::vector<ResultRow> run_oracle(const Query& query,
                                         const std::vector<Event>& events,
                                         OracleOptions opt = {}) {
  ValidationResult vr = validate(query);
  if (!vr.ok()) {
    std::string msg = "invalid query:";
    for (const auto& e : vr.errors) msg += "\n  " + e;
    throw QueryError(msg);
  }
  const Query& q = vr.query;

  std::vector<std::string> part_attrs = q.group_by;
  const std::size_t group_count = part_attrs.size();
  for (const auto& a : q.equivalence_attrs())
    if (std::find(part_attrs.begin(), part_attrs.end(), a) == part_attrs.end())
      part_attrs.push_back(a);

  std::set<std::string> types;
  for (const auto& t : pattern_types(q.pattern)) types.insert(q.base_type(t));

  Time max_time = -1;
  for (const auto& e : events) {
    if (e.time < max_time)
      throw OutOfOrderError("event stream is not in time order");
    max_time = std::max(max_time, e.time);
  }

  std::vector<ResultRow> rows;
  if (max_time < 0) return rows;
  Oracle oracle(q, opt);
  for (std::int64_t wid = 0; wid <= q.window.last_window(max_time); ++wid) {
    const Time lo = q.window.start(wid);
    const Time hi = q.window.end(wid);
    // partition the window pool
    std::map<std::vector<Value>, std::vector<int>> pools;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const Event& e = events[i];
      if (e.time < lo || e.time >= hi || !types.count(e.type)) continue;
      // events missing a partition attribute are rejected (as in the engine)
      bool complete = true;
      for (const auto& a : part_attrs)
        if (!e.has_attr(a)) {
          complete = false;
          break;
        }
      if (!complete) continue;
      pools[partition_key(e, part_attrs)].push_back(static_cast<int>(i));
    }
    std::map<std::vector<Value>, TrendAggregate> groups;
    for (const auto& [key, pool] : pools) {
      std::set<Oracle::Trend> ts = oracle.trends(events, pool, lo, hi);
      if (ts.empty()) continue;
      TrendAggregate ag = aggregate_trends(q, events, ts);
      std::vector<Value> gkey(key.begin(), key.begin() + group_count);
      TrendAggregate& acc = groups[gkey];
      std::uint64_t n;
      if (__builtin_add_overflow(acc.count, ag.count, &n))
        throw OverflowError("oracle count overflow");
      acc.count = n;
      if (__builtin_add_overflow(acc.count_e, ag.count_e, &n))
        throw OverflowError("oracle count overflow");
      acc.count_e = n;
      Sum128 s;
      if (__builtin_add_overflow(acc.sum, ag.sum, &s))
        throw OverflowError("oracle sum overflow");
      acc.sum = s;
      if (ag.min && (!acc.min || *ag.min < *acc.min)) acc.min = ag.min;
      if (ag.max && (!acc.max || *ag.max > *acc.max)) acc.max = ag.max;
    }
    for (const auto& [gkey, acc] : groups) {
      ResultRow row;
      row.window_start = lo;
      row.window_end = hi;
      row.group_key = format_group_key(gkey);
      row.aggregate = q.aggregate.text();
      using K = AggregateSpec::Kind;
      switch (q.aggregate.kind) {
        case K::CountStar: row.value = std::to_string(acc.count); break;
        case K::CountType: row.value = std::to_string(acc.count_e); break;
        case K::Min:
          if (!acc.min) continue;
          row.value = std::to_string(*acc.min);
          break;
        case K::Max:
          if (!acc.max) continue;
          row.value = std::to_string(*acc.max);
          break;
        case K::Sum: row.value = sum_to_string(acc.sum); break;
        case K::Avg:
          if (acc.count_e == 0) continue;
          row.value = format_avg(acc.sum, acc.count_e);
          break;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace greta

#endif
