#ifndef GRETA_ENGINE_HPP
#define GRETA_ENGINE_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "greta/common.hpp"
#include "greta/event.hpp"
#include "greta/graph.hpp"
#include "greta/payload.hpp"
#include "greta/query.hpp"
#include "greta/rewrite.hpp"
#include "greta/template.hpp"

namespace greta {

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

struct CompileOptions {
  CountMode mode = CountMode::Checked;
  bool pruning = true;
  int min_length = 1;  // minimal trend length (Kleene-plus unrolling)
};

/// One disjunction-free alternative of the query pattern: the positive root
/// template plus one template per negative sub-pattern. Graph index 0 is the
/// positive root; graph 1+i hosts negatives[i].
struct CompiledDisjunct {
  SubPatternPlan plan;
  std::vector<Template> templates;   // [0]=positive, [1+i]=negatives[i]
  std::vector<GraphConfig> configs;  // parallel to templates

  struct BindingSpec {
    int negative_graph = 0;  // graph index of the negative sub-pattern
    int parent_graph = 0;    // graph it invalidates
    int prev_state = -1;     // state indices in the parent template
    int foll_state = -1;
    bool prunable = false;
  };
  std::vector<BindingSpec> bindings;
  std::vector<int> depth;  // per graph: distance from the positive root
  int max_depth = 0;
};

struct CompiledQuery {
  Query query;
  CompileOptions options;
  std::vector<CompiledDisjunct> disjuncts;

  struct Target {
    int disjunct = 0;
    int graph = 0;
    int state = 0;
  };
  /// Stream event type -> all template states it feeds.
  std::map<std::string, std::vector<Target>> route;
  /// Local predicates per stream event type, applied before routing.
  std::map<std::string, std::vector<Predicate>> local_by_type;
  /// Partition attributes: grouping attributes first, then equivalence
  /// attributes. A trend never spans two partitions.
  std::vector<std::string> partition_attrs;
  std::size_t group_attr_count = 0;
};

namespace detail {

inline GraphConfig make_graph_config(const Query& q, const Template& t,
                                     const AggConfig& agg,
                                     const CompileOptions& opt,
                                     bool track_start) {
  GraphConfig cfg;
  cfg.window = q.window;
  cfg.agg = agg;
  cfg.mode = opt.mode;
  cfg.pruning = opt.pruning;
  cfg.track_start = track_start;
  cfg.sort_attr.assign(t.states.size(), "");
  cfg.edges_by_to.assign(t.states.size(), {});

  auto base = [&](int s) -> const std::string& {
    return q.base_type(t.states[s]);
  };
  auto edge_preds_for = [&](int from, int to) {
    std::vector<Predicate> out;
    for (const auto& p : q.predicates)
      if (p.kind == Predicate::Kind::Edge &&
          q.base_type(p.subject_type) == base(from) &&
          q.base_type(p.next_type) == base(to))
        out.push_back(p);
    return out;
  };

  // Sort each state's vertex index by the subject attribute of an outgoing
  // indexable edge predicate (equality preferred); otherwise keep time order.
  for (std::size_t s = 0; s < t.states.size(); ++s) {
    std::string chosen;
    bool chosen_eq = false;
    for (int to : t.succs[s]) {
      for (const auto& p : edge_preds_for(static_cast<int>(s), to)) {
        if (p.arith != Arith::None || p.cmp == Cmp::Ne) continue;
        if (chosen.empty() || (p.cmp == Cmp::Eq && !chosen_eq)) {
          chosen = p.subject_attr;
          chosen_eq = p.cmp == Cmp::Eq;
        }
      }
    }
    cfg.sort_attr[s] = chosen;
  }

  for (std::size_t to = 0; to < t.states.size(); ++to) {
    std::vector<int> froms = t.preds[to];
    std::sort(froms.begin(), froms.end());
    froms.erase(std::unique(froms.begin(), froms.end()), froms.end());
    for (int from : froms) {
      GraphConfig::EdgeGroup g;
      g.from_state = from;
      g.preds = edge_preds_for(from, static_cast<int>(to));
      for (std::size_t i = 0; i < g.preds.size(); ++i) {
        const Predicate& p = g.preds[i];
        if (p.arith == Arith::None && p.cmp != Cmp::Ne &&
            p.subject_attr == cfg.sort_attr[from]) {
          g.index_pred = static_cast<int>(i);
          break;
        }
      }
      cfg.edges_by_to[to].push_back(std::move(g));
    }
  }
  return cfg;
}

}  // namespace detail

/// Validates, rewrites and plans a query for execution.
inline CompiledQuery compile(const Query& q, CompileOptions opt = {}) {
  ValidationResult vr = validate(q);
  if (!vr.ok()) {
    std::string msg = "invalid query:";
    for (const auto& e : vr.errors) msg += "\n  " + e;
    throw QueryError(msg);
  }
  CompiledQuery cq;
  cq.query = vr.query;
  if (opt.min_length > 1) cq.query = unroll_min_length(cq.query, opt.min_length);
  cq.options = opt;

  for (const Pattern& dp : desugar(cq.query.pattern)) {
    CompiledDisjunct d;
    d.plan = split_pattern(dp);
    d.templates.push_back(generate_template(d.plan.positive));
    for (const auto& neg : d.plan.negatives)
      d.templates.push_back(generate_template(neg.pattern));

    AggConfig agg = AggConfig::for_spec(cq.query.aggregate, d.templates[0],
                                        cq.query.aliases);
    d.configs.push_back(
        detail::make_graph_config(cq.query, d.templates[0], agg, opt, false));
    for (std::size_t i = 0; i < d.plan.negatives.size(); ++i) {
      AggConfig nagg = AggConfig::for_negative();
      d.configs.push_back(detail::make_graph_config(
          cq.query, d.templates[1 + i], nagg, opt, true));
    }

    d.depth.assign(d.templates.size(), 0);
    for (std::size_t i = 0; i < d.plan.negatives.size(); ++i) {
      const NegativeSub& neg = d.plan.negatives[i];
      CompiledDisjunct::BindingSpec b;
      b.negative_graph = static_cast<int>(1 + i);
      b.parent_graph = neg.parent < 0 ? 0 : 1 + neg.parent;
      const Template& pt = d.templates[b.parent_graph];
      if (neg.previous_type) b.prev_state = pt.index_of(*neg.previous_type);
      if (neg.following_type) b.foll_state = pt.index_of(*neg.following_type);
      if (b.prev_state >= 0 && b.foll_state >= 0) {
        const auto& fp = pt.preds[b.foll_state];
        const auto& ps = pt.succs[b.prev_state];
        b.prunable = fp.size() == 1 && fp[0] == b.prev_state &&
                     ps.size() == 1 && ps[0] == b.foll_state &&
                     b.prev_state != pt.end_index();
      }
      d.depth[b.negative_graph] = d.depth[b.parent_graph] + 1;
      d.bindings.push_back(b);
    }
    for (int dep : d.depth) d.max_depth = std::max(d.max_depth, dep);
    cq.disjuncts.push_back(std::move(d));
  }

  // routing and per-type local predicates
  for (std::size_t di = 0; di < cq.disjuncts.size(); ++di) {
    const CompiledDisjunct& d = cq.disjuncts[di];
    for (std::size_t gi = 0; gi < d.templates.size(); ++gi) {
      const Template& t = d.templates[gi];
      for (std::size_t si = 0; si < t.states.size(); ++si) {
        const std::string& stream_type = cq.query.base_type(t.states[si]);
        cq.route[stream_type].push_back({static_cast<int>(di),
                                         static_cast<int>(gi),
                                         static_cast<int>(si)});
      }
    }
  }
  for (const auto& p : cq.query.predicates)
    if (p.kind == Predicate::Kind::Local)
      cq.local_by_type[cq.query.base_type(p.subject_type)].push_back(p);

  cq.partition_attrs = cq.query.group_by;
  cq.group_attr_count = cq.partition_attrs.size();
  for (const auto& a : cq.query.equivalence_attrs())
    if (std::find(cq.partition_attrs.begin(), cq.partition_attrs.end(), a) ==
        cq.partition_attrs.end())
      cq.partition_attrs.push_back(a);
  return cq;
}

/// Partition key of an event: the values of the partition attributes.
inline std::vector<Value> partition_key(const Event& e,
                                        const std::vector<std::string>& attrs) {
  std::vector<Value> key;
  key.reserve(attrs.size());
  for (const auto& a : attrs) key.push_back(e.attr(a));
  return key;
}

/// Query-level partition key: grouping values followed by equivalence
/// values, without de-duplication (an attribute in both lists appears twice).
inline std::vector<Value> partition_key(const Event& e, const Query& q) {
  std::vector<std::string> attrs = q.group_by;
  for (const auto& a : q.equivalence_attrs()) attrs.push_back(a);
  return partition_key(e, attrs);
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct ResultRow {
  Time window_start = 0;
  Time window_end = 0;
  std::string group_key;
  std::string aggregate;
  std::string value;

  bool operator==(const ResultRow& o) const {
    return window_start == o.window_start && window_end == o.window_end &&
           group_key == o.group_key && aggregate == o.aggregate &&
           value == o.value;
  }
};

struct EngineMetrics {
  std::uint64_t events = 0;          // ingested stream events
  std::uint64_t matched = 0;         // vertices created in positive graphs
  std::uint64_t live_vertices = 0;   // all graphs
  std::uint64_t live_slots = 0;
  std::uint64_t total_slots = 0;     // slots ever created in positive graphs
  std::uint64_t peak_live_vertices = 0;  // sum of per-graph peaks
  std::uint64_t peak_live_slots = 0;
  std::uint64_t invalidated = 0;
  std::uint64_t pruned = 0;
  std::uint64_t dropped = 0;  // rejected events (counted warnings)
  bool saturated = false;

  /// Bytes attributable to live graph state: vertex records, payload slots
  /// and index entries.
  std::uint64_t accounted_bytes() const {
    return live_vertices * (sizeof(TrendGraph::Vertex) + sizeof(std::uint32_t)) +
           live_slots * sizeof(TrendGraph::PayloadSlot);
  }
  std::uint64_t peak_accounted_bytes() const {
    return peak_live_vertices *
               (sizeof(TrendGraph::Vertex) + sizeof(std::uint32_t)) +
           peak_live_slots * sizeof(TrendGraph::PayloadSlot);
  }
};

inline std::string format_group_key(const std::vector<Value>& key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += "|";
    out += std::to_string(key[i]);
  }
  return out;
}

/// AVG rendered as a decimal with up to six fractional digits (at least one).
inline std::string format_avg(Sum128 sum, std::uint64_t cnt) {
  if (cnt == 0) throw Error("average of an empty event set");
  const bool neg = sum < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(sum)
                            : static_cast<unsigned __int128>(sum);
  unsigned __int128 q = u / cnt;
  unsigned __int128 r = u % cnt;
  std::string frac;
  for (int i = 0; i < 6 && (r != 0 || frac.empty()); ++i) {
    r *= 10;
    frac += static_cast<char>('0' + int(r / cnt));
    r %= cnt;
  }
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  std::string out = sum_to_string(static_cast<Sum128>(q)) + "." + frac;
  return neg && (q != 0 || frac != "0") ? "-" + out : out;
}

/// Incremental engine over one in-order stream. Events with equal timestamps
/// form one transaction; dependent (negative) graphs consume a transaction
/// before the graphs they invalidate.
class Engine {
public:
  /// In lenient mode an out-of-order event is dropped and counted instead of
  /// raising an error.
  explicit Engine(const CompiledQuery& cq, bool lenient = false)
      : cq_(cq), lenient_(lenient) {}

  void ingest(const Event& ev) {
    if (last_time_ && ev.time < *last_time_) {
      if (lenient_) {
        ++dropped_;
        ++metrics_events_;
        return;
      }
      throw OutOfOrderError(
          "event #" + std::to_string(next_seq_) + " at time " +
          std::to_string(ev.time) + " arrived after time " +
          std::to_string(*last_time_));
    }
    if (last_time_ && ev.time > *last_time_) flush_transaction();
    last_time_ = ev.time;
    ++metrics_events_;
    if (cq_.route.count(ev.type)) {
      for (const auto& a : cq_.partition_attrs)
        if (!ev.has_attr(a)) {
          ++dropped_;  // missing partition attribute: reject with a warning
          return;
        }
    }
    batch_.push_back(ev);
    batch_.back().seq = next_seq_++;
  }

  /// Emits every window that ends at or before `t`, then discards panes no
  /// longer covered by any open window.
  std::vector<ResultRow> advance_watermark(Time t) {
    if (last_time_ && t > *last_time_) flush_transaction();
    std::vector<ResultRow> rows;
    const WindowSpec& w = cq_.query.window;
    if (t < w.size) return rows;
    const std::int64_t upto = (t - w.size) / w.slide;
    const std::int64_t last_data =
        last_time_ ? w.last_window(*last_time_) : -1;
    for (; next_wid_ <= std::min(upto, last_data); ++next_wid_)
      emit_window(next_wid_, rows);
    if (upto >= next_wid_) next_wid_ = upto + 1;
    const Time keep_from = next_wid_ * w.slide;
    for (auto& [key, kr] : keys_)
      for (auto& d : kr.disjuncts)
        for (auto& g : d.graphs) g->purge_expired(keep_from);
    return rows;
  }

  /// Flushes the pending transaction and emits all remaining windows.
  std::vector<ResultRow> finish() {
    flush_transaction();
    std::vector<ResultRow> rows;
    if (!last_time_) return rows;
    const std::int64_t last_data = cq_.query.window.last_window(*last_time_);
    for (; next_wid_ <= last_data; ++next_wid_)
      emit_window(next_wid_, rows);
    return rows;
  }

  EngineMetrics metrics() const {
    EngineMetrics m;
    m.events = metrics_events_;
    m.dropped = dropped_;
    m.saturated = saturated_finals_;
    for (const auto& [key, kr] : keys_) {
      for (const auto& d : kr.disjuncts) {
        for (std::size_t gi = 0; gi < d.graphs.size(); ++gi) {
          const GraphStats& s = d.graphs[gi]->stats();
          m.live_vertices += s.live_vertices;
          m.live_slots += s.live_slots;
          m.peak_live_vertices += s.peak_live_vertices;
          m.peak_live_slots += s.peak_live_slots;
          m.saturated |= d.graphs[gi]->saturated();
          if (gi == 0) {
            m.matched += s.inserted;
            m.total_slots += s.total_slots;
          }
        }
        for (const auto& b : d.bindings) {
          m.invalidated += b->invalidated_total;
          m.pruned += b->purged_total;
        }
      }
    }
    return m;
  }

  std::size_t partition_count() const { return keys_.size(); }

  /// Test accessor: the graph for a partition key (empty key when the query
  /// has no partition attributes).
  TrendGraph* graph(const std::vector<Value>& key, int disjunct, int g) {
    auto it = keys_.find(key);
    if (it == keys_.end()) return nullptr;
    return it->second.disjuncts[disjunct].graphs[g].get();
  }

private:
  struct DisjunctRuntime {
    std::vector<std::unique_ptr<TrendGraph>> graphs;
    std::vector<std::unique_ptr<NegationBinding>> bindings;
  };
  struct KeyRuntime {
    std::vector<DisjunctRuntime> disjuncts;
  };

  KeyRuntime& runtime_for(const std::vector<Value>& key) {
    auto it = keys_.find(key);
    if (it != keys_.end()) return it->second;
    KeyRuntime kr;
    for (const auto& d : cq_.disjuncts) {
      DisjunctRuntime dr;
      for (std::size_t gi = 0; gi < d.templates.size(); ++gi)
        dr.graphs.push_back(
            std::make_unique<TrendGraph>(&d.templates[gi], d.configs[gi]));
      for (const auto& bs : d.bindings) {
        auto b = std::make_unique<NegationBinding>();
        b->id = static_cast<int>(dr.bindings.size());
        b->parent = dr.graphs[bs.parent_graph].get();
        b->negative = dr.graphs[bs.negative_graph].get();
        b->prev_state = bs.prev_state;
        b->foll_state = bs.foll_state;
        b->prunable = bs.prunable;
        b->parent->register_incoming(b.get());
        b->negative->register_outgoing(b.get());
        dr.bindings.push_back(std::move(b));
      }
      kr.disjuncts.push_back(std::move(dr));
    }
    return keys_.emplace(key, std::move(kr)).first->second;
  }

  void flush_transaction() {
    if (batch_.empty()) return;
    std::vector<KeyRuntime*> touched;
    int max_depth = 0;
    for (const auto& d : cq_.disjuncts)
      max_depth = std::max(max_depth, d.max_depth);
    for (int depth = max_depth; depth >= 0; --depth) {
      for (const Event& ev : batch_) {
        auto rit = cq_.route.find(ev.type);
        if (rit == cq_.route.end()) continue;
        auto lit = cq_.local_by_type.find(ev.type);
        if (lit != cq_.local_by_type.end()) {
          bool ok = true;
          for (const auto& p : lit->second)
            if (!p.eval_local(ev)) {
              ok = false;
              break;
            }
          if (!ok) continue;
        }
        std::optional<std::vector<Value>> key;
        std::vector<std::int64_t> windows;
        for (const auto& tgt : rit->second) {
          if (cq_.disjuncts[tgt.disjunct].depth[tgt.graph] != depth) continue;
          if (!key) {
            key = partition_key(ev, cq_.partition_attrs);
            windows = assign_windows(ev.time, cq_.query.window);
          }
          if (windows.empty()) continue;
          KeyRuntime& kr = runtime_for(*key);
          if (std::find(touched.begin(), touched.end(), &kr) == touched.end())
            touched.push_back(&kr);
          kr.disjuncts[tgt.disjunct].graphs[tgt.graph]->insert(ev, tgt.state,
                                                              windows);
        }
      }
    }
    for (KeyRuntime* kr : touched)
      for (auto& d : kr->disjuncts)
        for (auto& g : d.graphs) g->finish_transaction();
    batch_.clear();
  }

  void emit_window(std::int64_t wid, std::vector<ResultRow>& rows) {
    const WindowSpec& w = cq_.query.window;
    struct Acc {
      AggregatePayload p;
    };
    std::map<std::vector<Value>, Acc> groups;
    const CountMode mode = cq_.options.mode;
    for (auto& [key, kr] : keys_) {
      std::optional<AggregatePayload> combined;
      for (auto& d : kr.disjuncts) {
        std::optional<AggregatePayload> f = d.graphs[0]->fold_final(wid);
        if (!f) continue;
        if (!combined) combined.emplace();
        // alternatives match disjoint trend sets, so the overlap is zero
        combined->count =
            combine_disjunction_count(combined->count, f->count, 0);
        saturated_finals_ |=
            add_count(combined->count_e, f->count_e, mode, "count", wid);
        saturated_finals_ |= add_sum(combined->sum, f->sum, mode, wid);
        if (f->has_min) {
          combined->min =
              combined->has_min ? std::min(combined->min, f->min) : f->min;
          combined->has_min = true;
        }
        if (f->has_max) {
          combined->max =
              combined->has_max ? std::max(combined->max, f->max) : f->max;
          combined->has_max = true;
        }
      }
      if (!combined) continue;
      std::vector<Value> gkey(key.begin(),
                              key.begin() + cq_.group_attr_count);
      Acc& acc = groups[gkey];
      saturated_finals_ |=
          add_count(acc.p.count, combined->count, mode, "count", wid);
      saturated_finals_ |=
          add_count(acc.p.count_e, combined->count_e, mode, "count", wid);
      saturated_finals_ |= add_sum(acc.p.sum, combined->sum, mode, wid);
      if (combined->has_min) {
        acc.p.min =
            acc.p.has_min ? std::min(acc.p.min, combined->min) : combined->min;
        acc.p.has_min = true;
      }
      if (combined->has_max) {
        acc.p.max =
            acc.p.has_max ? std::max(acc.p.max, combined->max) : combined->max;
        acc.p.has_max = true;
      }
    }
    for (const auto& [gkey, acc] : groups) {
      ResultRow row;
      row.window_start = w.start(wid);
      row.window_end = w.end(wid);
      row.group_key = format_group_key(gkey);
      row.aggregate = cq_.query.aggregate.text();
      using K = AggregateSpec::Kind;
      switch (cq_.query.aggregate.kind) {
        case K::CountStar:
          row.value = std::to_string(acc.p.count);
          break;
        case K::CountType:
          row.value = std::to_string(acc.p.count_e);
          break;
        case K::Min:
          if (!acc.p.has_min) continue;
          row.value = std::to_string(acc.p.min);
          break;
        case K::Max:
          if (!acc.p.has_max) continue;
          row.value = std::to_string(acc.p.max);
          break;
        case K::Sum:
          row.value = sum_to_string(acc.p.sum);
          break;
        case K::Avg:
          if (acc.p.count_e == 0) continue;
          row.value = format_avg(acc.p.sum, acc.p.count_e);
          break;
      }
      rows.push_back(std::move(row));
    }
  }

  const CompiledQuery& cq_;
  std::map<std::vector<Value>, KeyRuntime> keys_;
  std::vector<Event> batch_;
  std::optional<Time> last_time_;
  std::uint64_t next_seq_ = 0;
  std::int64_t next_wid_ = 0;
  std::uint64_t metrics_events_ = 0;
  std::uint64_t dropped_ = 0;
  bool lenient_ = false;
  bool saturated_finals_ = false;
};

/// Runs a whole stream through the engine, emitting windows as the stream
/// passes them.
inline std::vector<ResultRow> run_engine(const CompiledQuery& cq,
                                         const std::vector<Event>& events,
                                         EngineMetrics* metrics = nullptr) {
  Engine e(cq);
  std::vector<ResultRow> rows;
  for (const Event& ev : events) {
    e.ingest(ev);
    auto emitted = e.advance_watermark(ev.time);
    rows.insert(rows.end(), emitted.begin(), emitted.end());
  }
  auto rest = e.finish();
  rows.insert(rows.end(), rest.begin(), rest.end());
  if (metrics) *metrics = e.metrics();
  return rows;
}

/// Multi-threaded variant: partitions are sharded over worker threads by
/// grouping attributes, so each group is aggregated entirely in one worker.
/// The merged rows are sorted; with one thread it falls back to run_engine.
inline std::vector<ResultRow> run_engine_parallel(
    const CompiledQuery& cq, const std::vector<Event>& events, int threads) {
  auto order = [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.window_start, a.group_key) <
           std::tie(b.window_start, b.group_key);
  };
  if (threads <= 1 || cq.group_attr_count == 0) {
    std::vector<ResultRow> rows = run_engine(cq, events);
    std::stable_sort(rows.begin(), rows.end(), order);
    return rows;
  }
  std::vector<std::string> gattrs(
      cq.partition_attrs.begin(),
      cq.partition_attrs.begin() + cq.group_attr_count);
  std::vector<std::vector<Event>> shards(threads);
  for (const Event& ev : events) {
    if (!cq.route.count(ev.type)) continue;
    std::size_t h = 1469598103934665603ull;
    for (Value v : partition_key(ev, gattrs)) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    shards[h % threads].push_back(ev);
  }
  std::vector<std::vector<ResultRow>> results(threads);
  std::vector<std::thread> workers;
  for (int i = 0; i < threads; ++i)
    workers.emplace_back(
        [&, i] { results[i] = run_engine(cq, shards[i]); });
  for (auto& t : workers) t.join();
  std::vector<ResultRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  std::stable_sort(rows.begin(), rows.end(), order);
  return rows;
}

}  // namespace greta

#endif
