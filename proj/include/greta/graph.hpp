#ifndef GRETA_GRAPH_HPP
#define GRETA_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "greta/common.hpp"
#include "greta/event.hpp"
#include "greta/payload.hpp"
#include "greta/query.hpp"
#include "greta/template.hpp"

namespace greta {

class TrendGraph;

/// Connection between a negative sub-pattern graph and the graph it
/// invalidates. prev_state/foll_state are state indices in the parent
/// template; -1 when the flank is absent (trailing / leading negation).
struct NegationBinding {
  int id = 0;
  TrendGraph* parent = nullptr;
  TrendGraph* negative = nullptr;
  int prev_state = -1;
  int foll_state = -1;
  bool prunable = false;  // invalid-event pruning applies (Theorem 4 shape)

  /// Case 1: per parent vertex, per window, the earliest negative-trend end
  /// time after which the vertex may not connect to foll_state events.
  /// Multiple negative matches compose by taking the minimum.
  std::unordered_map<std::uint32_t, std::map<std::int64_t, Time>> marks;
  /// Case 2 (trailing negation): per window, the latest negative-trend start;
  /// END vertices older than it do not contribute to the final aggregate.
  std::map<std::int64_t, Time> latest_trend_start;
  /// Case 3 (leading negation): per window, the earliest negative-trend end;
  /// START events after it may not begin a new trend.
  std::map<std::int64_t, Time> earliest_trend_end;

  std::uint64_t invalidated_total = 0;
  std::uint64_t purged_total = 0;
};

/// Which payload fields a graph maintains, derived from the aggregate spec.
struct AggConfig {
  bool count = false;
  bool count_e = false;
  bool min = false;
  bool max = false;
  bool sum = false;
  int agg_state = -1;        // state of the aggregated event type, -1 if none
  std::string agg_attr;

  static AggConfig for_spec(const AggregateSpec& spec, const Template& t,
                            const std::map<std::string, std::string>& aliases);
  static AggConfig for_negative() {
    AggConfig c;
    return c;  // presence tracking only
  }
};

inline AggConfig AggConfig::for_spec(
    const AggregateSpec& spec, const Template& t,
    const std::map<std::string, std::string>& aliases) {
  AggConfig c;
  using K = AggregateSpec::Kind;
  switch (spec.kind) {
    case K::CountStar: c.count = true; break;
    case K::CountType: c.count = true; c.count_e = true; break;
    case K::Min: c.min = true; break;
    case K::Max: c.max = true; break;
    case K::Sum: c.count = true; c.sum = true; break;
    case K::Avg: c.count = true; c.count_e = true; c.sum = true; break;
  }
  c.agg_attr = spec.attr;
  if (spec.kind != K::CountStar) {
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      auto it = aliases.find(t.states[i]);
      const std::string& base = it == aliases.end() ? t.states[i] : it->second;
      if (base == spec.type) {
        c.agg_state = static_cast<int>(i);
        break;
      }
    }
  }
  return c;
}

struct GraphConfig {
  WindowSpec window;
  AggConfig agg;
  CountMode mode = CountMode::Checked;
  bool track_start = false;  // negative graphs record trend start times
  bool pruning = true;
  /// Per-state vertex index sort attribute (empty: insertion order, which is
  /// time order for an in-order stream).
  std::vector<std::string> sort_attr;
  /// Edge predicates grouped per (to-state, from-state). index_pred selects
  /// the predicate answered by a range query on the sorted index, -1 if the
  /// index is scanned fully.
  struct EdgeGroup {
    int from_state = -1;
    std::vector<Predicate> preds;
    int index_pred = -1;
  };
  std::vector<std::vector<EdgeGroup>> edges_by_to;  // [to_state]
};

struct GraphStats {
  std::uint64_t inserted = 0;       // vertices ever created (matched events)
  std::uint64_t live_vertices = 0;
  std::uint64_t live_slots = 0;
  std::uint64_t total_slots = 0;
  std::uint64_t peak_live_vertices = 0;
  std::uint64_t peak_live_slots = 0;
};

/// Runtime GRETA graph for one template and one stream partition. Edges are
/// never materialized: each vertex payload is computed once from its
/// predecessors' payloads at insertion and never mutated afterwards.
class TrendGraph {
public:
  struct PayloadSlot {
    std::int64_t wid = 0;
    AggregatePayload p;
  };

  struct Vertex {
    Time time = 0;
    std::uint64_t seq = 0;
    std::uint16_t state = 0;
    bool alive = true;
    Value sort_key = 0;
    std::uint32_t slot_begin = 0;
    std::uint16_t slot_count = 0;
    Event event;
  };

  TrendGraph(const Template* tmpl, GraphConfig cfg)
      : tmpl_(tmpl), cfg_(std::move(cfg)) {
    pane_len_ = std::gcd(cfg_.window.size, cfg_.window.slide);
    if (cfg_.sort_attr.empty()) cfg_.sort_attr.resize(tmpl_->states.size());
    if (cfg_.edges_by_to.empty()) cfg_.edges_by_to.resize(tmpl_->states.size());
  }

  const Template& tmpl() const { return *tmpl_; }
  const GraphConfig& config() const { return cfg_; }
  const GraphStats& stats() const { return stats_; }
  bool saturated() const { return saturated_; }
  Time pane_length() const { return pane_len_; }

  std::vector<NegationBinding*>& incoming_bindings() { return incoming_; }
  std::vector<NegationBinding*>& outgoing_bindings() { return outgoing_; }

  void register_incoming(NegationBinding* b) {
    incoming_.push_back(b);
    if (b->prev_state >= 0 && b->foll_state >= 0)
      case1_by_pair_[pair_key(b->prev_state, b->foll_state)].push_back(b);
    else if (b->prev_state >= 0)
      case2_.push_back(b);
    else
      case3_.push_back(b);
  }
  void register_outgoing(NegationBinding* b) { outgoing_.push_back(b); }

  /// Inserts a stream event of the given template state for the given
  /// windows. Returns false when the event matches nothing (a MID/END event
  /// with no predecessor in any window, per the insertion rule).
  bool insert(const Event& ev, int state,
              const std::vector<std::int64_t>& windows) {
    const bool is_start = state == tmpl_->start_index();
    const bool is_agg = state == cfg_.agg.agg_state;
    const Value own_attr =
        (is_agg && !cfg_.agg.agg_attr.empty()) ? ev.attr(cfg_.agg.agg_attr) : 0;

    tmp_slots_.clear();
    bool any = false;
    for (std::int64_t wid : windows) {
      AggregatePayload p;
      bool present = false;
      const bool start_inc = is_start && start_allowed(wid, ev.time);

      scan_predecessors(state, ev, wid,
                        [&](const Vertex&, const AggregatePayload& pp) {
        present = true;
        if (cfg_.agg.count)
          saturated_ |= add_count(p.count, pp.count, cfg_.mode, "count", wid);
        if (cfg_.agg.count_e)
          saturated_ |=
              add_count(p.count_e, pp.count_e, cfg_.mode, "count", wid);
        if (cfg_.agg.min && pp.has_min) {
          p.min = p.has_min ? std::min(p.min, pp.min) : pp.min;
          p.has_min = true;
        }
        if (cfg_.agg.max && pp.has_max) {
          p.max = p.has_max ? std::max(p.max, pp.max) : pp.max;
          p.has_max = true;
        }
        if (cfg_.agg.sum)
          saturated_ |= add_sum(p.sum, pp.sum, cfg_.mode, wid);
        if (cfg_.track_start)
          p.trend_start = std::max(p.trend_start, pp.trend_start);
      });

      if (start_inc) {
        present = true;
        if (cfg_.agg.count)
          saturated_ |= add_count(p.count, 1, cfg_.mode, "count", wid);
        if (cfg_.track_start) p.trend_start = std::max(p.trend_start, ev.time);
      }
      if (!present) continue;
      // own contributions of an aggregated-type event (count computed first)
      if (is_agg) {
        if (cfg_.agg.count_e)
          saturated_ |=
              add_count(p.count_e, p.count, cfg_.mode, "count", wid);
        if (cfg_.agg.min) {
          p.min = p.has_min ? std::min(p.min, own_attr) : own_attr;
          p.has_min = true;
        }
        if (cfg_.agg.max) {
          p.max = p.has_max ? std::max(p.max, own_attr) : own_attr;
          p.has_max = true;
        }
        if (cfg_.agg.sum) {
          Sum128 term;
          if (__builtin_mul_overflow(static_cast<Sum128>(own_attr),
                                     static_cast<Sum128>(p.count), &term)) {
            if (cfg_.mode == CountMode::Checked)
              throw OverflowError("sum overflow in window " +
                                  std::to_string(wid));
            term = own_attr >= 0 ? kSum128Max : kSum128Min;
            saturated_ = true;
          }
          saturated_ |= add_sum(p.sum, term, cfg_.mode, wid);
        }
      }
      tmp_slots_.push_back({wid, p});
      any = true;
    }
    if (!any) return false;

    const std::uint32_t id = static_cast<std::uint32_t>(vertices_.size());
    Vertex v;
    v.time = ev.time;
    v.seq = ev.seq;
    v.state = static_cast<std::uint16_t>(state);
    v.slot_begin = static_cast<std::uint32_t>(slots_.size());
    v.slot_count = static_cast<std::uint16_t>(tmp_slots_.size());
    const std::string& sattr = cfg_.sort_attr[state];
    v.sort_key = sattr.empty() ? ev.time : ev.attr(sattr);
    v.event = ev;
    vertices_.push_back(std::move(v));
    for (const auto& s : tmp_slots_) slots_.push_back(s);

    bucket_for(ev.time, state).insert_sorted(id, vertices_);

    ++stats_.inserted;
    ++stats_.live_vertices;
    stats_.live_slots += tmp_slots_.size();
    stats_.total_slots += tmp_slots_.size();
    stats_.peak_live_vertices =
        std::max(stats_.peak_live_vertices, stats_.live_vertices);
    stats_.peak_live_slots = std::max(stats_.peak_live_slots, stats_.live_slots);

    if (cfg_.track_start && state == tmpl_->end_index())
      on_negative_trend_end(id);
    return true;
  }

  /// Valid predecessor vertices of a hypothetical event, for inspection and
  /// the path-equivalence tests. The production path folds during the scan.
  std::vector<std::uint32_t> predecessor_events(const Event& ev, int state,
                                                std::int64_t wid) {
    std::vector<std::uint32_t> out;
    scan_predecessors_ids(state, ev, wid,
                          [&](std::uint32_t id) { out.push_back(id); });
    return out;
  }

  /// Final aggregate payload of a window: fold of the END-vertex payloads,
  /// honoring trailing-negation invalidation.
  std::optional<AggregatePayload> fold_final(std::int64_t wid) {
    const int end_state = tmpl_->end_index();
    std::optional<AggregatePayload> out;
    for_window_vertices(end_state, wid, [&](const Vertex& v,
                                            const AggregatePayload& p) {
      for (const NegationBinding* b : case2_) {
        auto it = b->latest_trend_start.find(wid);
        if (it != b->latest_trend_start.end() && v.time < it->second) return;
      }
      if (!out) out.emplace();
      if (cfg_.agg.count)
        saturated_ |= add_count(out->count, p.count, cfg_.mode, "count", wid);
      if (cfg_.agg.count_e)
        saturated_ |=
            add_count(out->count_e, p.count_e, cfg_.mode, "count", wid);
      if (cfg_.agg.min && p.has_min) {
        out->min = out->has_min ? std::min(out->min, p.min) : p.min;
        out->has_min = true;
      }
      if (cfg_.agg.max && p.has_max) {
        out->max = out->has_max ? std::max(out->max, p.max) : p.max;
        out->has_max = true;
      }
      if (cfg_.agg.sum) saturated_ |= add_sum(out->sum, p.sum, cfg_.mode, wid);
    });
    return out;
  }

  /// Completes a stream transaction: performs the invalid-event pruning
  /// deferred while same-timestamp events could still connect to marked
  /// vertices.
  void finish_transaction() {
    for (const auto& [b, id] : pending_invalid_) prune_invalid(*b, {id});
    pending_invalid_.clear();
  }

  /// Deletes all panes that end at or before `time`, with their indexes.
  void purge_expired(Time time) {
    while (!panes_.empty() && (first_pane_ + 1) * pane_len_ <= time) {
      for (auto& bucket : panes_.front().buckets) {
        for (std::uint32_t id : bucket.ids) {
          if (vertices_[id].alive) {
            vertices_[id].alive = false;
            --stats_.live_vertices;
            stats_.live_slots -= vertices_[id].slot_count;
          }
        }
      }
      panes_.pop_front();
      ++first_pane_;
    }
  }

  /// One line per vertex: "TYPE time : agg[,agg...]".
  std::string dump() const {
    std::string out;
    for (const auto& v : vertices_) {
      if (!v.alive) continue;
      out += tmpl_->states[v.state] + " " + std::to_string(v.time) + " :";
      for (int i = 0; i < v.slot_count; ++i) {
        const AggregatePayload& p = slots_[v.slot_begin + i].p;
        out += (i ? "," : " ") + payload_text(p);
      }
      out += "\n";
    }
    return out;
  }

  /// Test accessor: payload of the unique live vertex with this state name
  /// and time stamp.
  std::optional<AggregatePayload> payload_of(const std::string& type, Time time,
                                             std::int64_t wid) const {
    for (const auto& v : vertices_) {
      if (!v.alive || v.time != time || tmpl_->states[v.state] != type)
        continue;
      for (int i = 0; i < v.slot_count; ++i)
        if (slots_[v.slot_begin + i].wid == wid)
          return slots_[v.slot_begin + i].p;
    }
    return std::nullopt;
  }

  bool has_live_vertex(const std::string& type, Time time) const {
    for (const auto& v : vertices_)
      if (v.alive && v.time == time && tmpl_->states[v.state] == type)
        return true;
    return false;
  }

private:
  struct Bucket {
    std::vector<std::uint32_t> ids;
    bool sorted_by_key = false;

    void insert_sorted(std::uint32_t id, const std::vector<Vertex>& vs) {
      if (!sorted_by_key) {
        ids.push_back(id);  // insertion order == time order
        return;
      }
      const Value key = vs[id].sort_key;
      auto it = std::upper_bound(ids.begin(), ids.end(), key,
                                 [&](Value k, std::uint32_t v) {
                                   return k < vs[v].sort_key;
                                 });
      ids.insert(it, id);
    }
    void erase(std::uint32_t id) {
      auto it = std::find(ids.begin(), ids.end(), id);
      if (it != ids.end()) ids.erase(it);
    }
  };

  struct Pane {
    std::vector<Bucket> buckets;  // one per state
  };

  static std::uint32_t pair_key(int from, int to) {
    return static_cast<std::uint32_t>(from) << 16 | static_cast<std::uint32_t>(to);
  }

  Bucket& bucket_for(Time t, int state) {
    const std::int64_t pane = t / pane_len_;
    if (panes_.empty()) first_pane_ = pane;
    while (first_pane_ + static_cast<std::int64_t>(panes_.size()) <= pane) {
      Pane p;
      p.buckets.resize(tmpl_->states.size());
      for (std::size_t s = 0; s < tmpl_->states.size(); ++s)
        p.buckets[s].sorted_by_key = !cfg_.sort_attr[s].empty();
      panes_.push_back(std::move(p));
    }
    return panes_[pane - first_pane_].buckets[state];
  }

  bool start_allowed(std::int64_t wid, Time t) const {
    for (const NegationBinding* b : case3_) {
      auto it = b->earliest_trend_end.find(wid);
      if (it != b->earliest_trend_end.end() && t > it->second) return false;
    }
    return true;
  }

  const AggregatePayload* slot_for(const Vertex& v, std::int64_t wid) const {
    for (int i = 0; i < v.slot_count; ++i)
      if (slots_[v.slot_begin + i].wid == wid) return &slots_[v.slot_begin + i].p;
    return nullptr;
  }

  bool blocked_by_case1(std::uint32_t id, int from_state, int to_state,
                        std::int64_t wid, Time etime) const {
    auto git = case1_by_pair_.find(pair_key(from_state, to_state));
    if (git == case1_by_pair_.end()) return false;
    for (const NegationBinding* b : git->second) {
      auto vit = b->marks.find(id);
      if (vit == b->marks.end()) continue;
      auto wit = vit->second.find(wid);
      if (wit != vit->second.end() && wit->second < etime) return true;
    }
    return false;
  }

  /// Iterates all live vertices of a state whose time lies in window `wid`
  /// and strictly before `before` (pass window end to take the whole window).
  template <typename Fn>
  void for_state_vertices(int state, std::int64_t wid, Time before, Fn&& fn) {
    if (panes_.empty()) return;
    const Time wstart = cfg_.window.start(wid);
    std::int64_t pane = std::max(first_pane_, wstart / pane_len_);
    const std::int64_t last =
        std::min(first_pane_ + static_cast<std::int64_t>(panes_.size()) - 1,
                 (before - 1) / pane_len_);
    for (; pane <= last; ++pane) {
      const Bucket& bucket = panes_[pane - first_pane_].buckets[state];
      const bool boundary = (pane == last) && ((pane + 1) * pane_len_ > before);
      for (std::uint32_t id : bucket.ids) {
        const Vertex& v = vertices_[id];
        if (boundary && v.time >= before) {
          if (bucket.sorted_by_key) continue;  // attr order, keep scanning
          break;                               // time order: done
        }
        fn(id, v);
      }
    }
  }

  template <typename Fn>
  void for_window_vertices(int state, std::int64_t wid, Fn&& fn) {
    for_state_vertices(state, wid, cfg_.window.end(wid),
                       [&](std::uint32_t, const Vertex& v) {
      const AggregatePayload* p = slot_for(v, wid);
      if (p) fn(v, *p);
    });
  }

  /// Scans the valid predecessors of an event: right template state, strictly
  /// earlier time, payload present in the window, edge predicates satisfied,
  /// not invalidated for this transition.
  template <typename Fn>
  void scan_predecessors_ids(int state, const Event& ev, std::int64_t wid,
                             Fn&& fn) {
    for (const GraphConfig::EdgeGroup& group : cfg_.edges_by_to[state]) {
      scan_group(group, state, ev, wid, std::forward<Fn>(fn));
    }
  }

  template <typename Fn>
  void scan_predecessors(int state, const Event& ev, std::int64_t wid,
                         Fn&& fn) {
    scan_predecessors_ids(state, ev, wid, [&](std::uint32_t id) {
      const Vertex& v = vertices_[id];
      const AggregatePayload* p = slot_for(v, wid);
      fn(v, *p);
    });
  }

  template <typename Fn>
  void scan_group(const GraphConfig::EdgeGroup& group, int to_state,
                  const Event& ev, std::int64_t wid, Fn&& fn) {
    const int from = group.from_state;
    if (panes_.empty()) return;
    const Time wstart = cfg_.window.start(wid);
    std::int64_t pane = std::max(first_pane_, wstart / pane_len_);
    const std::int64_t last =
        std::min(first_pane_ + static_cast<std::int64_t>(panes_.size()) - 1,
                 ev.time == 0 ? -1 : (ev.time - 1) / pane_len_);
    const bool has_marks = !case1_by_pair_.empty();
    const Predicate* index_pred =
        group.index_pred >= 0 ? &group.preds[group.index_pred] : nullptr;
    for (; pane <= last; ++pane) {
      const Bucket& bucket = panes_[pane - first_pane_].buckets[from];
      const bool boundary = (pane + 1) * pane_len_ > ev.time;
      auto begin = bucket.ids.begin();
      auto end = bucket.ids.end();
      if (index_pred) {
        // the bucket is sorted by the predicate's subject attribute
        const Value bound = ev.attr(index_pred->next_attr);
        auto key_lower = [&](Value k) {
          return std::lower_bound(begin, end, k,
                                  [&](std::uint32_t v, Value kk) {
                                    return vertices_[v].sort_key < kk;
                                  });
        };
        auto key_upper = [&](Value k) {
          return std::upper_bound(begin, end, k,
                                  [&](Value kk, std::uint32_t v) {
                                    return kk < vertices_[v].sort_key;
                                  });
        };
        switch (index_pred->cmp) {
          case Cmp::Eq: begin = key_lower(bound); end = key_upper(bound); break;
          case Cmp::Lt: end = key_lower(bound); break;
          case Cmp::Le: end = key_upper(bound); break;
          case Cmp::Gt: begin = key_upper(bound); break;
          case Cmp::Ge: begin = key_lower(bound); break;
          case Cmp::Ne: break;
        }
      }
      for (auto it = begin; it != end; ++it) {
        const std::uint32_t id = *it;
        const Vertex& v = vertices_[id];
        if (boundary && v.time >= ev.time) {
          if (bucket.sorted_by_key) continue;
          break;
        }
        if (!slot_for(v, wid)) continue;
        bool ok = true;
        for (const Predicate& pr : group.preds)
          if (!pr.eval_edge(v.event, ev)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        if (has_marks && blocked_by_case1(id, from, to_state, wid, ev.time))
          continue;
        fn(id);
      }
    }
  }

  // --- negation ---

  /// A completed trend of this (negative) graph ending at END vertex `id`:
  /// apply invalidation to every dependent graph, then prune.
  void on_negative_trend_end(std::uint32_t id) {
    const Vertex& v = vertices_[id];
    for (NegationBinding* b : outgoing_) {
      for (int i = 0; i < v.slot_count; ++i) {
        const PayloadSlot& s = slots_[v.slot_begin + i];
        b->parent->apply_invalidation(*b, s.wid, s.p.trend_start, v.time);
      }
    }
    if (cfg_.pruning) prune_finished_trends(id);
  }

  void apply_invalidation(NegationBinding& b, std::int64_t wid,
                          Time trend_start, Time trend_end) {
    if (b.prev_state < 0) {
      // leading negation: block future START events
      auto [it, fresh] = b.earliest_trend_end.try_emplace(wid, trend_end);
      if (!fresh) it->second = std::min(it->second, trend_end);
      return;
    }
    if (b.foll_state < 0) {
      // trailing negation: END vertices before the trend start are invalid
      auto [it, fresh] = b.latest_trend_start.try_emplace(wid, trend_start);
      if (!fresh) it->second = std::max(it->second, trend_start);
      return;
    }
    std::vector<std::uint32_t> newly_marked;
    for_state_vertices(b.prev_state, wid, trend_start,
                       [&](std::uint32_t id, const Vertex& v) {
      if (!slot_for(v, wid)) return;
      auto& per_window = b.marks[id];
      auto [it, fresh] = per_window.try_emplace(wid, trend_end);
      if (fresh) {
        ++b.invalidated_total;
        newly_marked.push_back(id);
      } else {
        it->second = std::min(it->second, trend_end);
      }
    });
    if (cfg_.pruning && b.prunable)
      for (std::uint32_t id : newly_marked)
        pending_invalid_.emplace_back(&b, id);
  }

  /// Invalid Event Pruning: a marked vertex whose type connects only to the
  /// following type can never propagate again once blocked in all its
  /// windows. A fresh mark blocks only strictly later events, so deletion
  /// waits until the stream time has advanced past the marking transaction.
  void prune_invalid(NegationBinding& b, const std::vector<std::uint32_t>& ids) {
    for (std::uint32_t id : ids) {
      Vertex& v = vertices_[id];
      if (!v.alive) continue;
      const auto& per_window = b.marks[id];
      bool all_blocked = true;
      for (int i = 0; i < v.slot_count; ++i)
        if (!per_window.count(slots_[v.slot_begin + i].wid)) {
          all_blocked = false;
          break;
        }
      if (!all_blocked) continue;
      remove_vertex(id);
      ++b.purged_total;
    }
  }

  /// Finished Trend Pruning: delete every vertex on a trend ending at the
  /// END vertex `id` (all are dominated by the invalidation just applied).
  void prune_finished_trends(std::uint32_t end_id) {
    std::vector<std::uint32_t> work{end_id};
    std::vector<std::uint32_t> doomed;
    std::map<std::uint32_t, bool> seen{{end_id, true}};
    while (!work.empty()) {
      const std::uint32_t id = work.back();
      work.pop_back();
      doomed.push_back(id);
      const Vertex& v = vertices_[id];
      for (int i = 0; i < v.slot_count; ++i) {
        const std::int64_t wid = slots_[v.slot_begin + i].wid;
        scan_predecessors_ids(v.state, v.event, wid, [&](std::uint32_t pid) {
          if (!seen[pid]) {
            seen[pid] = true;
            work.push_back(pid);
          }
        });
      }
    }
    for (std::uint32_t id : doomed) remove_vertex(id);
  }

  void remove_vertex(std::uint32_t id) {
    Vertex& v = vertices_[id];
    if (!v.alive) return;
    v.alive = false;
    --stats_.live_vertices;
    stats_.live_slots -= v.slot_count;
    const std::int64_t pane = v.time / pane_len_;
    if (pane >= first_pane_ &&
        pane < first_pane_ + static_cast<std::int64_t>(panes_.size()))
      panes_[pane - first_pane_].buckets[v.state].erase(id);
  }

  std::string payload_text(const AggregatePayload& p) const {
    if (cfg_.agg.count) return std::to_string(p.count);
    if (cfg_.agg.min) return p.has_min ? std::to_string(p.min) : "-";
    if (cfg_.agg.max) return p.has_max ? std::to_string(p.max) : "-";
    return p.count ? std::to_string(p.count) : "1";
  }

  const Template* tmpl_;
  GraphConfig cfg_;
  Time pane_len_ = 1;

  std::vector<Vertex> vertices_;
  std::vector<PayloadSlot> slots_;
  std::deque<Pane> panes_;
  std::int64_t first_pane_ = 0;

  std::vector<NegationBinding*> incoming_;
  std::vector<NegationBinding*> outgoing_;
  std::unordered_map<std::uint32_t, std::vector<NegationBinding*>> case1_by_pair_;
  std::vector<NegationBinding*> case2_;
  std::vector<NegationBinding*> case3_;

  std::vector<std::pair<NegationBinding*, std::uint32_t>> pending_invalid_;
  std::vector<PayloadSlot> tmp_slots_;
  GraphStats stats_;
  bool saturated_ = false;
};

}  // namespace greta

#endif
