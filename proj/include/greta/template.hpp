#ifndef GRETA_TEMPLATE_HPP
#define GRETA_TEMPLATE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/pattern.hpp"

namespace greta {

/// First event type of a trend matched by a positive pattern.
inline const std::string& start_type(const Pattern& p) {
  switch (p.op) {
    case PatternOp::Type: return p.type;
    case PatternOp::Seq: return start_type(p.children[0]);
    case PatternOp::Plus:
    case PatternOp::Star:
    case PatternOp::Optional: return start_type(p.children[0]);
    case PatternOp::Not:
      throw Error("start() is undefined for a negation");
  }
  throw Error("unreachable pattern op");
}

/// Last event type of a trend matched by a positive pattern.
inline const std::string& end_type(const Pattern& p) {
  switch (p.op) {
    case PatternOp::Type: return p.type;
    case PatternOp::Seq: return end_type(p.children[1]);
    case PatternOp::Plus:
    case PatternOp::Star:
    case PatternOp::Optional: return end_type(p.children[0]);
    case PatternOp::Not:
      throw Error("end() is undefined for a negation");
  }
  throw Error("unreachable pattern op");
}

struct Transition {
  enum class Label { Seq, Plus };
  std::string from;
  std::string to;
  Label label = Label::Seq;

  bool operator==(const Transition& o) const {
    return from == o.from && to == o.to && label == o.label;
  }
};

/// Automaton template for one positive sub-pattern. States are event types;
/// transitions encode which types may be adjacent in a trend.
struct Template {
  std::vector<std::string> states;  // in order of first appearance
  std::vector<Transition> transitions;
  std::string start;
  std::string end;

  std::map<std::string, int> state_index;
  std::vector<std::vector<int>> preds;  // state -> predecessor states
  std::vector<std::vector<int>> succs;

  int index_of(const std::string& type) const {
    auto it = state_index.find(type);
    if (it == state_index.end())
      throw Error("unknown event type '" + type + "' for this template");
    return it->second;
  }
  bool has_state(const std::string& type) const {
    return state_index.count(type) != 0;
  }
  int start_index() const { return state_index.at(start); }
  int end_index() const { return state_index.at(end); }

  std::vector<std::string> mid_types() const {
    std::vector<std::string> out;
    for (const auto& s : states)
      if (s != start && s != end) out.push_back(s);
    return out;
  }

  /// Predecessor event types of `type` (the sources of its inbound
  /// transitions).
  std::vector<std::string> pred_types(const std::string& type) const {
    std::vector<std::string> out;
    for (int i : preds[index_of(type)]) out.push_back(states[i]);
    return out;
  }

  std::string dump() const {
    std::string out;
    for (const auto& s : states) {
      out += s;
      if (s == start) out += " START";
      if (s == end) out += " END";
      if (s != start && s != end) out += " MID";
      out += "\n";
    }
    for (const auto& t : transitions)
      out += t.from + " -> " + t.to +
             (t.label == Transition::Label::Seq ? " SEQ" : " +") + "\n";
    return out;
  }
};

namespace detail {

inline void collect_transitions(const Pattern& p, std::vector<Transition>& out) {
  switch (p.op) {
    case PatternOp::Type:
      return;
    case PatternOp::Seq: {
      out.push_back({end_type(p.children[0]), start_type(p.children[1]),
                     Transition::Label::Seq});
      collect_transitions(p.children[0], out);
      collect_transitions(p.children[1], out);
      return;
    }
    case PatternOp::Plus:
      out.push_back({end_type(p.children[0]), start_type(p.children[0]),
                     Transition::Label::Plus});
      collect_transitions(p.children[0], out);
      return;
    case PatternOp::Star:
    case PatternOp::Optional:
    case PatternOp::Not:
      throw Error("template construction requires a desugared positive pattern");
  }
}

}  // namespace detail

/// Builds the automaton template for a desugared positive pattern: one state
/// per event type, a SEQ transition (end(Pi), start(Pj)) per sequence node
/// and a + transition (end(Pi), start(Pi)) per Kleene node.
inline Template generate_template(const Pattern& p) {
  Template t;
  t.states = pattern_types(p);
  detail::collect_transitions(p, t.transitions);
  // duplicate transitions can arise from repeated operator applications
  std::vector<Transition> unique;
  for (const auto& tr : t.transitions)
    if (std::find(unique.begin(), unique.end(), tr) == unique.end())
      unique.push_back(tr);
  t.transitions = std::move(unique);
  t.start = start_type(p);
  t.end = end_type(p);
  for (std::size_t i = 0; i < t.states.size(); ++i)
    t.state_index[t.states[i]] = static_cast<int>(i);
  t.preds.assign(t.states.size(), {});
  t.succs.assign(t.states.size(), {});
  for (const auto& tr : t.transitions) {
    t.preds[t.index_of(tr.to)].push_back(t.index_of(tr.from));
    t.succs[t.index_of(tr.from)].push_back(t.index_of(tr.to));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Pattern split (negation removal)
// ---------------------------------------------------------------------------

/// One negative sub-pattern with its connections to the enclosing pattern.
/// `parent` is -1 for the positive root, otherwise an index into the
/// negatives list.
struct NegativeSub {
  Pattern pattern;
  std::optional<std::string> previous_type;
  std::optional<std::string> following_type;
  int parent = -1;
};

struct SubPatternPlan {
  Pattern positive;
  std::vector<NegativeSub> negatives;
};

namespace detail {

inline Pattern strip_negations(const Pattern& p, int parent,
                               std::vector<NegativeSub>& negatives);

inline Pattern strip_seq_chain(const Pattern& p, int parent,
                               std::vector<NegativeSub>& negatives) {
  std::vector<Pattern> chain = flatten_seq(p);
  std::vector<Pattern> positive;
  struct PendingNot {
    std::size_t chain_pos;
    std::size_t positive_before;  // count of positive elements preceding it
    const Pattern* body;
  };
  std::vector<PendingNot> nots;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i].op == PatternOp::Not) {
      nots.push_back({i, positive.size(), &chain[i].children[0]});
    } else {
      positive.push_back(strip_negations(chain[i], parent, negatives));
    }
  }
  if (positive.empty())
    throw Error("pattern has no positive part after removing negations");
  for (const auto& pn : nots) {
    NegativeSub sub;
    sub.parent = parent;
    if (pn.positive_before > 0)
      sub.previous_type = end_type(positive[pn.positive_before - 1]);
    if (pn.positive_before < positive.size())
      sub.following_type = start_type(positive[pn.positive_before]);
    int id = static_cast<int>(negatives.size());
    negatives.push_back(std::move(sub));
    negatives[id].pattern = strip_negations(*pn.body, id, negatives);
  }
  return positive.size() == 1 ? positive[0] : build_seq(std::move(positive));
}

inline Pattern strip_negations(const Pattern& p, int parent,
                               std::vector<NegativeSub>& negatives) {
  switch (p.op) {
    case PatternOp::Type:
      return p;
    case PatternOp::Seq:
      return strip_seq_chain(p, parent, negatives);
    case PatternOp::Plus:
    case PatternOp::Star:
    case PatternOp::Optional:
      return Pattern::make_unary(
          p.op, strip_negations(p.children[0], parent, negatives));
    case PatternOp::Not:
      throw Error("negation in an unsupported position");
  }
  throw Error("unreachable pattern op");
}

}  // namespace detail

/// Splits a validated pattern into its positive root and the negative
/// sub-patterns, recording the previous/following event types each negation
/// connects to in its parent (with the negation removed).
inline SubPatternPlan split_pattern(const Pattern& p) {
  SubPatternPlan plan;
  plan.positive = detail::strip_negations(p, -1, plan.negatives);
  return plan;
}

/// Re-inserts the split-out negations, reconstructing a pattern equivalent to
/// the original (used by the structural round-trip property test).
inline Pattern reassemble_pattern(const SubPatternPlan& plan);

namespace detail {

inline Pattern reassemble_into(const Pattern& positive,
                               const SubPatternPlan& plan, int parent) {
  // Collect this parent's negations in order.
  std::vector<std::pair<int, const NegativeSub*>> mine;
  for (std::size_t i = 0; i < plan.negatives.size(); ++i)
    if (plan.negatives[i].parent == parent)
      mine.push_back({static_cast<int>(i), &plan.negatives[i]});
  if (mine.empty()) return positive;

  struct Rebuilder {
    const SubPatternPlan& plan;
    std::vector<std::pair<int, const NegativeSub*>>& mine;

    Pattern run(const Pattern& p) {
      switch (p.op) {
        case PatternOp::Type:
          return p;
        case PatternOp::Plus:
        case PatternOp::Star:
        case PatternOp::Optional:
          return Pattern::make_unary(p.op, run(p.children[0]));
        case PatternOp::Seq: {
          std::vector<Pattern> chain = flatten_seq(p);
          std::vector<Pattern> out;
          for (std::size_t i = 0; i < chain.size(); ++i) {
            Pattern rebuilt = run(chain[i]);
            // insert negations whose following type starts chain[i]
            for (auto& [id, sub] : mine) {
              if (!sub) continue;
              bool prev_ok =
                  (i == 0 && !sub->previous_type) ||
                  (i > 0 && sub->previous_type &&
                   *sub->previous_type == end_type(chain[i - 1]));
              bool foll_ok = sub->following_type &&
                             *sub->following_type == start_type(chain[i]);
              if (prev_ok && foll_ok) {
                out.push_back(Pattern::make_not(
                    reassemble_into(sub->pattern, plan, id)));
                sub = nullptr;
                break;
              }
            }
            out.push_back(std::move(rebuilt));
            // trailing negation after the last element
            if (i + 1 == chain.size()) {
              for (auto& [id, sub] : mine) {
                if (!sub) continue;
                if (!sub->following_type && sub->previous_type &&
                    *sub->previous_type == end_type(chain[i])) {
                  out.push_back(Pattern::make_not(
                      reassemble_into(sub->pattern, plan, id)));
                  sub = nullptr;
                }
              }
            }
          }
          return build_seq(std::move(out));
        }
        case PatternOp::Not:
          throw Error("positive pattern contains negation");
      }
      throw Error("unreachable pattern op");
    }
  };

  Rebuilder rb{plan, mine};
  Pattern rebuilt = rb.run(positive);
  // Negations attached around a non-SEQ positive root (e.g. SEQ(A+, NOT E)).
  std::vector<Pattern> chain;
  for (auto& [id, sub] : mine) {
    if (!sub) continue;
    if (!sub->previous_type) {
      chain.push_back(
          Pattern::make_not(reassemble_into(sub->pattern, plan, id)));
      sub = nullptr;
    }
  }
  chain.push_back(std::move(rebuilt));
  for (auto& [id, sub] : mine) {
    if (!sub) continue;
    if (!sub->following_type) {
      chain.push_back(
          Pattern::make_not(reassemble_into(sub->pattern, plan, id)));
      sub = nullptr;
    }
  }
  for (auto& [id, sub] : mine)
    if (sub) throw Error("could not re-insert a negative sub-pattern");
  return chain.size() == 1 ? std::move(chain[0]) : build_seq(std::move(chain));
}

}  // namespace detail

inline Pattern reassemble_pattern(const SubPatternPlan& plan) {
  return detail::reassemble_into(plan.positive, plan, -1);
}

}  // namespace greta

#endif
