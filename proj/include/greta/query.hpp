#ifndef GRETA_QUERY_HPP
#define GRETA_QUERY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/event.hpp"
#include "greta/pattern.hpp"

namespace greta {

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };
enum class Arith { None, Add, Sub, Mul, Div, Mod };

inline const char* cmp_text(Cmp c) {
  switch (c) {
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

inline const char* arith_text(Arith a) {
  switch (a) {
    case Arith::None: return "";
    case Arith::Add: return "+";
    case Arith::Sub: return "-";
    case Arith::Mul: return "*";
    case Arith::Div: return "/";
    case Arith::Mod: return "%";
  }
  return "?";
}

inline bool compare(Value lhs, Cmp cmp, Value rhs) {
  switch (cmp) {
    case Cmp::Eq: return lhs == rhs;
    case Cmp::Ne: return lhs != rhs;
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::Ge: return lhs >= rhs;
  }
  return false;
}

inline Value apply_arith(Value lhs, Arith op, Value rhs) {
  switch (op) {
    case Arith::None: return lhs;
    case Arith::Add: return lhs + rhs;
    case Arith::Sub: return lhs - rhs;
    case Arith::Mul: return lhs * rhs;
    case Arith::Div:
      if (rhs == 0) throw DataError("division by zero in predicate");
      return lhs / rhs;
    case Arith::Mod:
      if (rhs == 0) throw DataError("modulo by zero in predicate");
      return lhs % rhs;
  }
  return lhs;
}

/// One WHERE-clause predicate.
///
/// local:       subject.attr [arith k] cmp constant
/// edge:        subject.attr [arith k] cmp NEXT(next_type).next_attr
/// equivalence: [attr1, attr2, ...]
struct Predicate {
  enum class Kind { Local, Equivalence, Edge };

  Kind kind = Kind::Local;

  // equivalence
  std::vector<std::string> equiv_attrs;

  // local / edge: left operand with optional one-level arithmetic
  std::string subject_type;
  std::string subject_attr;
  Arith arith = Arith::None;
  Value arith_operand = 0;
  Cmp cmp = Cmp::Eq;

  // local rhs
  Value rhs_const = 0;
  // edge rhs
  std::string next_type;
  std::string next_attr;

  Value lhs_value(const Event& e) const {
    return apply_arith(e.attr(subject_attr), arith, arith_operand);
  }

  /// Local predicate on a single event.
  bool eval_local(const Event& e) const {
    return compare(lhs_value(e), cmp, rhs_const);
  }

  /// Edge predicate between an earlier event (the subject) and the later
  /// adjacent event (the NEXT reference).
  bool eval_edge(const Event& earlier, const Event& later) const {
    return compare(lhs_value(earlier), cmp, later.attr(next_attr));
  }

  std::string text() const {
    if (kind == Kind::Equivalence) {
      std::string out = "[";
      for (std::size_t i = 0; i < equiv_attrs.size(); ++i) {
        if (i) out += ",";
        out += equiv_attrs[i];
      }
      return out + "]";
    }
    std::string out = subject_type + "." + subject_attr;
    if (arith != Arith::None)
      out += std::string(" ") + arith_text(arith) + " " +
             std::to_string(arith_operand);
    out += std::string(" ") + cmp_text(cmp) + " ";
    if (kind == Kind::Local)
      out += std::to_string(rhs_const);
    else
      out += "NEXT(" + next_type + ")." + next_attr;
    return out;
  }
};

struct AggregateSpec {
  enum class Kind { CountStar, CountType, Min, Max, Sum, Avg };
  Kind kind = Kind::CountStar;
  std::string type;  // aggregated event type (empty for COUNT(*))
  std::string attr;  // aggregated attribute (MIN/MAX/SUM/AVG)

  bool needs_attr() const {
    return kind == Kind::Min || kind == Kind::Max || kind == Kind::Sum ||
           kind == Kind::Avg;
  }
  bool needs_count() const {
    return kind == Kind::CountStar || kind == Kind::CountType ||
           kind == Kind::Sum || kind == Kind::Avg;
  }
  bool needs_count_e() const {
    return kind == Kind::CountType || kind == Kind::Avg;
  }

  std::string text() const {
    switch (kind) {
      case Kind::CountStar: return "COUNT(*)";
      case Kind::CountType: return "COUNT(" + type + ")";
      case Kind::Min: return "MIN(" + type + "." + attr + ")";
      case Kind::Max: return "MAX(" + type + "." + attr + ")";
      case Kind::Sum: return "SUM(" + type + "." + attr + ")";
      case Kind::Avg: return "AVG(" + type + "." + attr + ")";
    }
    return "?";
  }
};

/// Sliding window: window i covers [i*slide, i*slide + size) for i >= 0.
struct WindowSpec {
  Time size = 1;
  Time slide = 1;

  Time start(std::int64_t wid) const { return wid * slide; }
  Time end(std::int64_t wid) const { return wid * slide + size; }

  std::int64_t first_window(Time t) const {
    if (t < size) return 0;
    return (t - size) / slide + 1;
  }
  std::int64_t last_window(Time t) const { return t / slide; }

  /// Maximal number of windows an event can fall into.
  std::int64_t windows_per_event() const { return (size + slide - 1) / slide; }
};

/// All window ids whose interval contains t.
inline std::vector<std::int64_t> assign_windows(Time t, const WindowSpec& w) {
  std::vector<std::int64_t> out;
  if (t < 0) return out;
  for (std::int64_t i = w.first_window(t); i <= w.last_window(t); ++i)
    out.push_back(i);
  return out;
}

struct Query {
  std::vector<std::string> return_attrs;  // projected group-by attributes
  AggregateSpec aggregate;
  Pattern pattern;
  std::vector<Predicate> predicates;
  std::vector<std::string> group_by;
  WindowSpec window;
  /// Alias state name -> base event type, for unrolled patterns. Stream
  /// routing duplicates an event of the base type to every alias.
  std::map<std::string, std::string> aliases;

  /// Base stream type for a pattern state name.
  const std::string& base_type(const std::string& state) const {
    auto it = aliases.find(state);
    return it == aliases.end() ? state : it->second;
  }

  std::vector<std::string> equivalence_attrs() const {
    std::vector<std::string> out;
    for (const auto& p : predicates)
      if (p.kind == Predicate::Kind::Equivalence)
        for (const auto& a : p.equiv_attrs) out.push_back(a);
    return out;
  }
};

inline std::string print_query(const Query& q) {
  std::string out = "RETURN ";
  for (const auto& a : q.return_attrs) out += a + ", ";
  out += q.aggregate.text();
  out += " PATTERN " + print_pattern(q.pattern);
  if (!q.predicates.empty()) {
    out += " WHERE ";
    for (std::size_t i = 0; i < q.predicates.size(); ++i) {
      if (i) out += " AND ";
      out += q.predicates[i].text();
    }
  }
  if (!q.group_by.empty()) {
    out += " GROUP-BY ";
    for (std::size_t i = 0; i < q.group_by.size(); ++i) {
      if (i) out += ", ";
      out += q.group_by[i];
    }
  }
  out += " WITHIN " + std::to_string(q.window.size) + " SLIDE " +
         std::to_string(q.window.slide);
  return out;
}

}  // namespace greta

#endif
