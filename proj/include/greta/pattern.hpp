#ifndef GRETA_PATTERN_HPP
#define GRETA_PATTERN_HPP

#include <memory>
#include <string>
#include <vector>

#include "greta/common.hpp"

namespace greta {

enum class PatternOp { Type, Seq, Plus, Star, Optional, Not };

/// Pattern AST. `Seq` has exactly two children; the unary operators have one.
/// For `Type` nodes, `type` is the event type name used for stream routing
/// (possibly an alias generated by unrolling) and `var` is the variable bound
/// in the query text (defaults to the type name).
struct Pattern {
  PatternOp op = PatternOp::Type;
  std::string type;
  std::string var;
  std::vector<Pattern> children;

  static Pattern make_type(std::string name, std::string variable = "") {
    Pattern p;
    p.op = PatternOp::Type;
    p.var = variable.empty() ? name : std::move(variable);
    p.type = std::move(name);
    return p;
  }
  static Pattern make_seq(Pattern lhs, Pattern rhs) {
    Pattern p;
    p.op = PatternOp::Seq;
    p.children.push_back(std::move(lhs));
    p.children.push_back(std::move(rhs));
    return p;
  }
  static Pattern make_unary(PatternOp op, Pattern child) {
    Pattern p;
    p.op = op;
    p.children.push_back(std::move(child));
    return p;
  }
  static Pattern make_plus(Pattern child) {
    return make_unary(PatternOp::Plus, std::move(child));
  }
  static Pattern make_not(Pattern child) {
    return make_unary(PatternOp::Not, std::move(child));
  }

  /// Number of event types and operators.
  int size() const {
    int n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  bool operator==(const Pattern& other) const {
    return op == other.op && type == other.type && children == other.children;
  }
};

inline void collect_types(const Pattern& p, std::vector<std::string>& out) {
  if (p.op == PatternOp::Type) {
    out.push_back(p.type);
    return;
  }
  for (const auto& c : p.children) collect_types(c, out);
}

inline std::vector<std::string> pattern_types(const Pattern& p) {
  std::vector<std::string> out;
  collect_types(p, out);
  return out;
}

inline bool contains_op(const Pattern& p, PatternOp op) {
  if (p.op == op) return true;
  for (const auto& c : p.children)
    if (contains_op(c, op)) return true;
  return false;
}

/// Flattens a (possibly nested) SEQ tree into its n-ary element list.
/// Non-SEQ patterns yield a single element.
inline void flatten_seq(const Pattern& p, std::vector<Pattern>& out) {
  if (p.op == PatternOp::Seq) {
    flatten_seq(p.children[0], out);
    flatten_seq(p.children[1], out);
  } else {
    out.push_back(p);
  }
}

inline std::vector<Pattern> flatten_seq(const Pattern& p) {
  std::vector<Pattern> out;
  flatten_seq(p, out);
  return out;
}

/// Rebuilds a left-associated binary SEQ from an element list.
inline Pattern build_seq(std::vector<Pattern> elems) {
  if (elems.empty()) throw Error("cannot build SEQ from zero elements");
  Pattern acc = std::move(elems[0]);
  for (std::size_t i = 1; i < elems.size(); ++i)
    acc = Pattern::make_seq(std::move(acc), std::move(elems[i]));
  return acc;
}

/// Textual debug form, re-parseable by the query parser.
inline std::string print_pattern(const Pattern& p) {
  switch (p.op) {
    case PatternOp::Type:
      return p.var == p.type ? p.type : p.type + " " + p.var;
    case PatternOp::Seq: {
      // Nested sequences are flattened into the n-ary surface form.
      std::string out = "SEQ(";
      std::vector<const Pattern*> order;
      struct Flattener {
        static void run(const Pattern& q, std::vector<const Pattern*>& out) {
          if (q.op == PatternOp::Seq) {
            run(q.children[0], out);
            run(q.children[1], out);
          } else {
            out.push_back(&q);
          }
        }
      };
      Flattener::run(p, order);
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (i) out += ", ";
        out += print_pattern(*order[i]);
      }
      out += ")";
      return out;
    }
    case PatternOp::Plus:
    case PatternOp::Star:
    case PatternOp::Optional: {
      const char suffix = p.op == PatternOp::Plus     ? '+'
                          : p.op == PatternOp::Star   ? '*'
                                                      : '?';
      const Pattern& c = p.children[0];
      if (c.op == PatternOp::Type && c.var == c.type)
        return print_pattern(c) + suffix;
      return "(" + print_pattern(c) + ")" + suffix;
    }
    case PatternOp::Not:
      return "NOT " + print_pattern(p.children[0]);
  }
  return "?";
}

}  // namespace greta

#endif
