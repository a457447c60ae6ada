#ifndef GRETA_PARSER_HPP
#define GRETA_PARSER_HPP

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/query.hpp"

namespace greta {
namespace detail {

struct Token {
  enum class Kind { Ident, Number, Symbol, End };
  Kind kind = Kind::End;
  std::string text;   // identifier spelling or symbol
  std::string upper;  // uppercased identifier, for keyword matching
  Value number = 0;
  int line = 1;
  int col = 1;
};

inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = text.substr(i, j - i);
      t.upper = t.text;
      for (auto& ch : t.upper) ch = std::toupper(static_cast<unsigned char>(ch));
      // GROUP-BY is a single keyword containing '-'.
      if (t.upper == "GROUP" && j + 2 < text.size() && text[j] == '-') {
        std::string by = text.substr(j + 1, 2);
        std::string byu = by;
        for (auto& ch : byu) ch = std::toupper(static_cast<unsigned char>(ch));
        if (byu == "BY") {
          t.text = text.substr(i, j + 3 - i);
          t.upper = "GROUP-BY";
          j += 3;
        }
      }
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      t.kind = Token::Kind::Number;
      t.text = text.substr(i, j - i);
      t.number = std::strtoll(t.text.c_str(), nullptr, 10);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    // multi-char comparison symbols
    static const char* two[] = {">=", "<=", "!=", "<>"};
    bool matched = false;
    for (const char* s : two) {
      if (text.compare(i, 2, s) == 0) {
        t.kind = Token::Kind::Symbol;
        t.text = s;
        advance(2);
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string singles = "()[],.+*?%=<>-/";
    if (singles.find(c) != std::string::npos) {
      t.kind = Token::Kind::Symbol;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(t);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class QueryParser {
public:
  explicit QueryParser(const std::string& text) : tokens_(tokenize(text)) {}

  Query parse() {
    Query q;
    expect_keyword("RETURN");
    parse_return(q);
    expect_keyword("PATTERN");
    q.pattern = parse_pattern_toplevel();
    if (accept_keyword("WHERE")) parse_where(q);
    if (accept_keyword("GROUP-BY")) {
      q.group_by.push_back(expect_ident("grouping attribute"));
      while (accept_symbol(",")) q.group_by.push_back(expect_ident("grouping attribute"));
    }
    expect_keyword("WITHIN");
    q.window.size = expect_duration();
    expect_keyword("SLIDE");
    q.window.slide = expect_duration();
    if (!at_end())
      fail("unexpected trailing input '" + cur().text + "'");
    resolve_variables(q);
    return q;
  }

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> vars_;  // variable -> event type

  const Token& cur() const { return tokens_[pos_]; }
  const Token& peek(std::size_t n = 1) const {
    return tokens_[std::min(pos_ + n, tokens_.size() - 1)];
  }
  bool at_end() const { return cur().kind == Token::Kind::End; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }

  bool is_keyword(const Token& t, const char* kw) const {
    return t.kind == Token::Kind::Ident && t.upper == kw;
  }
  bool accept_keyword(const char* kw) {
    if (is_keyword(cur(), kw)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_keyword(const char* kw) {
    if (!accept_keyword(kw)) fail(std::string("expected keyword ") + kw);
  }
  bool accept_symbol(const char* s) {
    if (cur().kind == Token::Kind::Symbol && cur().text == s) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_symbol(const char* s) {
    if (!accept_symbol(s)) fail(std::string("expected '") + s + "'");
  }
  std::string expect_ident(const char* what) {
    if (cur().kind != Token::Kind::Ident)
      fail(std::string("expected ") + what);
    return tokens_[pos_++].text;
  }
  Value expect_duration() {
    if (cur().kind != Token::Kind::Number)
      fail("malformed duration: expected a non-negative integer");
    return tokens_[pos_++].number;
  }

  static bool is_reserved(const std::string& upper) {
    static const char* kws[] = {"RETURN", "PATTERN", "WHERE",  "GROUP-BY",
                                "WITHIN", "SLIDE",   "SEQ",    "NOT",
                                "AND",    "NEXT",    "COUNT",  "MIN",
                                "MAX",    "SUM",     "AVG"};
    for (const char* k : kws)
      if (upper == k) return true;
    return false;
  }

  bool at_aggregate() const {
    return is_keyword(cur(), "COUNT") || is_keyword(cur(), "MIN") ||
           is_keyword(cur(), "MAX") || is_keyword(cur(), "SUM") ||
           is_keyword(cur(), "AVG");
  }

  void parse_return(Query& q) {
    while (!at_aggregate()) {
      q.return_attrs.push_back(expect_ident("attribute or aggregate"));
      expect_symbol(",");
    }
    q.aggregate = parse_aggregate();
  }

  AggregateSpec parse_aggregate() {
    AggregateSpec a;
    std::string fn = cur().upper;
    ++pos_;
    expect_symbol("(");
    if (fn == "COUNT") {
      if (accept_symbol("*")) {
        a.kind = AggregateSpec::Kind::CountStar;
      } else {
        a.kind = AggregateSpec::Kind::CountType;
        a.type = expect_ident("event type");
      }
    } else {
      if (fn == "MIN")
        a.kind = AggregateSpec::Kind::Min;
      else if (fn == "MAX")
        a.kind = AggregateSpec::Kind::Max;
      else if (fn == "SUM")
        a.kind = AggregateSpec::Kind::Sum;
      else if (fn == "AVG")
        a.kind = AggregateSpec::Kind::Avg;
      else
        fail("unknown aggregate function " + fn);
      a.type = expect_ident("event type");
      expect_symbol(".");
      a.attr = expect_ident("attribute");
    }
    expect_symbol(")");
    return a;
  }

  Pattern parse_pattern_toplevel() { return parse_element(); }

  Pattern parse_element() {
    if (accept_keyword("NOT")) return Pattern::make_not(parse_element());
    return parse_unary();
  }

  Pattern parse_unary() {
    Pattern p = parse_primary();
    for (;;) {
      if (accept_symbol("+"))
        p = Pattern::make_unary(PatternOp::Plus, std::move(p));
      else if (accept_symbol("*"))
        p = Pattern::make_unary(PatternOp::Star, std::move(p));
      else if (accept_symbol("?"))
        p = Pattern::make_unary(PatternOp::Optional, std::move(p));
      else
        break;
    }
    return p;
  }

  Pattern parse_primary() {
    if (accept_keyword("SEQ")) {
      expect_symbol("(");
      std::vector<Pattern> elems;
      elems.push_back(parse_element());
      while (accept_symbol(",")) elems.push_back(parse_element());
      expect_symbol(")");
      if (elems.size() < 2) fail("SEQ needs at least two sub-patterns");
      return build_seq(std::move(elems));
    }
    if (accept_symbol("(")) {
      Pattern p = parse_element();
      expect_symbol(")");
      return p;
    }
    if (cur().kind != Token::Kind::Ident || is_reserved(cur().upper))
      fail("expected a pattern");
    std::string type = tokens_[pos_++].text;
    std::string var;
    if (cur().kind == Token::Kind::Ident && !is_reserved(cur().upper)) {
      var = tokens_[pos_++].text;
      if (!vars_.emplace(var, type).second && vars_[var] != type)
        fail("variable '" + var + "' bound to two event types");
    }
    return Pattern::make_type(type, var);
  }

  // --- WHERE clause ---

  struct Operand {
    enum class Kind { Const, Ref, Next };
    Kind kind = Kind::Const;
    Value constant = 0;
    std::string name;  // variable or type for Ref / Next
    std::string attr;
    Arith arith = Arith::None;  // one-level arithmetic: <ref> op <const>
    Value arith_operand = 0;
  };

  Arith cur_arith() const {
    if (cur().kind != Token::Kind::Symbol) return Arith::None;
    const std::string& s = cur().text;
    if (s == "+") return Arith::Add;
    if (s == "-") return Arith::Sub;
    if (s == "*") return Arith::Mul;
    if (s == "/") return Arith::Div;
    if (s == "%") return Arith::Mod;
    return Arith::None;
  }

  Value parse_signed_number() {
    bool neg = accept_symbol("-");
    if (cur().kind != Token::Kind::Number) fail("expected a number");
    Value v = tokens_[pos_++].number;
    return neg ? -v : v;
  }

  Operand parse_operand() {
    Operand op;
    if (cur().kind == Token::Kind::Number ||
        (cur().kind == Token::Kind::Symbol && cur().text == "-")) {
      op.kind = Operand::Kind::Const;
      op.constant = parse_signed_number();
      return op;
    }
    if (accept_keyword("NEXT")) {
      expect_symbol("(");
      op.kind = Operand::Kind::Next;
      op.name = expect_ident("event type");
      expect_symbol(")");
      expect_symbol(".");
      op.attr = expect_ident("attribute");
      return op;
    }
    op.kind = Operand::Kind::Ref;
    op.name = expect_ident("event type or variable");
    expect_symbol(".");
    op.attr = expect_ident("attribute");
    if (cur_arith() != Arith::None) {
      op.arith = cur_arith();
      ++pos_;
      if (cur().kind != Token::Kind::Number &&
          !(cur().kind == Token::Kind::Symbol && cur().text == "-"))
        fail("only one-level arithmetic with a constant operand is supported");
      op.arith_operand = parse_signed_number();
    }
    return op;
  }

  Cmp parse_cmp() {
    if (cur().kind != Token::Kind::Symbol) fail("expected a comparison operator");
    const std::string s = tokens_[pos_++].text;
    if (s == "=") return Cmp::Eq;
    if (s == "!=" || s == "<>") return Cmp::Ne;
    if (s == "<") return Cmp::Lt;
    if (s == "<=") return Cmp::Le;
    if (s == ">") return Cmp::Gt;
    if (s == ">=") return Cmp::Ge;
    fail("expected a comparison operator, got '" + s + "'");
  }

  static Cmp flip(Cmp c) {
    switch (c) {
      case Cmp::Lt: return Cmp::Gt;
      case Cmp::Le: return Cmp::Ge;
      case Cmp::Gt: return Cmp::Lt;
      case Cmp::Ge: return Cmp::Le;
      default: return c;
    }
  }

  void parse_where(Query& q) {
    do {
      if (accept_symbol("[")) {
        Predicate p;
        p.kind = Predicate::Kind::Equivalence;
        p.equiv_attrs.push_back(expect_ident("attribute"));
        while (accept_symbol(",")) p.equiv_attrs.push_back(expect_ident("attribute"));
        expect_symbol("]");
        q.predicates.push_back(std::move(p));
        continue;
      }
      Operand lhs = parse_operand();
      Cmp cmp = parse_cmp();
      Operand rhs = parse_operand();
      q.predicates.push_back(make_comparison(lhs, cmp, rhs));
    } while (accept_keyword("AND"));
  }

  Predicate make_comparison(Operand lhs, Cmp cmp, Operand rhs) {
    using OK = Operand::Kind;
    // Normalize so that the plain reference is on the left.
    if (lhs.kind == OK::Const || lhs.kind == OK::Next) {
      std::swap(lhs, rhs);
      cmp = flip(cmp);
    }
    if (lhs.kind != OK::Ref)
      fail("a predicate must reference an event attribute on one side");
    Predicate p;
    p.subject_type = lhs.name;
    p.subject_attr = lhs.attr;
    p.arith = lhs.arith;
    p.arith_operand = lhs.arith_operand;
    p.cmp = cmp;
    switch (rhs.kind) {
      case OK::Const:
        p.kind = Predicate::Kind::Local;
        p.rhs_const = rhs.constant;
        break;
      case OK::Next:
        p.kind = Predicate::Kind::Edge;
        p.next_type = rhs.name;
        p.next_attr = rhs.attr;
        break;
      case OK::Ref:
        fail("comparisons between two event references require NEXT(); "
             "arbitrary cross-event predicates are not supported");
    }
    return p;
  }

  // Resolve pattern variables to event type names in predicates and the
  // aggregate spec.
  void resolve_variables(Query& q) {
    auto resolve = [&](std::string& name) {
      auto it = vars_.find(name);
      if (it != vars_.end()) name = it->second;
    };
    resolve(q.aggregate.type);
    for (auto& p : q.predicates) {
      resolve(p.subject_type);
      resolve(p.next_type);
    }
  }
};

}  // namespace detail

/// Parses a query per the surface grammar. Keywords are case-insensitive,
/// identifiers are case-sensitive. Throws ParseError with line/column.
inline Query parse_query(const std::string& text) {
  return detail::QueryParser(text).parse();
}

}  // namespace greta

#endif
