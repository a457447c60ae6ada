#ifndef GRETA_REWRITE_HPP
#define GRETA_REWRITE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/query.hpp"

namespace greta {

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

namespace detail {

inline Pattern normalize_pattern(const Pattern& p);

/// Normalizes the elements of a flattened SEQ chain:
///  - NOT (P+) becomes NOT P
///  - consecutive NOT elements are merged: NOT a, NOT b => NOT SEQ(a,b)
inline std::vector<Pattern> normalize_chain(const std::vector<Pattern>& in) {
  std::vector<Pattern> out;
  for (const auto& raw : in) {
    Pattern e = normalize_pattern(raw);
    if (e.op == PatternOp::Not && !out.empty() &&
        out.back().op == PatternOp::Not) {
      Pattern merged = Pattern::make_not(Pattern::make_seq(
          out.back().children[0], e.children[0]));
      out.back() = std::move(merged);
    } else {
      out.push_back(std::move(e));
    }
  }
  return out;
}

inline Pattern normalize_pattern(const Pattern& p) {
  switch (p.op) {
    case PatternOp::Type:
      return p;
    case PatternOp::Seq: {
      std::vector<Pattern> chain = normalize_chain(flatten_seq(p));
      return build_seq(std::move(chain));
    }
    case PatternOp::Plus:
    case PatternOp::Star:
    case PatternOp::Optional: {
      Pattern c = normalize_pattern(p.children[0]);
      // (NOT P)+ is equivalent to NOT P.
      if (c.op == PatternOp::Not) return c;
      return Pattern::make_unary(p.op, std::move(c));
    }
    case PatternOp::Not: {
      Pattern c = normalize_pattern(p.children[0]);
      // NOT (P+) is equivalent to NOT P.
      while (c.op == PatternOp::Plus) c = c.children[0];
      return Pattern::make_not(std::move(c));
    }
  }
  return p;
}

inline void check_pattern(const Pattern& p, bool top_level_chain,
                          std::vector<std::string>& errors) {
  switch (p.op) {
    case PatternOp::Type:
      if (p.type.empty()) errors.push_back("empty event type name");
      return;
    case PatternOp::Not:
      errors.push_back("negation may only appear inside an event sequence");
      check_pattern(p.children[0], false, errors);
      return;
    case PatternOp::Plus:
    case PatternOp::Star:
    case PatternOp::Optional:
      if (p.children[0].op == PatternOp::Not)
        errors.push_back("Kleene operators may not be applied to a negation");
      check_pattern(p.children[0], false, errors);
      return;
    case PatternOp::Seq: {
      std::vector<Pattern> chain = flatten_seq(p);
      for (std::size_t i = 0; i < chain.size(); ++i) {
        const Pattern& e = chain[i];
        if (e.op == PatternOp::Not) {
          const Pattern& body = e.children[0];
          if (body.op != PatternOp::Type && body.op != PatternOp::Seq)
            errors.push_back(
                "negation must be applied to an event sequence or an event "
                "type");
          if (i > 0 && chain[i - 1].op == PatternOp::Not)
            errors.push_back("consecutive negations must be merged");
          const bool missing_flank = (i == 0) || (i + 1 == chain.size());
          if (missing_flank && !top_level_chain)
            errors.push_back(
                "a negation without a preceding or following positive "
                "sub-pattern is only supported at the top level of the "
                "pattern");
          check_pattern(body, false, errors);
        } else {
          check_pattern(e, false, errors);
        }
      }
      return;
    }
  }
}

}  // namespace detail

struct ValidationResult {
  Query query;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Normalizes and checks a parsed query against the structural rules:
/// negation placement, event type uniqueness, window sanity, and that every
/// referenced event type occurs in the pattern. Idempotent.
inline ValidationResult validate(const Query& q) {
  ValidationResult r;
  r.query = q;
  r.query.pattern = detail::normalize_pattern(q.pattern);
  const Pattern& p = r.query.pattern;

  if (p.op == PatternOp::Not) {
    r.errors.push_back("negation may not be the outermost operator");
    return r;
  }
  detail::check_pattern(p, p.op == PatternOp::Seq, r.errors);

  // Event types must be unique, except generated aliases of one base type.
  std::vector<std::string> types = pattern_types(p);
  std::set<std::string> seen;
  for (const auto& t : types)
    if (!seen.insert(t).second)
      r.errors.push_back("event type '" + t +
                         "' appears more than once in the pattern");

  std::set<std::string> base_types;
  for (const auto& t : types) base_types.insert(r.query.base_type(t));

  if (!contains_op(p, PatternOp::Plus) && !contains_op(p, PatternOp::Star))
    r.warnings.push_back(
        "pattern contains no Kleene operator; it degenerates to a "
        "fixed-length sequence");

  if (r.query.window.slide < 1)
    r.errors.push_back("window slide must be at least 1");
  if (r.query.window.size < r.query.window.slide)
    r.errors.push_back("window size must be at least the slide");

  const AggregateSpec& a = r.query.aggregate;
  if (a.kind != AggregateSpec::Kind::CountStar && !base_types.count(a.type))
    r.errors.push_back("aggregated event type '" + a.type +
                       "' does not occur in the pattern");

  for (const auto& pr : r.query.predicates) {
    if (pr.kind == Predicate::Kind::Equivalence) continue;
    if (!base_types.count(pr.subject_type))
      r.errors.push_back("predicate references event type '" +
                         pr.subject_type + "' not present in the pattern");
    if (pr.kind == Predicate::Kind::Edge && !base_types.count(pr.next_type))
      r.errors.push_back("predicate references event type '" + pr.next_type +
                         "' not present in the pattern");
  }
  for (const auto& g : r.query.group_by)
    if (g.empty()) r.errors.push_back("empty grouping attribute name");
  for (const auto& ra : r.query.return_attrs)
    if (std::find(r.query.group_by.begin(), r.query.group_by.end(), ra) ==
        r.query.group_by.end())
      r.errors.push_back("projected attribute '" + ra +
                         "' is not a grouping attribute");
  return r;
}

// ---------------------------------------------------------------------------
// Desugaring (Kleene star, optional)
// ---------------------------------------------------------------------------

namespace detail {

/// Returns the disjunction-free alternatives of a pattern. An engaged empty
/// optional alternative is represented by an absent entry flag via the bool.
struct Alternatives {
  std::vector<Pattern> patterns;
  bool allows_empty = false;
};

inline Alternatives desugar_alternatives(const Pattern& p) {
  Alternatives out;
  switch (p.op) {
    case PatternOp::Type:
      out.patterns.push_back(p);
      return out;
    case PatternOp::Plus: {
      Alternatives c = desugar_alternatives(p.children[0]);
      if (c.patterns.size() != 1 || c.allows_empty)
        throw UnsupportedPatternError(
            "Kleene star or optional under a Kleene plus has no defined "
            "rewrite");
      out.patterns.push_back(Pattern::make_plus(c.patterns[0]));
      return out;
    }
    case PatternOp::Star:
    case PatternOp::Optional: {
      Alternatives c = desugar_alternatives(p.children[0]);
      if (c.patterns.size() != 1 || c.allows_empty)
        throw UnsupportedPatternError(
            "nested Kleene star/optional has no defined rewrite");
      out.allows_empty = true;
      out.patterns.push_back(p.op == PatternOp::Star
                                 ? Pattern::make_plus(c.patterns[0])
                                 : c.patterns[0]);
      return out;
    }
    case PatternOp::Not: {
      Alternatives c = desugar_alternatives(p.children[0]);
      if (c.patterns.size() != 1 || c.allows_empty)
        throw UnsupportedPatternError(
            "Kleene star or optional under a negation has no defined rewrite");
      out.patterns.push_back(Pattern::make_not(c.patterns[0]));
      return out;
    }
    case PatternOp::Seq: {
      std::vector<Pattern> chain = flatten_seq(p);
      std::vector<Alternatives> elems;
      for (const auto& e : chain) elems.push_back(desugar_alternatives(e));
      // Cartesian product over element alternatives; an empty alternative
      // drops the element from the combination.
      std::vector<std::vector<Pattern>> combos{{}};
      for (const auto& alt : elems) {
        std::vector<std::vector<Pattern>> next;
        for (const auto& combo : combos) {
          for (const auto& ap : alt.patterns) {
            auto extended = combo;
            extended.push_back(ap);
            next.push_back(std::move(extended));
          }
          if (alt.allows_empty) next.push_back(combo);
        }
        combos = std::move(next);
      }
      std::set<std::string> dedup;
      for (auto& combo : combos) {
        if (combo.empty()) {
          out.allows_empty = true;
          continue;
        }
        Pattern built = combo.size() == 1 ? combo[0] : build_seq(combo);
        if (dedup.insert(print_pattern(built)).second)
          out.patterns.push_back(std::move(built));
      }
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Eliminates Kleene star and optional operators. The result is a set of
/// disjunction-free patterns whose window aggregates are combined by the
/// disjunction formulas (the desugared alternatives match disjoint trend
/// sets, so the overlap count is zero).
inline std::vector<Pattern> desugar(const Pattern& p) {
  detail::Alternatives alts = detail::desugar_alternatives(p);
  if (alts.patterns.empty())
    throw UnsupportedPatternError(
        "pattern matches only the empty trend after desugaring");
  if (alts.allows_empty && alts.patterns.size() == 1 &&
      (p.op == PatternOp::Star || p.op == PatternOp::Optional))
    throw UnsupportedPatternError(
        "top-level bare Kleene star/optional has no defined rewrite");
  return std::move(alts.patterns);
}

// ---------------------------------------------------------------------------
// Minimal trend length unrolling
// ---------------------------------------------------------------------------

/// Unrolls a bare Kleene plus over one event type to minimal trend length k:
/// E+ with k=3 becomes SEQ(E#1, E#2, E#3+) where every E#i is an alias of E.
/// New aliases are appended to `aliases` so stream routing can duplicate
/// matching events to each alias.
inline Pattern unroll_min_length(const Pattern& p, int k,
                                 std::map<std::string, std::string>& aliases) {
  if (k < 1)
    throw UnsupportedPatternError("minimal trend length must be at least 1");
  if (p.op != PatternOp::Plus || p.children[0].op != PatternOp::Type)
    throw UnsupportedPatternError(
        "minimal-length unrolling supports only a bare Kleene plus over a "
        "single event type");
  if (k == 1) return p;
  const std::string base = p.children[0].type;
  std::vector<Pattern> elems;
  for (int i = 1; i <= k; ++i) {
    std::string alias = base + "#" + std::to_string(i);
    aliases[alias] = base;
    Pattern t = Pattern::make_type(alias);
    elems.push_back(i == k ? Pattern::make_plus(std::move(t)) : std::move(t));
  }
  return build_seq(std::move(elems));
}

inline Query unroll_min_length(const Query& q, int k) {
  Query out = q;
  out.pattern = unroll_min_length(q.pattern, k, out.aliases);
  return out;
}

}  // namespace greta

#endif
