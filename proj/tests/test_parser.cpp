#include "doctest.h"
#include "greta/parser.hpp"
#include "greta/rewrite.hpp"

using namespace greta;

TEST_CASE("full query with variable, equivalence, edge predicate, group-by") {
  Query q = parse_query(
      "RETURN sector, COUNT(*) PATTERN Stock S+ WHERE [company,sector] AND "
      "S.price > NEXT(S).price GROUP-BY sector WITHIN 600 SLIDE 10");
  CHECK(q.aggregate.kind == AggregateSpec::Kind::CountStar);
  CHECK(q.return_attrs == std::vector<std::string>{"sector"});
  CHECK(q.pattern.op == PatternOp::Plus);
  CHECK(q.pattern.children[0].type == "Stock");
  CHECK(q.equivalence_attrs() == std::vector<std::string>{"company", "sector"});
  CHECK(q.group_by == std::vector<std::string>{"sector"});
  CHECK(q.window.size == 600);
  CHECK(q.window.slide == 10);
  bool has_edge = false;
  for (const auto& p : q.predicates)
    if (p.kind == Predicate::Kind::Edge) {
      has_edge = true;
      CHECK(p.subject_type == "Stock");
      CHECK(p.subject_attr == "price");
      CHECK(p.next_type == "Stock");
      CHECK(p.next_attr == "price");
      CHECK(p.cmp == Cmp::Gt);
    }
  CHECK(has_edge);
}

TEST_CASE("minimal query") {
  Query q = parse_query("RETURN COUNT(*) PATTERN A+ WITHIN 10 SLIDE 10");
  CHECK(q.aggregate.kind == AggregateSpec::Kind::CountStar);
  CHECK(q.pattern.op == PatternOp::Plus);
  CHECK(q.window.size == 10);
  CHECK(q.window.slide == 10);
  CHECK(q.group_by.empty());
  CHECK(q.predicates.empty());
}

TEST_CASE("outermost negation is rejected by validation") {
  Query q = parse_query("RETURN COUNT(*) PATTERN NOT A WITHIN 10 SLIDE 10");
  ValidationResult vr = validate(q);
  CHECK_FALSE(vr.ok());
  bool mentions_negation = false;
  for (const auto& e : vr.errors)
    if (e.find("negation") != std::string::npos) mentions_negation = true;
  CHECK(mentions_negation);
}

TEST_CASE("aggregate kinds parse") {
  CHECK(parse_query("RETURN COUNT(A) PATTERN A+ WITHIN 5 SLIDE 5")
            .aggregate.kind == AggregateSpec::Kind::CountType);
  CHECK(parse_query("RETURN MIN(A.x) PATTERN A+ WITHIN 5 SLIDE 5")
            .aggregate.kind == AggregateSpec::Kind::Min);
  CHECK(parse_query("RETURN MAX(A.x) PATTERN A+ WITHIN 5 SLIDE 5")
            .aggregate.kind == AggregateSpec::Kind::Max);
  CHECK(parse_query("RETURN SUM(A.x) PATTERN A+ WITHIN 5 SLIDE 5")
            .aggregate.kind == AggregateSpec::Kind::Sum);
  CHECK(parse_query("RETURN AVG(A.x) PATTERN A+ WITHIN 5 SLIDE 5")
            .aggregate.kind == AggregateSpec::Kind::Avg);
}

TEST_CASE("two-character comparison operators") {
  for (const char* op : {">=", "<=", "!=", "<>"}) {
    std::string text = std::string("RETURN COUNT(*) PATTERN A+ WHERE A.x ") +
                       op + " 3 WITHIN 5 SLIDE 5";
    Query q = parse_query(text);
    REQUIRE(q.predicates.size() == 1);
    CHECK(q.predicates[0].kind == Predicate::Kind::Local);
  }
}

TEST_CASE("malformed queries raise parse errors with position") {
  CHECK_THROWS_AS(parse_query("RETURN COUNT(*) PATTERN A+"), ParseError);
  CHECK_THROWS_AS(parse_query("PATTERN A+ WITHIN 5 SLIDE 5"), ParseError);
  CHECK_THROWS_AS(parse_query("RETURN COUNT(*) PATTERN WITHIN 5 SLIDE 5"),
                  ParseError);
  try {
    parse_query("RETURN COUNT(*) PATTERN A+ WITHIN x SLIDE 5");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
    CHECK(e.column() >= 1);
  }
}

TEST_CASE("print and reparse is a fixpoint") {
  const char* texts[] = {
      "RETURN COUNT(*) PATTERN (SEQ(A+, B))+ WITHIN 10 SLIDE 3",
      "RETURN SUM(A.x) PATTERN SEQ(A+, NOT SEQ(C, NOT E, D), B) "
      "WHERE A.x > 2 AND [p] GROUP-BY g WITHIN 12 SLIDE 4",
      "RETURN sector, AVG(S.price) PATTERN Stock S+ WHERE "
      "S.price > NEXT(S).price GROUP-BY sector WITHIN 600 SLIDE 10",
  };
  for (const char* t : texts) {
    Query q1 = parse_query(t);
    std::string printed = print_query(q1);
    Query q2 = parse_query(printed);
    CHECK(print_query(q2) == printed);
  }
}
