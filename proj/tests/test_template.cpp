#include <algorithm>

#include "doctest.h"
#include "greta/parser.hpp"
#include "greta/rewrite.hpp"
#include "greta/template.hpp"

using namespace greta;

namespace {
Pattern pat(const std::string& p) {
  Query q = parse_query("RETURN COUNT(*) PATTERN " + p +
                        " WITHIN 10 SLIDE 10");
  return detail::normalize_pattern(q.pattern);
}
bool has_transition(const Template& t, const std::string& from,
                    const std::string& to, Transition::Label label) {
  return std::any_of(t.transitions.begin(), t.transitions.end(),
                     [&](const Transition& tr) {
                       return tr.from == from && tr.to == to &&
                              tr.label == label;
                     });
}
}  // namespace

TEST_CASE("nested Kleene template") {
  Template t = generate_template(pat("(SEQ(A+, B))+"));
  CHECK(t.states == std::vector<std::string>{"A", "B"});
  CHECK(t.transitions.size() == 3);
  CHECK(has_transition(t, "A", "A", Transition::Label::Plus));
  CHECK(has_transition(t, "A", "B", Transition::Label::Seq));
  CHECK(has_transition(t, "B", "A", Transition::Label::Plus));
  CHECK(t.start == "A");
  CHECK(t.end == "B");
}

TEST_CASE("single-type Kleene template") {
  Template t = generate_template(pat("A+"));
  CHECK(t.states == std::vector<std::string>{"A"});
  CHECK(t.transitions.size() == 1);
  CHECK(has_transition(t, "A", "A", Transition::Label::Plus));
  CHECK(t.start == "A");
  CHECK(t.end == "A");
}

TEST_CASE("sequence template has no back transition") {
  Template t = generate_template(pat("SEQ(A+, B)"));
  CHECK(t.transitions.size() == 2);
  CHECK(has_transition(t, "A", "A", Transition::Label::Plus));
  CHECK(has_transition(t, "A", "B", Transition::Label::Seq));
  CHECK_FALSE(has_transition(t, "B", "A", Transition::Label::Plus));
  CHECK(t.start == "A");
  CHECK(t.end == "B");
}

TEST_CASE("predecessor types follow the transitions") {
  Template nested = generate_template(pat("(SEQ(A+, B))+"));
  auto pred_a = nested.pred_types("A");
  std::sort(pred_a.begin(), pred_a.end());
  CHECK(pred_a == std::vector<std::string>{"A", "B"});
  CHECK(nested.pred_types("B") == std::vector<std::string>{"A"});
  Template plain = generate_template(pat("A+"));
  CHECK(plain.pred_types("A") == std::vector<std::string>{"A"});
}

TEST_CASE("template dump tags states and lists transitions") {
  std::string d = generate_template(pat("SEQ(A+, B)")).dump();
  CHECK(d.find("START") != std::string::npos);
  CHECK(d.find("END") != std::string::npos);
  CHECK(d.find("A -> B") != std::string::npos);
}

TEST_CASE("splitting a nested negation pattern") {
  SubPatternPlan plan = split_pattern(pat("(SEQ(A+, NOT SEQ(C, NOT E, D), B))+"));
  CHECK(print_pattern(plan.positive) == "(SEQ(A+, B))+");
  REQUIRE(plan.negatives.size() == 2);
  CHECK(print_pattern(plan.negatives[0].pattern) == "SEQ(C, D)");
  CHECK(plan.negatives[0].previous_type.value() == "A");
  CHECK(plan.negatives[0].following_type.value() == "B");
  CHECK(plan.negatives[0].parent == -1);
  CHECK(print_pattern(plan.negatives[1].pattern) == "E");
  CHECK(plan.negatives[1].previous_type.value() == "C");
  CHECK(plan.negatives[1].following_type.value() == "D");
  CHECK(plan.negatives[1].parent == 0);
}

TEST_CASE("trailing negation has no following type") {
  SubPatternPlan plan = split_pattern(pat("SEQ(A+, NOT E)"));
  CHECK(print_pattern(plan.positive) == "A+");
  REQUIRE(plan.negatives.size() == 1);
  CHECK(plan.negatives[0].previous_type.value() == "A");
  CHECK(plan.negatives[0].following_type.has_value() == false);
}

TEST_CASE("leading negation has no previous type") {
  SubPatternPlan plan = split_pattern(pat("SEQ(NOT E, A+)"));
  CHECK(print_pattern(plan.positive) == "A+");
  REQUIRE(plan.negatives.size() == 1);
  CHECK(plan.negatives[0].previous_type.has_value() == false);
  CHECK(plan.negatives[0].following_type.value() == "A");
}

TEST_CASE("split and reassemble round-trips the pattern") {
  for (const char* text :
       {"(SEQ(A+, NOT SEQ(C, NOT E, D), B))+", "SEQ(A+, NOT E)",
        "SEQ(NOT E, A+)", "SEQ(A+, NOT C, B)", "(SEQ(A+, B))+"}) {
    Pattern p = pat(text);
    SubPatternPlan plan = split_pattern(p);
    CHECK(print_pattern(reassemble_pattern(plan)) == print_pattern(p));
  }
}
