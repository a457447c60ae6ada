#include "doctest.h"
#include "greta/oracle.hpp"
#include "greta/parser.hpp"
#include "support/fixtures.hpp"

using namespace greta;
using namespace greta::testsupport;

TEST_CASE("the worked example enumerates eleven trends") {
  Query q = parse_query(
      "RETURN COUNT(*) PATTERN (SEQ(A+, B))+ WITHIN 10 SLIDE 10");
  std::vector<Event> events = five_event_stream();
  Oracle o(q);
  std::vector<int> pool = {0, 1, 2, 3, 4};
  auto ts = o.trends(events, pool, 0, 10);
  CHECK(ts.size() == 11);
}

TEST_CASE("aggregates over the enumerated trend set") {
  std::vector<Event> events = five_event_stream();
  auto value = [&](const std::string& agg) {
    Query q = parse_query("RETURN " + agg +
                          " PATTERN (SEQ(A+, B))+ WITHIN 10 SLIDE 10");
    auto rows = run_oracle(q, events);
    REQUIRE(rows.size() == 1);
    return rows[0].value;
  };
  CHECK(value("COUNT(A)") == "20");
  CHECK(value("SUM(A.x)") == "100");
  CHECK(value("AVG(A.x)") == "5.0");
  CHECK(value("MIN(A.x)") == "4");
  CHECK(value("MAX(A.x)") == "6");
}

TEST_CASE("a singleton trend aggregates to its own attribute") {
  std::vector<Event> events = {ev("A", 1, {{"x", 5}})};
  auto value = [&](const std::string& agg) {
    Query q =
        parse_query("RETURN " + agg + " PATTERN A+ WITHIN 10 SLIDE 10");
    auto rows = run_oracle(q, events);
    REQUIRE(rows.size() == 1);
    return rows[0].value;
  };
  CHECK(value("MIN(A.x)") == "5");
  CHECK(value("MAX(A.x)") == "5");
  CHECK(value("SUM(A.x)") == "5");
  CHECK(value("COUNT(A)") == "1");
}

TEST_CASE("four events yield fifteen non-empty subsequences") {
  Query q = parse_query("RETURN COUNT(*) PATTERN A+ WITHIN 100 SLIDE 100");
  std::vector<Event> events;
  for (int i = 0; i < 4; ++i) events.push_back(ev("A", i, {}, i));
  auto rows = run_oracle(q, events);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "15");
}

TEST_CASE("edge predicate keeps only strictly falling price trends") {
  Query q = parse_query(
      "RETURN COUNT(*) PATTERN Stock S+ WHERE S.price > NEXT(S).price "
      "WITHIN 100 SLIDE 100");
  const Value prices[] = {10, 2, 9, 8, 7, 1, 6, 5, 4, 3};
  std::vector<Event> events;
  std::vector<int> pool;
  for (int i = 0; i < 10; ++i) {
    events.push_back(ev("Stock", i, {{"price", prices[i]}}, i));
    pool.push_back(i);
  }
  Oracle o(q);
  auto ts = o.trends(events, pool, 0, 100);
  // The longest falling trend picks indices of prices 10,9,8,7,6,5,4,3.
  std::vector<int> longest = {0, 2, 3, 4, 6, 7, 8, 9};
  CHECK(ts.count(longest) == 1);
  for (const auto& t : ts)
    for (std::size_t i = 1; i < t.size(); ++i)
      CHECK(events[t[i - 1]].attr("price") > events[t[i]].attr("price"));
}

TEST_CASE("the event-count budget refuses oversized windows") {
  Query q = parse_query("RETURN COUNT(*) PATTERN A+ WITHIN 100 SLIDE 100");
  std::vector<Event> events;
  for (int i = 0; i < 25; ++i) events.push_back(ev("A", i, {}, i));
  OracleOptions opt;
  opt.max_window_events = 20;
  CHECK_THROWS_AS(run_oracle(q, events, opt), OracleBudgetError);
}

TEST_CASE("the wall-clock budget interrupts long enumerations") {
  Query q = parse_query("RETURN COUNT(*) PATTERN A+ WITHIN 100 SLIDE 100");
  std::vector<Event> events;
  for (int i = 0; i < 24; ++i) events.push_back(ev("A", i, {}, i));
  OracleOptions opt;
  opt.max_window_events = SIZE_MAX;
  opt.timeout = std::chrono::milliseconds(1);
  CHECK_THROWS_AS(run_oracle(q, events, opt), OracleBudgetError);
}

TEST_CASE("negation example agrees with the incremental engine result") {
  Query q = parse_query(
      "RETURN COUNT(*) PATTERN (SEQ(A+, NOT SEQ(C, NOT E, D), B))+ "
      "WITHIN 10 SLIDE 10");
  auto rows = run_oracle(q, eleven_event_stream());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "13");
}

TEST_CASE("empty stream produces no rows") {
  Query q = parse_query("RETURN COUNT(*) PATTERN A+ WITHIN 10 SLIDE 10");
  CHECK(run_oracle(q, {}).empty());
}
