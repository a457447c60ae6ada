#include <random>

#include "doctest.h"
#include "greta/engine.hpp"
#include "greta/oracle.hpp"
#include "greta/parser.hpp"
#include "support/fixtures.hpp"

using namespace greta;
using namespace greta::testsupport;

namespace {
CompiledQuery compiled(const std::string& text, CompileOptions opt = {}) {
  return compile(parse_query(text), opt);
}
std::string value_of(const std::vector<ResultRow>& rows,
                     const std::string& agg) {
  for (const auto& r : rows)
    if (r.aggregate == agg) return r.value;
  return "<missing>";
}
}  // namespace

TEST_CASE("window assignment for sliding windows") {
  WindowSpec w{10, 3};
  CHECK(assign_windows(7, w) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(assign_windows(0, w) == std::vector<std::int64_t>{0});
  WindowSpec tumbling{10, 10};
  CHECK(assign_windows(37, tumbling) == std::vector<std::int64_t>{3});
  CHECK(w.start(2) == 6);
  CHECK(w.end(2) == 16);
  CHECK(w.windows_per_event() == 4);
}

TEST_CASE("partition key concatenates group-by and equivalence values") {
  Query q = parse_query(
      "RETURN sector, COUNT(*) PATTERN Stock S+ WHERE [company,sector] "
      "GROUP-BY sector WITHIN 600 SLIDE 10");
  Event e = ev("Stock", 1, {{"company", 42}, {"sector", 7}});
  CHECK(partition_key(e, q) == std::vector<Value>{7, 42, 7});
}

TEST_CASE("no group-by and no equivalence yields one global key") {
  Query q = parse_query("RETURN COUNT(*) PATTERN A+ WITHIN 10 SLIDE 10");
  CHECK(partition_key(ev("A", 1), q).empty());
}

TEST_CASE("events differing in an equivalence value never share a trend") {
  CompiledQuery cq = compiled(
      "RETURN COUNT(*) PATTERN Stock S+ WHERE [company] WITHIN 100 SLIDE 100");
  std::vector<Event> events = {
      ev("Stock", 1, {{"company", 1}}), ev("Stock", 2, {{"company", 2}}),
      ev("Stock", 3, {{"company", 1}})};
  auto rows = run_engine(cq, events);
  auto oracle_rows = run_oracle(cq.query, events);
  // company 1: (s1),(s3),(s1,s3) = 3; company 2: (s2) = 1. Without GROUP-BY
  // the per-company counts fold into a single global row; (s1,s2,s3) and the
  // other mixed-company trends are what the equivalence must exclude (the
  // unconstrained count would be 7).
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "4");
  CHECK(rows == oracle_rows);
}

TEST_CASE("the worked five-event example produces every aggregate") {
  std::vector<Event> events = five_event_stream();
  auto run = [&](const std::string& agg) {
    CompiledQuery cq = compiled("RETURN " + agg +
                                " PATTERN (SEQ(A+, B))+ WITHIN 10 SLIDE 10");
    auto rows = run_engine(cq, events);
    REQUIRE(rows.size() == 1);
    return rows[0].value;
  };
  CHECK(run("COUNT(*)") == "11");
  CHECK(run("COUNT(A)") == "20");
  CHECK(run("MIN(A.x)") == "4");
  CHECK(run("MAX(A.x)") == "6");
  CHECK(run("SUM(A.x)") == "100");
  CHECK(run("AVG(A.x)") == "5.0");
}

TEST_CASE("an event failing its local predicate creates no vertex") {
  CompiledQuery cq = compiled(
      "RETURN COUNT(*) PATTERN Stock S+ WHERE S.price > 0 WITHIN 10 SLIDE 10");
  Engine eng(cq);
  eng.ingest(ev("Stock", 1, {{"price", -1}}));
  eng.ingest(ev("Stock", 2, {{"price", 5}}));
  auto rows = eng.finish();
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "1");
  CHECK(eng.metrics().matched == 1);
}

TEST_CASE("timestamp regression raises an error naming the event") {
  CompiledQuery cq = compiled("RETURN COUNT(*) PATTERN A+ WITHIN 10 SLIDE 10");
  Engine eng(cq);
  eng.ingest(ev("A", 10));
  try {
    eng.ingest(ev("A", 7));
    FAIL("expected OutOfOrderError");
  } catch (const OutOfOrderError& e) {
    CHECK(std::string(e.what()).find("event #1") != std::string::npos);
  }
}

TEST_CASE("lenient mode drops and counts out-of-order events") {
  CompiledQuery cq = compiled("RETURN COUNT(*) PATTERN A+ WITHIN 10 SLIDE 10");
  Engine eng(cq, /*lenient=*/true);
  eng.ingest(ev("A", 10));
  eng.ingest(ev("A", 7));
  auto rows = eng.finish();
  CHECK(eng.metrics().dropped == 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "1");
}

TEST_CASE("events missing a partition attribute are dropped with a count") {
  CompiledQuery cq = compiled(
      "RETURN g, COUNT(*) PATTERN A+ GROUP-BY g WITHIN 10 SLIDE 10");
  Engine eng(cq);
  eng.ingest(ev("A", 1));  // no g attribute
  eng.ingest(ev("A", 2, {{"g", 1}}));
  auto rows = eng.finish();
  CHECK(eng.metrics().dropped == 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].group_key == "1");
  CHECK(rows[0].value == "1");
}

TEST_CASE("watermark emits exactly the closed windows") {
  CompiledQuery cq = compiled("RETURN COUNT(*) PATTERN A+ WITHIN 10 SLIDE 3");
  Engine eng(cq);
  for (Time t : {1, 4, 11}) eng.ingest(ev("A", t));
  CHECK(eng.advance_watermark(5).empty());  // no window has closed yet
  auto rows = eng.advance_watermark(13);
  REQUIRE(rows.size() == 2);  // w0 [0,10) and w1 [3,13)
  CHECK(rows[0].window_start == 0);
  CHECK(rows[0].value == "3");  // (a1),(a4),(a1,a4)
  CHECK(rows[1].window_start == 3);
  CHECK(rows[1].value == "3");  // (a4),(a11),(a4,a11)
  CHECK(eng.advance_watermark(13).empty());  // nothing new
}

TEST_CASE("average formatting uses exact decimal division") {
  CHECK(format_avg(5, 1) == "5.0");
  CHECK(format_avg(10, 4) == "2.5");
  CHECK(format_avg(-10, 4) == "-2.5");
  CHECK(format_avg(1, 3) == "0.333333");
  CHECK(format_avg(0, 7) == "0.0");
}

TEST_CASE("checked mode raises on count overflow, saturating mode flags it") {
  // 70 co-windowed A events give 2^70 - 1 trends, past the 64-bit range.
  std::vector<Event> events;
  for (int i = 0; i < 70; ++i) events.push_back(ev("A", i, {}, i));
  CompiledQuery checked =
      compiled("RETURN COUNT(*) PATTERN A+ WITHIN 100 SLIDE 100");
  CHECK_THROWS_AS(run_engine(checked, events), OverflowError);

  CompileOptions opt;
  opt.mode = CountMode::Saturating;
  CompiledQuery sat =
      compiled("RETURN COUNT(*) PATTERN A+ WITHIN 100 SLIDE 100", opt);
  EngineMetrics m;
  auto rows = run_engine(sat, events, &m);
  REQUIRE(rows.size() == 1);
  CHECK(m.saturated);
  CHECK(rows[0].value == std::to_string(UINT64_MAX));
}

TEST_CASE("minimal trend length filters short trends in both engines") {
  CompileOptions opt;
  opt.min_length = 3;
  CompiledQuery cq = compiled("RETURN COUNT(*) PATTERN A+ WITHIN 10 SLIDE 10", opt);
  std::vector<Event> events = {ev("A", 1), ev("A", 2), ev("A", 3), ev("A", 4)};
  auto rows = run_engine(cq, events);
  OracleOptions oo;
  oo.min_length = 3;
  auto orows = run_oracle(cq.query, events, oo);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "5");  // trends of length >= 3 out of 4 events
  CHECK(rows == orows);
}

TEST_CASE("sharded parallel run matches the sequential run") {
  CompiledQuery cq = compiled(
      "RETURN g, SUM(A.x) PATTERN (SEQ(A+, B))+ GROUP-BY g WITHIN 8 SLIDE 4");
  std::mt19937_64 rng(99);
  std::vector<Event> events;
  Time t = 0;
  for (int i = 0; i < 60; ++i) {
    t += rng() % 2;
    events.push_back(ev(rng() % 2 ? "A" : "B", t,
                        {{"x", Value(rng() % 10)}, {"g", Value(rng() % 4)}},
                        i));
  }
  auto seq_rows = run_engine(cq, events);
  std::sort(seq_rows.begin(), seq_rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return std::tie(a.window_start, a.group_key) <
                     std::tie(b.window_start, b.group_key);
            });
  auto par_rows = run_engine_parallel(cq, events, 3);
  CHECK(seq_rows == par_rows);
}

TEST_CASE("star and optional disjuncts are combined without double counting") {
  std::vector<Event> events = {ev("A", 1, {{"x", 2}}), ev("B", 2, {{"x", 9}})};
  CompiledQuery star =
      compiled("RETURN COUNT(*) PATTERN SEQ(A*, B) WITHIN 10 SLIDE 10");
  auto rows = run_engine(star, events);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "2");  // (a1,b2) and (b2)
  CHECK(rows == run_oracle(star.query, events));

  CompiledQuery opt =
      compiled("RETURN COUNT(*) PATTERN SEQ(A?, B) WITHIN 10 SLIDE 10");
  rows = run_engine(opt, events);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == "2");
  CHECK(rows == run_oracle(opt.query, events));
}

TEST_CASE("grouped aggregates fold per group key") {
  CompiledQuery cq = compiled(
      "RETURN g, MAX(A.x) PATTERN A+ GROUP-BY g WITHIN 10 SLIDE 10");
  std::vector<Event> events = {
      ev("A", 1, {{"x", 3}, {"g", 0}}), ev("A", 2, {{"x", 8}, {"g", 1}}),
      ev("A", 3, {{"x", 5}, {"g", 0}})};
  auto rows = run_engine(cq, events);
  REQUIRE(rows.size() == 2);
  CHECK(value_of(rows, "MAX(A.x)") != "<missing>");
  for (const auto& r : rows) {
    if (r.group_key == "0") CHECK(r.value == "5");
    if (r.group_key == "1") CHECK(r.value == "8");
  }
  CHECK(rows == run_oracle(cq.query, events));
}
