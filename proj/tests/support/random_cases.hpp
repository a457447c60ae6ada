#ifndef GRETA_TESTS_RANDOM_CASES_HPP
#define GRETA_TESTS_RANDOM_CASES_HPP

#include <random>
#include <string>
#include <vector>

#include "greta/engine.hpp"
#include "greta/event.hpp"
#include "greta/parser.hpp"

namespace greta::testsupport {

struct RandomCase {
  std::string query_text;
  Query query;
  std::vector<Event> events;
};

/// Pattern shapes (at most 7 pattern nodes), covering plain Kleene patterns,
/// star/optional sugar, and the three negation placements: negation between
/// two positive flanks, trailing negation, and leading negation.
inline const std::vector<std::pair<std::string, std::vector<std::string>>>&
pattern_pool() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>>
      pool = {
          {"A+", {"A"}},
          {"SEQ(A+, B)", {"A", "B"}},
          {"(SEQ(A+, B))+", {"A", "B"}},
          {"SEQ(A, B+, C)", {"A", "B", "C"}},
          {"SEQ(A+, B+)", {"A", "B"}},
          {"SEQ(A*, B)", {"A", "B"}},
          {"SEQ(A+, B?, C)", {"A", "B", "C"}},
          {"SEQ(A+, NOT C, B)", {"A", "B"}},
          {"SEQ(A+, NOT SEQ(C, D), B)", {"A", "B"}},
          {"SEQ(A+, B, NOT C)", {"A", "B"}},
          {"SEQ(NOT C, A+, B)", {"A", "B"}},
          {"(SEQ(A+, NOT SEQ(C, NOT E, D), B))+", {"A", "B"}},
      };
  return pool;
}

/// Stream event types per pattern, including the negative and noise types.
inline std::vector<std::string> stream_types(std::size_t pattern_idx) {
  switch (pattern_idx) {
    case 0: return {"A", "Z"};
    case 1:
    case 2: return {"A", "B", "Z"};
    case 3: return {"A", "B", "C", "Z"};
    case 4:
    case 5: return {"A", "B", "Z"};
    case 6: return {"A", "B", "C", "Z"};
    case 7: return {"A", "B", "C", "Z"};
    case 8: return {"A", "B", "C", "D", "Z"};
    case 9:
    case 10: return {"A", "B", "C", "Z"};
    default: return {"A", "B", "C", "D", "E", "Z"};
  }
}

inline RandomCase make_case(std::mt19937_64& rng) {
  const auto& pool = pattern_pool();
  std::uniform_int_distribution<std::size_t> pick_pattern(0, pool.size() - 1);
  const std::size_t pi = pick_pattern(rng);
  const auto& [pattern, positive_types] = pool[pi];

  std::uniform_int_distribution<int> d6(0, 5);
  std::string agg;
  const std::string& at =
      positive_types[rng() % positive_types.size()];
  switch (d6(rng)) {
    case 0: agg = "COUNT(*)"; break;
    case 1: agg = "COUNT(" + at + ")"; break;
    case 2: agg = "MIN(" + at + ".x)"; break;
    case 3: agg = "MAX(" + at + ".x)"; break;
    case 4: agg = "SUM(" + at + ".x)"; break;
    default: agg = "AVG(" + at + ".x)"; break;
  }

  std::vector<std::string> preds;
  if (rng() % 3 == 0)
    preds.push_back(positive_types[rng() % positive_types.size()] + ".x > " +
                    std::to_string(rng() % 5));
  if (rng() % 3 == 0) {
    const std::string& t1 = positive_types[rng() % positive_types.size()];
    const std::string& t2 = positive_types[rng() % positive_types.size()];
    static const char* cmps[] = {"<=", "<", "=", ">=", ">"};
    preds.push_back(t1 + ".x " + cmps[rng() % 5] + " NEXT(" + t2 + ").x");
  }
  if (rng() % 4 == 0) preds.push_back("[p]");

  const bool grouped = rng() % 3 == 0;
  const int group_values = 1 + static_cast<int>(rng() % 3);

  std::uniform_int_distribution<Time> size_d(1, 12);
  const Time size = size_d(rng);
  std::uniform_int_distribution<Time> slide_d(1, std::min<Time>(size, 6));
  const Time slide = slide_d(rng);

  std::string text = "RETURN " + agg + " PATTERN " + pattern;
  if (!preds.empty()) {
    text += " WHERE ";
    for (std::size_t i = 0; i < preds.size(); ++i)
      text += (i ? " AND " : "") + preds[i];
  }
  if (grouped) text += " GROUP-BY g";
  text += " WITHIN " + std::to_string(size) + " SLIDE " + std::to_string(slide);

  RandomCase rc;
  rc.query_text = text;
  rc.query = parse_query(text);

  const std::vector<std::string> types = stream_types(pi);
  std::uniform_int_distribution<std::size_t> n_events(0, 14);
  const std::size_t n = n_events(rng);
  Time t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += static_cast<Time>(rng() % 3);  // equal timestamps are possible
    Event e;
    e.type = types[rng() % types.size()];
    e.time = t;
    e.seq = i;
    e.attributes["x"] = static_cast<Value>(rng() % 10);
    e.attributes["g"] = static_cast<Value>(rng() % group_values);
    e.attributes["p"] = static_cast<Value>(rng() % 2);
    rc.events.push_back(std::move(e));
  }
  return rc;
}

inline std::vector<ResultRow> sorted_rows(std::vector<ResultRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return std::tie(a.window_start, a.group_key, a.value) <
                     std::tie(b.window_start, b.group_key, b.value);
            });
  return rows;
}

}  // namespace greta::testsupport

#endif
