#ifndef GRETA_TESTS_FIXTURES_HPP
#define GRETA_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "greta/event.hpp"

namespace greta::testsupport {

inline Event ev(std::string type, Time time,
                std::vector<std::pair<std::string, Value>> attrs = {},
                std::uint64_t seq = 0) {
  Event e;
  e.type = std::move(type);
  e.time = time;
  e.seq = seq;
  for (auto& [k, v] : attrs) e.attributes[k] = v;
  return e;
}

/// Five-event stream with two complete (SEQ(A+, B))+ trends worth of
/// structure: a1(x=5), b2, a3(x=6), a4(x=4), b7.
inline std::vector<Event> five_event_stream() {
  return {
      ev("A", 1, {{"x", 5}}, 0), ev("B", 2, {}, 1), ev("A", 3, {{"x", 6}}, 2),
      ev("A", 4, {{"x", 4}}, 3), ev("B", 7, {}, 4),
  };
}

/// Eleven-event stream mixing positive (A, B), negative (C, D, E) and
/// irrelevant types: a1, b2, c2, a3, e3, a4, c5, d6, b7, a8, b9.
inline std::vector<Event> eleven_event_stream() {
  std::vector<Event> out = {
      ev("A", 1), ev("B", 2), ev("C", 2), ev("A", 3), ev("E", 3), ev("A", 4),
      ev("C", 5), ev("D", 6), ev("B", 7), ev("A", 8), ev("B", 9),
  };
  for (std::size_t i = 0; i < out.size(); ++i) out[i].seq = i;
  return out;
}

}  // namespace greta::testsupport

#endif
