#ifndef GRETA_CSV_HPP
#define GRETA_CSV_HPP

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/engine.hpp"
#include "greta/event.hpp"

namespace greta {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  return out;
}

inline Value parse_value(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    Value v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) +
                    ": not an integer value: '" + s + "'");
  }
}

}  // namespace detail

/// Event stream CSV: header "type,time,<attr>,...", one event per row.
/// An empty cell means the event does not carry that attribute.
inline std::vector<Event> read_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty event stream file");
  std::vector<std::string> header = detail::split_csv_line(line);
  if (header.size() < 2 || header[0] != "type" || header[1] != "time")
    throw DataError("event stream header must start with 'type,time'");

  std::vector<Event> events;
  int line_no = 1;
  std::uint64_t seq = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    Event e;
    e.type = cells[0];
    if (e.type.empty())
      throw DataError("line " + std::to_string(line_no) + ": empty event type");
    e.time = detail::parse_value(cells[1], line_no);
    if (e.time < 0)
      throw DataError("line " + std::to_string(line_no) +
                      ": negative timestamp");
    e.seq = seq++;
    for (std::size_t i = 2; i < cells.size(); ++i)
      if (!cells[i].empty())
        e.attributes[header[i]] = detail::parse_value(cells[i], line_no);
    events.push_back(std::move(e));
  }
  return events;
}

inline void write_events_csv(std::ostream& out,
                             const std::vector<Event>& events) {
  std::vector<std::string> attrs;
  for (const auto& e : events)
    for (const auto& [k, v] : e.attributes)
      if (std::find(attrs.begin(), attrs.end(), k) == attrs.end())
        attrs.push_back(k);
  std::sort(attrs.begin(), attrs.end());
  out << "type,time";
  for (const auto& a : attrs) out << "," << a;
  out << "\n";
  for (const auto& e : events) {
    out << e.type << "," << e.time;
    for (const auto& a : attrs) {
      out << ",";
      if (e.has_attr(a)) out << e.attr(a);
    }
    out << "\n";
  }
}

/// Result CSV: "window_start,window_end,group_key,aggregate,value".
inline void write_results_csv(std::ostream& out,
                              const std::vector<ResultRow>& rows) {
  out << "window_start,window_end,group_key,aggregate,value\n";
  for (const auto& r : rows)
    out << r.window_start << "," << r.window_end << "," << r.group_key << ","
        << r.aggregate << "," << r.value << "\n";
}

inline std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty result file");
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = detail::split_csv_line(line);
    if (cells.size() != 5)
      throw DataError("line " + std::to_string(line_no) +
                      ": expected 5 cells");
    ResultRow r;
    r.window_start = detail::parse_value(cells[0], line_no);
    r.window_end = detail::parse_value(cells[1], line_no);
    r.group_key = cells[2];
    r.aggregate = cells[3];
    r.value = cells[4];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace greta

#endif
