#ifndef GRETA_EVENT_HPP
#define GRETA_EVENT_HPP

#include <cstdint>
#include <map>
#include <string>

#include "greta/common.hpp"

namespace greta {

/// A primitive stream event. `seq` is the arrival sequence number and is used
/// only as a deterministic iteration tiebreaker, never for adjacency.
struct Event {
  std::string type;
  Time time = 0;
  std::uint64_t seq = 0;
  std::map<std::string, Value> attributes;

  bool has_attr(const std::string& name) const {
    return attributes.find(name) != attributes.end();
  }

  Value attr(const std::string& name) const {
    auto it = attributes.find(name);
    if (it == attributes.end())
      throw DataError("event " + type + "@" + std::to_string(time) +
                      " has no attribute '" + name + "'");
    return it->second;
  }
};

}  // namespace greta

#endif
