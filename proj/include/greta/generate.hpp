#ifndef GRETA_GENERATE_HPP
#define GRETA_GENERATE_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "greta/common.hpp"
#include "greta/event.hpp"

namespace greta {

struct GenerateOptions {
  std::string workload;  // cluster | road | stock
  std::uint64_t events = 1000;
  double rate = 10.0;  // events per time unit
  std::uint64_t seed = 1;
};

namespace detail {

inline Time gen_time(std::uint64_t i, double rate) {
  if (rate <= 0) throw DataError("event rate must be positive");
  return static_cast<Time>(static_cast<double>(i) / rate);
}

/// Cluster monitoring: job lifecycle events S (submit), M (schedule),
/// E (evict/finish) with mapper/job ids, cpu/memory requests and a
/// Poisson-distributed cluster load.
inline std::vector<Event> gen_cluster(const GenerateOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> id(0, 10);
  std::uniform_int_distribution<Value> res(0, 1000);
  std::poisson_distribution<Value> load(100);
  std::uniform_int_distribution<int> kind(0, 2);
  static const char* kinds[] = {"S", "M", "E"};
  std::vector<Event> out;
  for (std::uint64_t i = 0; i < o.events; ++i) {
    Event e;
    e.type = kinds[kind(rng)];
    e.time = gen_time(i, o.rate);
    e.seq = i;
    e.attributes["mapper"] = id(rng);
    e.attributes["job"] = id(rng);
    e.attributes["cpu"] = res(rng);
    e.attributes["memory"] = res(rng);
    e.attributes["load"] = std::clamp<Value>(load(rng), 0, 10000);
    out.push_back(std::move(e));
  }
  return out;
}

/// Road traffic: position reports P (vehicle, segment, speed) with occasional
/// accident events A on a segment.
inline std::vector<Event> gen_road(const GenerateOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<Value> vehicle(0, 50);
  std::uniform_int_distribution<Value> segment(0, 9);
  std::normal_distribution<double> speed(60.0, 20.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Event> out;
  for (std::uint64_t i = 0; i < o.events; ++i) {
    Event e;
    e.time = gen_time(i, o.rate);
    e.seq = i;
    if (coin(rng) < 0.02) {
      e.type = "A";
      e.attributes["segment"] = segment(rng);
      e.attributes["vehicle"] = vehicle(rng);
      e.attributes["speed"] = 0;
    } else {
      e.type = "P";
      e.attributes["vehicle"] = vehicle(rng);
      e.attributes["segment"] = segment(rng);
      e.attributes["speed"] =
          std::max<Value>(0, static_cast<Value>(speed(rng)));
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// Stock ticks: S events carrying company, sector and a random-walk price.
inline std::vector<Event> gen_stock(const GenerateOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<Value> company(0, 19);
  std::uniform_int_distribution<Value> delta(-5, 5);
  std::vector<Value> price(20, 100);
  std::vector<Event> out;
  for (std::uint64_t i = 0; i < o.events; ++i) {
    Event e;
    e.type = "S";
    e.time = gen_time(i, o.rate);
    e.seq = i;
    const Value c = company(rng);
    price[c] = std::max<Value>(1, price[c] + delta(rng));
    e.attributes["company"] = c;
    e.attributes["sector"] = c % 5;
    e.attributes["price"] = price[c];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

inline std::vector<Event> generate_workload(const GenerateOptions& o) {
  if (o.workload == "cluster") return detail::gen_cluster(o);
  if (o.workload == "road") return detail::gen_road(o);
  if (o.workload == "stock") return detail::gen_stock(o);
  throw DataError("unknown workload '" + o.workload +
                  "' (expected cluster, road or stock)");
}

}  // namespace greta

#endif
