#ifndef GRETA_PAYLOAD_HPP
#define GRETA_PAYLOAD_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "greta/common.hpp"
#include "greta/query.hpp"

namespace greta {

enum class CountMode { Checked, Saturating };

using Sum128 = __int128;

/// Per-window intermediate aggregate bundle of one graph vertex.
/// `trend_start` is maintained only in negative graphs: the latest trend
/// start time over all trends ending at the vertex, needed to decide which
/// parent events a completed negative trend invalidates.
struct AggregatePayload {
  std::uint64_t count = 0;
  std::uint64_t count_e = 0;
  Sum128 sum = 0;
  Value min = 0;
  Value max = 0;
  bool has_min = false;
  bool has_max = false;
  Time trend_start = -1;
};

/// Adds counts, either rejecting or saturating on wrap-around.
/// Returns true if the addition saturated.
inline bool add_count(std::uint64_t& acc, std::uint64_t inc, CountMode mode,
                      const char* what, std::int64_t wid) {
  std::uint64_t next;
  if (__builtin_add_overflow(acc, inc, &next)) {
    if (mode == CountMode::Checked)
      throw OverflowError(std::string(what) + " overflow in window " +
                          std::to_string(wid));
    acc = std::numeric_limits<std::uint64_t>::max();
    return true;
  }
  acc = next;
  return false;
}

// numeric_limits is not specialized for __int128 in strict mode
constexpr Sum128 kSum128Max =
    static_cast<Sum128>((static_cast<unsigned __int128>(1) << 127) - 1);
constexpr Sum128 kSum128Min = -kSum128Max - 1;

inline bool add_sum(Sum128& acc, Sum128 inc, CountMode mode, std::int64_t wid) {
  Sum128 next;
  if (__builtin_add_overflow(acc, inc, &next)) {
    if (mode == CountMode::Checked)
      throw OverflowError("sum overflow in window " + std::to_string(wid));
    acc = inc >= 0 ? kSum128Max : kSum128Min;
    return true;
  }
  acc = next;
  return false;
}

inline std::string sum_to_string(Sum128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                            : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + int(u % 10)));
    u /= 10;
  }
  return neg ? "-" + digits : digits;
}

// ---------------------------------------------------------------------------
// Count combination for disjunctive and conjunctive patterns.
// `count_i` and `count_j` are the raw trend counts of the two sub-patterns;
// `c_ij` is the count of trends matched by both.
// ---------------------------------------------------------------------------

inline std::uint64_t combine_disjunction_count(std::uint64_t count_i,
                                               std::uint64_t count_j,
                                               std::uint64_t c_ij) {
  if (c_ij > count_i || c_ij > count_j)
    throw Error("inconsistent counts: overlap exceeds a sub-pattern count");
  std::uint64_t total;
  if (__builtin_add_overflow(count_i, count_j, &total))
    throw OverflowError("disjunction count overflow");
  return total - c_ij;
}

inline std::uint64_t combine_conjunction_count(std::uint64_t count_i,
                                               std::uint64_t count_j,
                                               std::uint64_t c_ij) {
  if (c_ij > count_i || c_ij > count_j)
    throw Error("inconsistent counts: overlap exceeds a sub-pattern count");
  const std::uint64_t only_i = count_i - c_ij;
  const std::uint64_t only_j = count_j - c_ij;
  auto checked_mul = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
      throw OverflowError("conjunction count overflow");
    return r;
  };
  auto checked_add = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
      throw OverflowError("conjunction count overflow");
    return r;
  };
  // pairs within the overlap: C(c_ij, 2)
  const std::uint64_t pairs =
      c_ij < 2 ? 0 : checked_mul(c_ij / 2, (c_ij - 1) | 1);
  std::uint64_t total = checked_mul(only_i, only_j);
  total = checked_add(total, checked_mul(only_i, c_ij));
  total = checked_add(total, checked_mul(only_j, c_ij));
  total = checked_add(total, pairs);
  return total;
}

}  // namespace greta

#endif
