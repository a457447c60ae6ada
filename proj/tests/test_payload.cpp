#include "doctest.h"
#include "greta/payload.hpp"

using namespace greta;

TEST_CASE("disjunction combine uses inclusion-exclusion") {
  CHECK(combine_disjunction_count(5, 3, 0) == 8);
  CHECK(combine_disjunction_count(5, 5, 5) == 5);
  CHECK(combine_disjunction_count(7, 4, 2) == 9);
}

TEST_CASE("disjunction combine rejects inconsistent overlap") {
  CHECK_THROWS_AS(combine_disjunction_count(3, 4, 5), Error);
}

TEST_CASE("conjunction combine counts interleavings") {
  CHECK(combine_conjunction_count(3, 2, 0) == 6);
  CHECK(combine_conjunction_count(2, 2, 2) == 1);
  CHECK(combine_conjunction_count(4, 3, 1) == 11);
}

TEST_CASE("checked count addition throws on wrap-around") {
  std::uint64_t acc = UINT64_MAX - 1;
  CHECK_THROWS_AS(add_count(acc, 2, CountMode::Checked, "count", 0), OverflowError);
}

TEST_CASE("saturating count addition pins at the maximum") {
  std::uint64_t acc = UINT64_MAX - 1;
  bool sat = add_count(acc, 2, CountMode::Saturating, "count", 0);
  CHECK(sat);
  CHECK(acc == UINT64_MAX);
  sat = add_count(acc, 7, CountMode::Saturating, "count", 0);
  CHECK(sat);
  CHECK(acc == UINT64_MAX);
}

TEST_CASE("sums saturate symmetrically in saturating mode") {
  Sum128 acc = kSum128Max - 1;
  CHECK(add_sum(acc, 5, CountMode::Saturating, 0));
  CHECK(acc == kSum128Max);
  acc = kSum128Min + 1;
  CHECK(add_sum(acc, -5, CountMode::Saturating, 0));
  CHECK(acc == kSum128Min);
  acc = kSum128Max - 1;
  CHECK_THROWS_AS(add_sum(acc, 5, CountMode::Checked, 0), OverflowError);
}

TEST_CASE("plain sum additions report no saturation") {
  Sum128 acc = 0;
  CHECK_FALSE(add_sum(acc, 100, CountMode::Checked, 0));
  CHECK_FALSE(add_sum(acc, -250, CountMode::Checked, 0));
  CHECK(sum_to_string(acc) == "-150");
  CHECK(sum_to_string(0) == "0");
}

TEST_CASE("128-bit sums print past the 64-bit range") {
  Sum128 acc = static_cast<Sum128>(INT64_MAX);
  add_sum(acc, static_cast<Sum128>(INT64_MAX), CountMode::Checked, 0);
  CHECK(sum_to_string(acc) == "18446744073709551614");
}
