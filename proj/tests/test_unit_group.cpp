#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "llpack/unit_group.hpp"
#include "ring_specs.hpp"

using namespace llpack;

namespace {

// Independent oracle: multiply everything out and compare against the claimed
// direct-product decomposition.
void brute_force_group_check(const UnitGroup& U) {
  // claimed order equals the actual number of units
  i64 units = 0;
  for (const auto& x : RElem::enumerate(U.ring))
    if (x.is_unit()) ++units;
  REQUIRE(units == U.order);
  // generator orders are exact
  for (size_t i = 0; i < U.gens.size(); ++i) {
    REQUIRE(U.gens[i].pow(U.orders[i]) == RElem::one(U.ring));
    for (i64 d = 1; d < U.orders[i]; ++d)
      if (U.orders[i] % d == 0) REQUIRE(!(U.gens[i].pow(d) == RElem::one(U.ring)));
  }
  // the exponent map is a bijection onto the units
  std::set<std::string> seen;
  i64 total = 1;
  for (i64 o : U.orders) total *= o;
  REQUIRE(total == U.order);
  for (const auto& kv : U.dlog) {
    seen.insert(kv.first);
    REQUIRE(U.from_exponents(kv.second).key() == kv.first);
  }
  REQUIRE(i64(seen.size()) == U.order);
  // round trip through exponents
  for (const auto& x : RElem::enumerate(U.ring)) {
    if (!x.is_unit()) continue;
    REQUIRE(U.from_exponents(U.exponents_of(x)) == x);
  }
}

std::vector<i64> sorted_orders(const UnitGroup& U) {
  std::vector<i64> o = U.orders;
  std::sort(o.begin(), o.end());
  return o;
}

}  // namespace

TEST_CASE("units of F_2[t]/t^3 form a cyclic group of order 4") {
  auto R = make_ring(eq_spec(2, 1), 3);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 4);
  REQUIRE(sorted_orders(U) == std::vector<i64>({4}));
  // 1 + t generates: its square is 1 + t^2, not 1
  RElem t = RElem::uniformizer(R);
  RElem g = RElem::one(R) + t;
  REQUIRE(g * g == RElem::one(R) + t * t);
  REQUIRE(U.exponent() == 4);
  brute_force_group_check(U);
}

TEST_CASE("units of Z/9 form a cyclic group of order 6") {
  auto R = make_ring(unram_spec(3, 1), 2);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 6);
  REQUIRE(sorted_orders(U) == std::vector<i64>({2, 3}));
  REQUIRE(U.exponent() == 6);
  brute_force_group_check(U);
}

TEST_CASE("units of Z/4") {
  auto R = make_ring(unram_spec(2, 1), 2);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 2);
  REQUIRE(sorted_orders(U) == std::vector<i64>({2}));
  brute_force_group_check(U);
}

TEST_CASE("units of F_4[[t]]/t^2") {
  auto R = make_ring(eq_spec(2, 2), 2);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 12);
  REQUIRE(sorted_orders(U) == std::vector<i64>({2, 2, 3}));
  brute_force_group_check(U);
}

TEST_CASE("units of the quadratic Witt vectors GR(4,2)") {
  auto R = make_ring(unram_spec(2, 2), 2);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 12);
  REQUIRE(sorted_orders(U) == std::vector<i64>({2, 2, 3}));
  brute_force_group_check(U);
}

TEST_CASE("units of the ramified quadratic over the 3-adics at precision 2") {
  auto R = make_ring(ram_spec(3, 2), 2);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 6);
  REQUIRE(sorted_orders(U) == std::vector<i64>({2, 3}));
  brute_force_group_check(U);
}

TEST_CASE("units of a residue field are cyclic") {
  auto R = make_ring(eq_spec(5, 1), 1);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 4);
  REQUIRE(sorted_orders(U) == std::vector<i64>({4}));
  brute_force_group_check(U);
  auto S = make_ring(eq_spec(2, 1), 1);
  UnitGroup V = unit_group(S);
  REQUIRE(V.order == 1);
  REQUIRE(V.gens.empty());
}

TEST_CASE("units of Z/8: the first noncyclic principal unit group") {
  auto R = make_ring(unram_spec(2, 1), 3);
  UnitGroup U = unit_group(R);
  REQUIRE(U.order == 4);
  REQUIRE(sorted_orders(U) == std::vector<i64>({2, 2}));
  brute_force_group_check(U);
}
