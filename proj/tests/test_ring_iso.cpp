#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "llpack/ring_iso.hpp"
#include "ring_specs.hpp"

using namespace llpack;

namespace {

// Independent oracle: brute-force confirmation that a returned witness is a
// ring isomorphism, by checking every pair under + and * and bijectivity.
void brute_force_iso_check(const RingHom& h) {
  auto as = RElem::enumerate(h.from);
  std::set<std::string> image;
  for (const auto& x : as) image.insert(h.apply(x).key());
  REQUIRE(i64(image.size()) == h.from->cardinality());
  REQUIRE(h.from->cardinality() == h.to->cardinality());
  REQUIRE(h.apply(RElem::one(h.from)) == RElem::one(h.to));
  for (const auto& x : as)
    for (const auto& y : as) {
      REQUIRE(h.apply(x + y) == h.apply(x) + h.apply(y));
      REQUIRE(h.apply(x * y) == h.apply(x) * h.apply(y));
    }
}

}  // namespace

TEST_CASE("residue fields of equal size are isomorphic") {
  auto A = make_ring(eq_spec(2, 1), 1);
  auto B = make_ring(unram_spec(2, 1), 1);
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(c.close);
  REQUIRE(c.witness.has_value());
  brute_force_iso_check(*c.witness);
}

TEST_CASE("equal and mixed characteristic separate at precision 2 without ramification") {
  auto A = make_ring(eq_spec(2, 1), 2);
  auto B = make_ring(unram_spec(2, 1), 2);  // Z/4
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(!c.close);
  REQUIRE(c.certificate == "additive exponent 2 != 4");
}

TEST_CASE("ramification eats the carry: quadratic ramified matches precision 2") {
  // pi^2 = 2 has enough ramification that o/p^2 agrees with F_2[[t]]/t^2
  auto A = make_ring(eq_spec(2, 1), 2);
  auto B = make_ring(ram_spec(2, 2), 2);
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(c.close);
  brute_force_iso_check(*c.witness);
  // and the witness carries the uniformizer to a valuation-1 element
  REQUIRE(c.witness->apply(RElem::uniformizer(A)).valuation() == std::optional<int>(1));
}

TEST_CASE("ramified quadratic over the 3-adics matches equal characteristic at precision 2") {
  auto A = make_ring(eq_spec(3, 1), 2);
  auto B = make_ring(ram_spec(3, 2), 2);
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(c.close);
  brute_force_iso_check(*c.witness);
}

TEST_CASE("insufficient ramification is certified at precision 2") {
  auto A = make_ring(eq_spec(3, 1), 2);
  auto B = make_ring(unram_spec(3, 1), 2);  // Z/9
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(!c.close);
  REQUIRE(c.certificate == "additive exponent 3 != 9");
}

TEST_CASE("quadratic ramification runs out at precision 3") {
  auto A = make_ring(eq_spec(2, 1), 3);
  auto B = make_ring(ram_spec(2, 2), 3);
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(!c.close);
  REQUIRE(c.certificate == "additive exponent 2 != 4");
}

TEST_CASE("cardinality and residue field certificates") {
  auto A = make_ring(eq_spec(2, 1), 3);
  auto B = make_ring(eq_spec(2, 1), 2);
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(!c.close);
  REQUIRE(c.certificate.rfind("cardinality", 0) == 0);
  // F_4 vs Z/4: same size, different residue field
  auto C = make_ring(eq_spec(2, 2), 1);
  auto D = make_ring(unram_spec(2, 1), 2);
  CloseCheck c2 = closeness_witness(C, D);
  REQUIRE(!c2.close);
  REQUIRE(c2.certificate == "residue field F_4 != F_2");
}

TEST_CASE("exhaustion certificate when cheap invariants agree") {
  // pi^2 = 2 at precision 4 (additive Z/4 x Z/4) against pi^3 = 2 at
  // precision 4 (additive Z/4 x Z/2 x Z/2): same cardinality 16, same residue
  // field, same additive exponent 4 -- only the complete candidate search
  // separates them.
  auto A = make_ring(ram_spec(2, 2), 4);
  auto B = make_ring(ram_spec(2, 3), 4);
  REQUIRE(A->cardinality() == B->cardinality());
  REQUIRE(A->additive_exponent() == B->additive_exponent());
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(!c.close);
  REQUIRE(c.certificate == "exhausted candidate maps");
}

TEST_CASE("isomorphism is found between different Eisenstein presentations") {
  // pi^2 = 3 versus pi^2 = -3 over the 3-adics at precision 2: both are
  // o/p^2 for a ramified quadratic; at this precision they agree
  LocalFieldSpec s2 = ram_spec(3, 2);
  s2.eisenstein[0] = {3};  // pi^2 + 3 = 0
  auto A = make_ring(ram_spec(3, 2), 2);
  auto B = make_ring(s2, 2);
  CloseCheck c = closeness_witness(A, B);
  REQUIRE(c.close);
  brute_force_iso_check(*c.witness);
}

TEST_CASE("unramified embedding of the 2-adics into the quadratic Witt vectors") {
  auto A = make_ring(unram_spec(2, 1), 2);  // Z/4
  auto B = make_ring(unram_spec(2, 2), 2);  // GR(4, 2)
  RingHom h = unramified_embedding(A, B);
  auto as = RElem::enumerate(A);
  std::set<std::string> image;
  for (const auto& x : as) {
    image.insert(h.apply(x).key());
    for (const auto& y : as) {
      REQUIRE(h.apply(x + y) == h.apply(x) + h.apply(y));
      REQUIRE(h.apply(x * y) == h.apply(x) * h.apply(y));
    }
  }
  REQUIRE(i64(image.size()) == A->cardinality());
  REQUIRE(h.apply(RElem::uniformizer(A)) == RElem::uniformizer(B));
}

TEST_CASE("unramified embedding in equal characteristic") {
  auto A = make_ring(eq_spec(2, 1), 3);
  auto B = make_ring(eq_spec(2, 2), 3);
  RingHom h = unramified_embedding(A, B);
  REQUIRE(h.apply(RElem::uniformizer(A)) == RElem::uniformizer(B));
  auto as = RElem::enumerate(A);
  for (const auto& x : as)
    for (const auto& y : as) REQUIRE(h.apply(x * y) == h.apply(x) * h.apply(y));
}

TEST_CASE("precision reduction is a ring map") {
  auto R = make_ring(ram_spec(3, 2), 3);
  auto S = make_ring(ram_spec(3, 2), 2);
  auto all = RElem::enumerate(R);
  for (const auto& x : all)
    for (const auto& y : all) {
      REQUIRE(reduce_precision(x + y, S) == reduce_precision(x, S) + reduce_precision(y, S));
      REQUIRE(reduce_precision(x * y, S) == reduce_precision(x, S) * reduce_precision(y, S));
    }
  REQUIRE(reduce_precision(RElem::one(R), S) == RElem::one(S));
}

TEST_CASE("Hensel lifting of simple roots") {
  auto R = make_ring(unram_spec(2, 2), 3);
  // x^3 - 1 has the three cube roots of unity in GR(8, 2)
  std::vector<i64> poly{-1, 0, 0, 1};
  auto roots = lifted_roots(R, poly);
  REQUIRE(roots.size() == 3);
  for (const auto& r : roots) REQUIRE(r.pow(3) == RElem::one(R));
  // and they are distinct
  std::set<std::string> keys;
  for (const auto& r : roots) keys.insert(r.key());
  REQUIRE(keys.size() == 3);
}
