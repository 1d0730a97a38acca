#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "llpack/char_table.hpp"

using namespace llpack;

TEST_CASE("row reduction, nullspace, solve") {
  MatF A(7, 3, 3);
  i64 vals[9] = {1, 2, 3, 2, 4, 6, 1, 0, 1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A.at(i, j) = vals[3 * i + j];
  REQUIRE(A.rank() == 2);
  MatF ns = A.nullspace();
  REQUIRE(ns.c == 1);
  MatF prod = A * ns;
  for (int i = 0; i < 3; ++i) REQUIRE(prod.at(i, 0) == 0);
  MatF I = MatF::identity(7, 3);
  MatF B(7, 3, 3);
  i64 bvals[9] = {1, 1, 0, 0, 1, 0, 2, 0, 1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B.at(i, j) = bvals[3 * i + j];
  REQUIRE(B * B.inverse() == I);
}

TEST_CASE("characteristic polynomial and determinant") {
  // [[1,2],[3,4]] over F_11: charpoly x^2 - 5x - 2 = x^2 + 6x + 9
  MatF A(11, 2, 2);
  A.at(0, 0) = 1;
  A.at(0, 1) = 2;
  A.at(1, 0) = 3;
  A.at(1, 1) = 4;
  std::vector<i64> cp = A.charpoly();
  REQUIRE(cp == std::vector<i64>({9, 6, 1}));
  REQUIRE(A.det() == 9);  // det = -2 = 9 mod 11
  // 3x3 permutation matrix: det of a 3-cycle is +1, charpoly x^3 - 1
  MatF P(11, 3, 3);
  P.at(1, 0) = 1;
  P.at(2, 1) = 1;
  P.at(0, 2) = 1;
  REQUIRE(P.det() == 1);
  REQUIRE(P.charpoly() == std::vector<i64>({10, 0, 0, 1}));
  // gcd(3, 10) = 1, so x^3 = 1 has only the trivial root mod 11
  REQUIRE(poly_roots(P.charpoly(), 11) == std::vector<i64>({1}));
  // over F_7 all three cube roots of unity exist
  MatF P7 = P;
  P7.ell = 7;
  REQUIRE(poly_roots(P7.charpoly(), 7).size() == 3);
}

TEST_CASE("group factories satisfy the axioms and have the right shape") {
  REQUIRE(cyclic_group(6).is_abelian());
  REQUIRE(cyclic_group(6).exponent() == 6);
  FiniteGroup D4 = dihedral_group(4);
  REQUIRE(D4.order() == 8);
  REQUIRE(!D4.is_abelian());
  REQUIRE(D4.center().size() == 2);
  REQUIRE(D4.conjugacy_classes().size() == 5);
  FiniteGroup Q8 = quaternion_group(2);
  REQUIRE(Q8.order() == 8);
  REQUIRE(Q8.center().size() == 2);
  REQUIRE(Q8.conjugacy_classes().size() == 5);
  // every subgroup of Q8 is normal; it has a unique element of order 2
  int order2 = 0;
  for (int a = 0; a < 8; ++a)
    if (Q8.element_order(a) == 2) ++order2;
  REQUIRE(order2 == 1);
  int order2_d4 = 0;
  for (int a = 0; a < 8; ++a)
    if (D4.element_order(a) == 2) ++order2_d4;
  REQUIRE(order2_d4 == 5);  // the classical distinction from Q8
  FiniteGroup S3 = dihedral_group(3);
  REQUIRE(S3.conjugacy_classes().size() == 3);
  REQUIRE(S3.commutator_subgroup().size() == 3);
  REQUIRE(S3.quotient(S3.commutator_subgroup()).group.order() == 2);
  FiniteGroup V = direct_product(cyclic_group(2), cyclic_group(2));
  REQUIRE(V.is_abelian());
  REQUIRE(V.exponent() == 2);
}

TEST_CASE("permutation closure recovers the symmetric group") {
  PermGroup S3 = group_from_permutations(3, {{1, 0, 2}, {1, 2, 0}});
  REQUIRE(S3.group.order() == 6);
  REQUIRE(!S3.group.is_abelian());
  PermGroup A4 = group_from_permutations(4, {{1, 0, 3, 2}, {1, 2, 0, 3}});
  REQUIRE(A4.group.order() == 12);
}

TEST_CASE("semidirect products") {
  // Z/7 x| Z/3 acting by x -> 2x (2^3 = 1 mod 7): the Frobenius group of order 21
  FiniteGroup F21 = semidirect_cyclic(7, 3, 2);
  REQUIRE(F21.order() == 21);
  REQUIRE(!F21.is_abelian());
  REQUIRE(F21.conjugacy_classes().size() == 5);
  // S3 as a semidirect product
  FiniteGroup S3 = semidirect_cyclic(3, 2, 2);
  REQUIRE(S3.order() == 6);
  REQUIRE(S3.conjugacy_classes().size() == 3);
}

TEST_CASE("splitting primes") {
  REQUIRE(splitting_prime(dihedral_group(3)) == 7);
  REQUIRE(splitting_prime(quaternion_group(2)) == 13);  // exponent 4, order 8
  REQUIRE(splitting_prime(cyclic_group(5)) == 11);
  REQUIRE(splitting_prime(cyclic_group(4), 100) == 101);
}

TEST_CASE("character table of Z/4 over F_5") {
  FiniteGroup G = cyclic_group(4);
  CharTable T = character_table(G, 5);
  REQUIRE(T.num_classes() == 4);
  REQUIRE(T.dims == std::vector<i64>({1, 1, 1, 1}));
  // rows sorted lexicographically; 2 is a primitive fourth root of 1 mod 5
  REQUIRE(T.chi[0] == std::vector<i64>({1, 1, 1, 1}));
  REQUIRE(T.chi[1] == std::vector<i64>({1, 2, 4, 3}));
  REQUIRE(T.chi[2] == std::vector<i64>({1, 3, 4, 2}));
  REQUIRE(T.chi[3] == std::vector<i64>({1, 4, 1, 4}));
}

TEST_CASE("character table of S3 over F_7") {
  FiniteGroup G = dihedral_group(3);
  CharTable T = character_table(G, 7);
  REQUIRE(T.num_classes() == 3);
  std::vector<i64> dims = T.dims;
  std::sort(dims.begin(), dims.end());
  REQUIRE(dims == std::vector<i64>({1, 1, 2}));
  // identify classes: rotations form the class of size 2
  int rot_class = -1, ref_class = -1;
  for (int i = 0; i < 3; ++i) {
    if (T.classes[size_t(i)].size() == 2) rot_class = i;
    if (T.classes[size_t(i)].size() == 3) ref_class = i;
  }
  REQUIRE(rot_class >= 0);
  REQUIRE(ref_class >= 0);
  for (size_t r = 0; r < 3; ++r) {
    if (T.dims[r] == 2) {
      REQUIRE(T.chi[r][size_t(rot_class)] == 6);  // -1 mod 7
      REQUIRE(T.chi[r][size_t(ref_class)] == 0);
    }
  }
}

TEST_CASE("character tables of the order-8 nonabelian groups") {
  for (bool quat : {false, true}) {
    FiniteGroup G = quat ? quaternion_group(2) : dihedral_group(4);
    CharTable T = character_table(G, 17);
    std::vector<i64> dims = T.dims;
    std::sort(dims.begin(), dims.end());
    REQUIRE(dims == std::vector<i64>({1, 1, 1, 1, 2}));
  }
}

TEST_CASE("irreducible representations are recovered with matrices") {
  FiniteGroup S3 = dihedral_group(3);
  CharTable T = character_table(S3, 7);
  std::vector<RepF> reps = irreducible_reps(S3, T);
  REQUIRE(reps.size() == 3);
  for (size_t i = 0; i < reps.size(); ++i) REQUIRE(i64(reps[i].dim) == T.dims[i]);
  // the 2-dimensional representation: rotations have determinant 1,
  // reflections determinant -1
  for (size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].dim != 2) continue;
    for (int g = 0; g < 6; ++g) {
      i64 expect = (S3.element_order(g) == 2) ? 6 : 1;
      REQUIRE(reps[i](g).det() == expect);
    }
  }
}

TEST_CASE("irreducible representations of the quaternion group") {
  FiniteGroup Q8 = quaternion_group(2);
  CharTable T = character_table(Q8, 17);
  std::vector<RepF> reps = irreducible_reps(Q8, T);
  REQUIRE(reps.size() == 5);
  // the 2-dimensional representation is faithful
  for (size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].dim != 2) continue;
    std::set<std::vector<i64>> imgs;
    for (int g = 0; g < 8; ++g) imgs.insert(reps[i](g).d);
    REQUIRE(imgs.size() == 8);
  }
}

TEST_CASE("character table rejects bad moduli") {
  FiniteGroup S3 = dihedral_group(3);
  REQUIRE_THROWS_AS(character_table(S3, 5), domain_error);  // 5 != 1 mod 6
  REQUIRE_THROWS_AS(character_table(S3, 8), domain_error);  // not prime
  FiniteGroup V = direct_product(cyclic_group(2), cyclic_group(2));
  REQUIRE_THROWS_AS(character_table(V, 3), domain_error);  // 3 < |G| = 4
}
