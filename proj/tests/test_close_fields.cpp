#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "llpack/close_fields.hpp"
#include "ring_specs.hpp"

using namespace llpack;

namespace {

RElem random_elem(const RingPtr& R, std::mt19937_64& rng) {
  std::vector<int> ds(size_t(R->l()), 0);
  for (auto& d : ds) d = int(rng() % u64(R->q()));
  return RElem::from_digits(R, ds);
}

RMat random_gl(const RingPtr& R, int m, std::mt19937_64& rng) {
  for (;;) {
    RMat A(size_t(m), std::vector<RElem>(size_t(m), RElem::zero(R)));
    for (auto& row : A)
      for (auto& x : row) x = random_elem(R, rng);
    if (ring_det(A, R).is_unit()) return A;
  }
}

FMatrix random_kr(const RingPtr& R, int m, int r, std::mt19937_64& rng) {
  RMat A = rmat_identity(R, m);
  RElem pr = RElem::uniformizer(R).pow(r);
  for (auto& row : A)
    for (auto& x : row) x = x + pr * random_elem(R, rng);
  return FMatrix{R, 0, std::move(A)};
}

EllipticPiece piece(std::string id, int m, int a) {
  EllipticPiece p;
  p.weil_id = std::move(id);
  p.weil_dim = m;
  p.sl2_size = a;
  return p;
}

}  // namespace

TEST_CASE("cartan decomposition matches the pinned examples") {
  auto R = make_ring(eq_spec(2, 1), 9);
  RElem t = RElem::uniformizer(R), one = RElem::one(R), zero = RElem::zero(R);

  SECTION("identity") {
    auto c = cartan_decompose(fm_identity(R, 2), 1);
    REQUIRE(c.a == std::vector<int>{0, 0});
  }
  SECTION("diagonal with opposite exponents") {
    FMatrix g = fmatrix(R, -1, {{t * t, zero}, {zero, one}});
    auto c = cartan_decompose(g, 1);
    REQUIRE(c.a == std::vector<int>{-1, 1});
  }
  SECTION("an integral unit corner dominates the diagonal") {
    FMatrix g = fmatrix(R, 0, {{t, one}, {zero, t}});
    auto c = cartan_decompose(g, 1);
    REQUIRE(c.a == std::vector<int>{0, 2});
  }
  SECTION("mixed characteristic twin") {
    auto Z2 = make_ring(unram_spec(2, 1), 9);
    RElem p2 = RElem::from_integer(Z2, 2), o2 = RElem::one(Z2), z2 = RElem::zero(Z2);
    auto c = cartan_decompose(fmatrix(Z2, 0, {{p2, o2}, {z2, p2}}), 1);
    REQUIRE(c.a == std::vector<int>{0, 2});
  }
}

TEST_CASE("cartan recomposes exactly and reports precision needs") {
  std::mt19937_64 rng(42);
  for (auto spec : {eq_spec(2, 1), unram_spec(2, 1)}) {
    auto R = make_ring(spec, 9);
    RElem pi = RElem::uniformizer(R);
    for (int trial = 0; trial < 6; ++trial) {
      RMat U = random_gl(R, 3, rng), V = random_gl(R, 3, rng);
      RMat D = rmat_identity(R, 3);
      std::vector<int> e = {0, int(rng() % 2), int(rng() % 3)};
      for (int i = 0; i < 3; ++i) D[size_t(i)][size_t(i)] = pi.pow(e[size_t(i)]);
      FMatrix g = fmatrix(R, -1, rmat_mul(rmat_mul(U, D), V));
      auto c = cartan_decompose(g, 1);
      REQUIRE(std::is_sorted(c.a.begin(), c.a.end()));
      RMat DD = rmat_identity(R, 3);
      for (int i = 0; i < 3; ++i) DD[size_t(i)][size_t(i)] = pi.pow(c.a[size_t(i)] + 1);
      REQUIRE(rmat_eq(rmat_mul(rmat_mul(c.k_left, DD), c.k_right), g.a));
      REQUIRE(ring_det(c.k_left, R).is_unit());
      REQUIRE(ring_det(c.k_right, R).is_unit());
      auto dv = fm_det_valuation(g);
      REQUIRE(dv.has_value());
      REQUIRE(*dv == c.a[0] + c.a[1] + c.a[2]);
    }
  }

  SECTION("narrow window reports the width it needs") {
    auto R5 = make_ring(eq_spec(2, 1), 5);
    RElem t5 = RElem::uniformizer(R5);
    FMatrix g =
        fmatrix(R5, -2, {{t5.pow(4), RElem::zero(R5)}, {RElem::zero(R5), RElem::one(R5)}});
    try {
      cartan_decompose(g, 1);
      FAIL("expected precision_error");
    } catch (const precision_error& e) {
      REQUIRE(e.required_width == 6);
    }
  }
  SECTION("a vanishing block is a precision failure, not a zero answer") {
    auto R3 = make_ring(eq_spec(2, 1), 3);
    RElem z = RElem::zero(R3);
    REQUIRE_THROWS_AS(cartan_decompose(fmatrix(R3, 0, {{z, z}, {z, z}}), 0), precision_error);
  }
}

TEST_CASE("iwasawa decomposition fixes the diagonal cosets") {
  auto R = make_ring(eq_spec(2, 1), 9);
  RElem t = RElem::uniformizer(R), one = RElem::one(R), zero = RElem::zero(R);

  SECTION("identity and a lower shear absorbed by the compact") {
    REQUIRE(iwasawa_decompose(fm_identity(R, 2)).a == std::vector<int>{0, 0});
    FMatrix g = fmatrix(R, 0, {{one, zero}, {t, one}});
    REQUIRE(iwasawa_decompose(g).a == std::vector<int>{0, 0});
  }
  SECTION("diagonal matrices name themselves, unsorted") {
    FMatrix g = fmatrix(R, 0, {{t, zero}, {zero, one}});
    REQUIRE(iwasawa_decompose(g).a == std::vector<int>{1, 0});
  }
  SECTION("the exponents only see the right coset") {
    std::mt19937_64 rng(7);
    FMatrix g = fmatrix(R, -1, {{t * t, one}, {t, t.pow(3)}});
    auto base = iwasawa_decompose(g);
    REQUIRE(rmat_eq(rmat_mul(rmat_mul(base.u.a, rmat_identity(R, 2)), base.k),
                    rmat_mul(base.u.a, base.k)));
    for (int i = 0; i < 5; ++i) {
      RMat k = random_gl(R, 2, rng);
      auto d = iwasawa_decompose(fm_mul(g, FMatrix{R, 0, k}));
      REQUIRE(d.a == base.a);
    }
    RElem diag = RElem::uniformizer(R).pow(-base.u.vmin);
    for (int i = 0; i < 2; ++i) {
      REQUIRE(base.u.a[size_t(i)][size_t(i)] == diag);
      for (int j = 0; j < i; ++j) REQUIRE(base.u.a[size_t(i)][size_t(j)].is_zero());
    }
    REQUIRE(ring_det(base.k, R).is_unit());
  }
  SECTION("wider windows agree") {
    auto RW = make_ring(eq_spec(2, 1), 12);
    RElem tw = RElem::uniformizer(RW), ow = RElem::one(RW);
    FMatrix g9 = fmatrix(R, -1, {{t * t, one}, {t, t.pow(3)}});
    FMatrix g12 = fmatrix(RW, -1, {{tw * tw, ow}, {tw, tw.pow(3)}});
    REQUIRE(iwasawa_decompose(g9).a == iwasawa_decompose(g12).a);
  }
}

TEST_CASE("left coset keys separate and glue correctly") {
  auto spec = eq_spec(2, 1);
  auto R = make_ring(spec, 9);
  auto R1 = make_ring(spec, 1);
  std::mt19937_64 rng(5);
  RElem t = RElem::uniformizer(R), one = RElem::one(R), zero = RElem::zero(R);
  FMatrix w = fmatrix(R, -1, {{t.pow(3), one}, {t, t * t}});
  std::string base = left_coset_key(w, R1);
  for (int i = 0; i < 6; ++i)
    REQUIRE(left_coset_key(fm_mul(w, random_kr(R, 2, 1, rng)), R1) == base);
  FMatrix shear = fmatrix(R, 0, {{one, one}, {zero, one}});
  REQUIRE(left_coset_key(fm_mul(w, shear), R1) != base);
  FMatrix dil = fmatrix(R, 0, {{t, zero}, {zero, one}});
  REQUIRE(left_coset_key(fm_mul(w, dil), R1) != base);
  auto RW = make_ring(spec, 12);
  RElem tw = RElem::uniformizer(RW), ow = RElem::one(RW);
  FMatrix wW = fmatrix(RW, -1, {{tw.pow(3), ow}, {tw, tw * tw}});
  REQUIRE(left_coset_key(wW, R1) == base);
}

TEST_CASE("double coset labels are constant on double cosets") {
  auto spec = eq_spec(2, 1);
  auto R = make_ring(spec, 9);
  std::mt19937_64 rng(11);
  RElem t = RElem::uniformizer(R), one = RElem::one(R), zero = RElem::zero(R);
  FMatrix g = fmatrix(R, -1, {{t.pow(3), one}, {t, t * t}});
  DoubleCosetLabel L = double_coset_label(g, 1);
  REQUIRE(std::is_sorted(L.a.begin(), L.a.end()));
  REQUIRE(L.a[0] + L.a[1] == *fm_det_valuation(g));
  for (int i = 0; i < 4; ++i) {
    FMatrix h = fm_mul(random_kr(R, 2, 1, rng), fm_mul(g, random_kr(R, 2, 1, rng)));
    REQUIRE(double_coset_label(h, 1) == L);
  }
  REQUIRE(double_coset_label(fm_mul(g, fmatrix(R, 0, {{t, zero}, {zero, one}})), 1) != L);
  REQUIRE(double_coset_label(g, 1) == L);  // recomputation is deterministic

  auto spec3 = eq_spec(3, 1);
  auto R3 = make_ring(spec3, 9);
  RElem s = RElem::uniformizer(R3), o3 = RElem::one(R3);
  RElem two = RElem::from_integer(R3, 2);
  FMatrix g3 = fmatrix(R3, 0, {{s, two}, {o3, s * s}});
  DoubleCosetLabel L3 = double_coset_label(g3, 1);
  for (int i = 0; i < 3; ++i) {
    FMatrix h = fm_mul(random_kr(R3, 2, 1, rng), fm_mul(g3, random_kr(R3, 2, 1, rng)));
    REQUIRE(double_coset_label(h, 1) == L3);
  }
}

TEST_CASE("zeta witnesses exist where promised and fail with certificates") {
  SECTION("level one across characteristic") {
    auto A = make_ring(eq_spec(2, 1), 1), B = make_ring(unram_spec(2, 1), 1);
    ZetaWitness zw = zeta_witness(A, B);
    REQUIRE(zw.adapted);
    REQUIRE(!verify_hom(zw.hom, true).has_value());
  }
  SECTION("level two across characteristic is obstructed") {
    auto A = make_ring(eq_spec(2, 1), 2), B = make_ring(unram_spec(2, 1), 2);
    CloseCheck cc = closeness_witness(A, B);
    REQUIRE(!cc.close);
    REQUIRE(cc.certificate == "additive exponent 2 != 4");
    REQUIRE_THROWS_AS(zeta_witness(A, B), domain_error);
  }
  SECTION("ramification restores level two over p = 3") {
    auto A = make_ring(eq_spec(3, 1), 2), B = make_ring(ram_spec(3, 2), 2);
    ZetaWitness zw = zeta_witness(A, B);
    REQUIRE(zw.adapted);
    RingHom back = inverse_hom(zw.hom);
    for (const RElem& x : RElem::enumerate(A))
      REQUIRE(back.apply(zw.hom.apply(x)) == x);
    RingHom h1 = reduce_hom(zw.hom, 1);
    REQUIRE(check_hom_reduction(zw.hom, h1));
  }
}

TEST_CASE("coset labels ride the witness there and back") {
  auto specA = eq_spec(2, 1), specB = unram_spec(2, 1);
  auto A1 = make_ring(specA, 1), B1 = make_ring(specB, 1);
  ZetaWitness zw = zeta_witness(A1, B1);
  RingHom back = inverse_hom(zw.hom);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<int> a = {int(rng() % 3) - 1, int(rng() % 3) - 1};
    std::sort(a.begin(), a.end());
    RMat U = random_gl(A1, 2, rng), V = random_gl(A1, 2, rng);
    DoubleCosetLabel L = canonical_pair(specA, a, U, V);
    DoubleCosetLabel Lb = zeta_r(L, zw.hom, specB);
    REQUIRE(Lb.a == L.a);
    REQUIRE(zeta_r(Lb, back, specA) == L);
  }
  for (int e = -2; e <= 2; ++e) {  // rank one rides too
    DoubleCosetLabel L = canonical_pair(specA, {e}, {{RElem::one(A1)}}, {{RElem::one(A1)}});
    REQUIRE(zeta_r(zeta_r(L, zw.hom, specB), back, specA) == L);
  }

  SECTION("a witness below the label level is refused") {
    auto spec3 = eq_spec(3, 1);
    auto A2 = make_ring(spec3, 2), B2 = make_ring(ram_spec(3, 2), 2);
    ZetaWitness zw2 = zeta_witness(A2, B2);
    RingHom h1 = reduce_hom(zw2.hom, 1);
    DoubleCosetLabel L2 =
        canonical_pair(spec3, {0, 1}, rmat_identity(A2, 2), rmat_identity(A2, 2));
    REQUIRE_THROWS_AS(zeta_r(L2, h1, ram_spec(3, 2)), domain_error);
    REQUIRE(zeta_r(L2, zw2.hom, ram_spec(3, 2)).level == 2);
  }
}

TEST_CASE("hecke convolution counts cosets exactly") {
  SECTION("rank one is the group algebra of exponents and units") {
    auto spec = eq_spec(3, 1);
    auto R1 = make_ring(spec, 1);
    auto lab = [&](int e, int u) {
      return canonical_pair(spec, {e}, RMat{{RElem::from_residue(R1, u)}},
                            RMat{{RElem::one(R1)}});
    };
    HeckeElement f = hecke_indicator(lab(1, 1)), g = hecke_indicator(lab(2, 2));
    HeckeElement fg = hecke_convolve(f, g, spec);
    REQUIRE(fg == hecke_indicator(lab(3, 2)));
    REQUIRE(hecke_convolve(g, f, spec) == fg);
    REQUIRE(hecke_convolve(hecke_unit(spec, 1, 1), f, spec) == f);
    REQUIRE(hecke_convolve(f, hecke_unit(spec, 1, 1), spec) == f);
  }

  SECTION("the level one dilation class over F_2((t))") {
    auto spec = eq_spec(2, 1);
    auto R1 = make_ring(spec, 1);
    DoubleCosetLabel L =
        canonical_pair(spec, {0, 1}, rmat_identity(R1, 2), rmat_identity(R1, 2));
    REQUIRE(left_coset_count(L, spec) == 2);
    HeckeElement f = hecke_indicator(L);
    HeckeElement ff = hecke_convolve(f, f, spec);
    REQUIRE(ff.terms.size() == 1);
    const auto& [Lz, cz] = ff.terms.begin()->second;
    REQUIRE(Lz.a == std::vector<int>{0, 2});
    REQUIRE(cz == Rat(1));
    REQUIRE(left_coset_count(Lz, spec) == 4);
    REQUIRE(hecke_mass(ff, spec) == hecke_mass(f, spec) * hecke_mass(f, spec));
    HeckeElement e = hecke_unit(spec, 2, 1);
    REQUIRE(hecke_convolve(e, f, spec) == f);
    REQUIRE(hecke_convolve(f, e, spec) == f);
    REQUIRE(hecke_convolve(hecke_convolve(f, f, spec), f, spec) ==
            hecke_convolve(f, hecke_convolve(f, f, spec), spec));
    REQUIRE_THROWS_AS(hecke_convolve(f, f, spec, 3), budget_error);
  }
}

TEST_CASE("transport is a homomorphism of convolution algebras") {
  auto specA = eq_spec(2, 1), specB = unram_spec(2, 1);
  auto A1 = make_ring(specA, 1), B1 = make_ring(specB, 1);
  ZetaWitness zw = zeta_witness(A1, B1);
  RElem o = RElem::one(A1), z = RElem::zero(A1);
  DoubleCosetLabel L01 = canonical_pair(specA, {0, 1}, rmat_identity(A1, 2), rmat_identity(A1, 2));
  DoubleCosetLabel Lsw = canonical_pair(specA, {0, 1}, RMat{{z, o}, {o, z}}, rmat_identity(A1, 2));
  DoubleCosetLabel L11 = canonical_pair(specA, {-1, 1}, RMat{{o, o}, {z, o}}, rmat_identity(A1, 2));
  HeckeElement f = hecke_indicator(L01), g = hecke_indicator(Lsw), h = hecke_indicator(L11);
  std::vector<std::pair<HeckeElement, HeckeElement>> pairs = {{f, f}, {f, g}, {g, h}};
  ZetaHomReport rep = check_zeta_homomorphism(pairs, specA, specB, zw.hom);
  REQUIRE(rep.ok);
  REQUIRE(rep.pairs_checked == 3);
  REQUIRE(rep.mismatches.empty());
}

TEST_CASE("norm one restriction keeps determinant one classes") {
  SECTION("rank one drops every shifted class") {
    auto spec = eq_spec(2, 1);
    auto R1 = make_ring(spec, 1);
    DoubleCosetLabel Lpi = canonical_pair(spec, {1}, {{RElem::one(R1)}}, {{RElem::one(R1)}});
    REQUIRE(norm_one_restriction(hecke_indicator(Lpi)).terms.empty());
    HeckeElement e = hecke_unit(spec, 1, 1);
    REQUIRE(norm_one_restriction(e) == e);
  }
  SECTION("visible units at p = 3 are filtered by determinant") {
    auto spec = eq_spec(3, 1);
    auto R1 = make_ring(spec, 1);
    auto lab = [&](int u) {
      return canonical_pair(spec, {0}, RMat{{RElem::from_residue(R1, u)}},
                            RMat{{RElem::one(R1)}});
    };
    HeckeElement f;
    f.m = 1;
    f.level = 1;
    f.add(lab(1), Rat(1));
    f.add(lab(2), Rat(5));
    HeckeElement kept = norm_one_restriction(f);
    REQUIRE(kept == hecke_indicator(lab(1)));
    // determinant of the unit pair is an orbit invariant in rank two as well
    DoubleCosetLabel bal = canonical_pair(spec, {-1, 1}, rmat_identity(R1, 2),
                                          rmat_identity(R1, 2));
    RMat twisted = rmat_identity(R1, 2);
    twisted[0][0] = RElem::from_integer(R1, 2);
    DoubleCosetLabel off = canonical_pair(spec, {-1, 1}, twisted, rmat_identity(R1, 2));
    HeckeElement g;
    g.m = 2;
    g.level = 1;
    g.add(bal, Rat(1));
    g.add(off, Rat(1));
    REQUIRE(norm_one_restriction(g) == hecke_indicator(bal));
  }
  SECTION("idempotent and compatible with transport") {
    auto specA = eq_spec(2, 1), specB = unram_spec(2, 1);
    auto A1 = make_ring(specA, 1), B1 = make_ring(specB, 1);
    DoubleCosetLabel L01 =
        canonical_pair(specA, {0, 1}, rmat_identity(A1, 2), rmat_identity(A1, 2));
    DoubleCosetLabel L11 =
        canonical_pair(specA, {-1, 1}, rmat_identity(A1, 2), rmat_identity(A1, 2));
    HeckeElement f;
    f.m = 2;
    f.level = 1;
    f.add(L01, Rat(2));
    f.add(L11, Rat(3, 2));
    HeckeElement n1 = norm_one_restriction(f);
    REQUIRE(n1.terms.size() == 1);
    REQUIRE(norm_one_restriction(n1) == n1);
    ZetaWitness zw = zeta_witness(A1, B1);
    REQUIRE(zeta_transport(n1, zw.hom, specB) ==
            norm_one_restriction(zeta_transport(f, zw.hom, specB)));
  }
}

TEST_CASE("parameter transfer respects the depth gate") {
  FieldTaggedParameter P{"F_2((t))", make_parameter({{piece("a", 1, 2), 1}}),
                         RamificationProfile({}, 2, 2)};
  REQUIRE(depth_of_parameter(P) == Rat(0));
  FieldTaggedParameter Q = transfer_parameter(P, 1, "Q_2");
  REQUIRE(Q.field == "Q_2");
  REQUIRE(Q.phi.n == P.phi.n);
  REQUIRE(levi_support(Q.phi) == levi_support(P.phi));
  REQUIRE(depth_of_parameter(Q) == depth_of_parameter(P));
  REQUIRE(Q.phi.pieces == P.phi.pieces);

  FieldTaggedParameter deep{"F_2((t))", make_parameter({{piece("b", 2, 1), 1}}),
                            RamificationProfile({{Rat(3, 2), 2}}, 0, 2)};
  REQUIRE_THROWS_AS(transfer_parameter(deep, 1, "Q_2"), domain_error);
  FieldTaggedParameter moved = transfer_parameter(deep, 2, "Q_2");
  REQUIRE(depth_of_parameter(moved) == Rat(3, 2));
  REQUIRE(moved.field == "Q_2");
}
