// Acceptance gate: one shipped guarantee per numbered check, each reported as
// a single [PASS]/[FAIL] line with its wall time; exits nonzero if any fails.
// argv[1] names the worked-example catalog directory (default "catalog").

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "catalog_io.hpp"
#include "ring_specs.hpp"

#include "llpack/close_fields.hpp"

using namespace llpack;
using nlohmann::json;
using Entry = llpack::catalog::Entry;

namespace {

void need(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

struct Gate {
  int failures = 0;

  /** Run one criterion; a nonpositive limit means no time budget. */
  void run(int idx, const std::string& what, long limit_ms, const std::function<void()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string err;
    try {
      body();
    } catch (const std::exception& e) {
      err = e.what();
    }
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    if (err.empty() && limit_ms > 0 && ms > limit_ms)
      err = "exceeded the " + std::to_string(limit_ms) + " ms budget";
    if (err.empty()) {
      std::printf("[PASS] %2d  %s  (%ld ms)\n", idx, what.c_str(), ms);
    } else {
      ++failures;
      std::printf("[FAIL] %2d  %s  (%ld ms): %s\n", idx, what.c_str(), ms, err.c_str());
    }
    std::fflush(stdout);
  }
};

std::vector<int> whole_group(const FiniteGroup& G) {
  std::vector<int> v(size_t(G.order()));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

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

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "catalog";
  catalog::Catalog cat = catalog::load_catalog(dir);
  Gate gate;

  gate.run(1, "order-2 component group splits a rank-2 packet across the two inner forms", 1000,
           [&] {
             const Entry& e = cat.at("gl2-quaternion-gl");
             catalog::BuiltParameter bp = catalog::build_parameter(e);
             need(!bp.phi.sl_side && bp.phi.n == 2, "entry must be a GL-side size-2 parameter");
             need(is_elliptic(bp.phi), "entry must be elliptic");
             GlSGroup gls = s_group_gl(bp.phi);
             need(gls.g == 2, "component group must have order 2");
             CentralExtension E = to_extension(gls);
             need(E.S.order() == 2 && E.S.is_abelian(), "component group must be Z/2");
             CentralCharacterClasses C = irr_with_central_character(E);
             auto enh = enumerate_enhanced(2, E, C);
             need(enh.size() == 2, "exactly two enhancements expected");
             for (const auto& ep : enh) {
               need(ep.dim == 1, "both packet members are multiplicity one");
               if (ep.central_char == 0)
                 need(ep.form == make_inner_form(2, 1, 0),
                      "the trivial character must land on the matrix form");
               else
                 need(ep.central_char == 1 && ep.form == make_inner_form(2, 2, 1),
                      "the sign character must land on the quaternion form");
             }
           });

  gate.run(2, "gcd component groups agree with the brute-force commutant oracle everywhere", 30000,
           [&] {
             int checked = 0;
             for (const Entry& e : cat.entries) {
               if (e.kind != "parameter") continue;
               catalog::BuiltParameter bp = catalog::build_parameter(e);
               need(bp.phi.n <= 6, e.name + ": catalog parameters stay at size <= 6");
               LanglandsParameter gl = bp.phi;
               gl.sl_side = false;
               GlSGroup gls = s_group_gl(gl);
               CentralizerReport orc = brute_force_centralizer_oracle(matrix_realization(gl, bp.ell));
               need(orc.certified, e.name + ": oracle failed to certify its witness");
               need(orc.g == gls.g, e.name + ": component order disagrees with the oracle");
               std::multiset<std::pair<int, int>> formula, oracle;
               for (size_t i = 0; i < gls.piece_dims.size(); ++i)
                 formula.insert({gls.piece_dims[i], gls.piece_mults[i]});
               for (const auto& b : orc.blocks) oracle.insert(b);
               need(formula == oracle, e.name + ": block structure disagrees with the oracle");
               ++checked;
             }
             need(checked >= 10, "catalog must carry at least ten backed parameters");
           });

  gate.run(3, "SL-side component groups have order g*|X| and their irreducibles fill |S|", 10000,
           [&] {
             int checked = 0;
             for (const Entry& e : cat.entries) {
               if (e.kind != "parameter" || !e.body.value("sl_side", false)) continue;
               catalog::BuiltParameter bp = catalog::build_parameter(e);
               SlSGroup rep = s_group_sl(bp.phi, bp.ell);
               i64 s = rep.ext.S.order();
               need(s == i64(rep.ext.g) * rep.twists.X.order(), e.name + ": |S| != g * |X|");
               CentralCharacterClasses C = irr_with_central_character(rep.ext);
               i64 sum = 0;
               for (int j = 0; j < C.g; ++j)
                 for (int row : C.irreps_by_char[size_t(j)]) {
                   i64 d = C.table.dims[size_t(row)];
                   sum += d * d;
                 }
               need(sum == s, e.name + ": squared dimensions over all central characters miss |S|");
               ++checked;
             }
             need(checked >= 8, "catalog must carry at least eight SL-side parameters");
           });

  gate.run(4, "twisted-algebra spectra match the character table and torsors count the bijections",
           0, [&] {
             for (const Entry& e : cat.entries) {
               if (e.kind != "parameter") continue;
               catalog::BuiltParameter bp = catalog::build_parameter(e);
               CentralExtension E;
               if (bp.phi.sl_side) {
                 E = s_group_sl(bp.phi, bp.ell).ext;
               } else {
                 E = to_extension(s_group_gl(bp.phi));
               }
               CentralCharacterClasses C = irr_with_central_character(E);
               for (int j = 0; j < E.g; ++j) {
                 TwistedIrrSummary alg = twisted_algebra_irr(E, j);
                 std::vector<i64> table_dims;
                 for (int row : C.irreps_by_char[size_t(j)])
                   table_dims.push_back(C.table.dims[size_t(row)]);
                 std::sort(table_dims.begin(), table_dims.end());
                 std::vector<i64> alg_dims(size_t(alg.count), i64(alg.dim));
                 need(table_dims == alg_dims, e.name + ": dimension multisets disagree at central character " + std::to_string(j));
               }
               need(torsor_count(E) == packet_cardinality(C, 0),
                    e.name + ": admissible bijections must match the trivial-character count");
             }
           });

  gate.run(5, "bundled dihedral packets keep the pinned cardinalities and fill the twist algebra",
           0, [&] {
             for (const std::string name : {"gl2-dihedral-sl", "gl2-odd-dihedral-sl"}) {
               const Entry& e = cat.at(name);
               catalog::BuiltParameter bp = catalog::build_parameter(e);
               SlSGroup rep = s_group_sl(bp.phi, bp.ell);
               CentralCharacterClasses C = irr_with_central_character(rep.ext);
               i64 x = rep.twists.X.order();
               json packets = json::array();
               for (const auto& L : packet_table(bp.phi.n, rep.ext, C)) {
                 size_t card = L.multiplicities.size();
                 need(card == 1 || card == 2 || card == 4,
                      name + ": packet cardinality escapes {1,2,4}");
                 i64 sq = 0;
                 for (i64 m : L.multiplicities) sq += m * m;
                 need(sq == x, name + ": member multiplicities fail the count sum m^2 = |X|");
                 packets.push_back(L.multiplicities);
               }
               need(packets == e.body.at("expect").at("packets"),
                    name + ": packet table drifted from the pinned regression data");
             }
           });

  gate.run(6, "archimedean groups: trivial over C, order 2 iff all pieces are 2-dim over R, two-to-one quaternion fibers",
           0, [&] {
             int arch_entries = 0;
             for (const Entry& e : cat.entries) {
               if (e.kind != "archimedean") continue;
               ++arch_entries;
               ArchimedeanParameter phi = catalog::arch_from_json(e.body);
               bool sl = e.body.value("sl_side", false);
               ArchSGroupReport rep = archimedean_s_group(phi, sl);
               if (phi.complex_base) {
                 need(rep.ext.S.order() == 1, e.name + ": complex-base parameters must have trivial S");
                 continue;
               }
               if (!sl) {
                 bool all_two = std::all_of(phi.pieces.begin(), phi.pieces.end(),
                                            [](const ArchPiece& p) { return p.dim == 2; });
                 need((rep.ext.S.order() == 2) == all_two,
                      e.name + ": |S| = 2 must hold exactly for all-2-dim real parameters");
               }
               if (rep.quaternion_relevant && sl) {
                 need(rep.irr_quaternion == 2 * rep.packet_quaternion,
                      e.name + ": the quaternion fiber must be two-to-one");
                 need(int(rep.collapse_fibers.size()) == rep.packet_quaternion,
                      e.name + ": collapsed pairs must count the quaternion packet");
               } else if (rep.quaternion_relevant) {
                 need(rep.irr_quaternion == rep.packet_quaternion && rep.collapse_fibers.empty(),
                      e.name + ": without the sign twist the quaternion fiber is one-to-one");
               }
             }
             need(arch_entries >= 4, "catalog must carry at least four archimedean examples");

             // exhaustive sweep over small real GL-side shapes
             std::vector<ArchPiece> shapes(4);
             shapes[0].dim = 2, shapes[0].k = 1;
             shapes[1].dim = 2, shapes[1].k = 2;
             shapes[2].dim = 1, shapes[2].sign = 0;
             shapes[3].dim = 1, shapes[3].sign = 1;
             int combos = 0;
             for (size_t i = 0; i < shapes.size(); ++i)
               for (size_t j = i; j <= shapes.size(); ++j)
                 for (size_t k = j; k <= shapes.size(); ++k) {
                   std::vector<ArchPiece> ps = {shapes[i]};
                   if (j < shapes.size()) ps.push_back(shapes[j]);
                   if (k < shapes.size()) ps.push_back(shapes[k]);
                   ArchimedeanParameter phi = make_archimedean_parameter(ps);
                   ArchSGroupReport rep = archimedean_s_group(phi, false);
                   bool all_two = std::all_of(ps.begin(), ps.end(),
                                              [](const ArchPiece& p) { return p.dim == 2; });
                   need((rep.ext.S.order() == 2) == all_two,
                        "real sweep: |S| = 2 must hold exactly for all-2-dim parameters");
                   need((rep.ext.S.order() == 1) == !all_two, "real sweep: S must otherwise be trivial");
                   ++combos;
                 }
             for (int kk : {-2, 0, 3}) {
               ArchPiece c;
               c.dim = 1;
               c.k = kk;
               for (int mult = 1; mult <= 3; ++mult) {
                 std::vector<ArchPiece> ps(size_t(mult), c);
                 ArchimedeanParameter phi = make_archimedean_parameter(ps, true);
                 for (bool sl : {false, true})
                   need(archimedean_s_group(phi, sl).ext.S.order() == 1,
                        "complex sweep: S must always be trivial");
                 ++combos;
               }
             }
             need(combos > 12, "the sweep must cover more than a dozen shapes");
           });

  gate.run(7, "filtration conductors equal dim*(break+1) and the transition functions invert", 5000,
           [&] {
             struct Model {
               std::string name;
               FiniteGroup W;
               std::vector<int> inertia;
               int frob;
               std::vector<std::vector<int>> filt;
             };
             std::vector<Model> models;
             FiniteGroup Q8 = quaternion_group(2);
             models.push_back({"quaternion wild", Q8, whole_group(Q8), 0,
                               {whole_group(Q8), Q8.center()}});
             FiniteGroup D4 = dihedral_group(4);
             models.push_back({"dihedral chain", D4, whole_group(D4), 0,
                               {whole_group(D4), {0, 2, 4, 6}, D4.center()}});
             FiniteGroup C4 = cyclic_group(4);
             models.push_back({"cyclic tame", C4, {0, 2}, 1, {{0, 2}}});
             models.push_back({"cyclic wild", C4, whole_group(C4), 0, {whole_group(C4), {0, 2}}});
             FiniteGroup H27 = heisenberg_group(3);
             models.push_back({"heisenberg wild", H27, whole_group(H27), 0,
                               {whole_group(H27), H27.center()}});
             std::mt19937_64 rng(99);
             for (const Model& md : models) {
               WeilModel M(md.W, md.inertia, md.frob, md.filt);
               i64 ell = next_split_prime(md.W.exponent(), md.W.order());
               CharTable T = character_table(md.W, ell);
               for (size_t r = 0; r < T.dims.size(); ++r) {
                 const auto& chi = T.chi[r];
                 i64 dim = T.dims[r];
                 Rat fixed_space_route = M.artin(T, chi, dim);
                 auto b = M.break_of(T, int(r));
                 if (b.unramified) {
                   need(fixed_space_route == Rat(0),
                        md.name + ": unramified pieces must have conductor zero");
                   continue;
                 }
                 need(M.dim_fixed(T, chi, M.filtration_step(0)) == 0,
                      md.name + ": ramified irreducibles here fix nothing under inertia");
                 need(fixed_space_route == Rat(dim) * (b.depth + Rat(1)),
                      md.name + ": conductor != dim * (break + 1)");
                 RamificationProfile prof = profile_of_irreducible(M, T, int(r));
                 need(artin_conductor(prof) == fixed_space_route,
                      md.name + ": the profile route disagrees with the fixed-space sum");
               }
               for (int t = 0; t < 100; ++t) {
                 Rat u(i64(rng() % 400), i64(1 + rng() % 20));
                 need(M.psi(M.phi(u)) == u, md.name + ": psi(phi(u)) != u");
                 need(M.phi(M.psi(u)) == u, md.name + ": phi(psi(v)) != v");
               }
             }
           });

  gate.run(8, "level bookkeeping: minimal levels, level membership, and the precision bound", 0,
           [&] {
             const std::vector<Rat> depths = {Rat(0),    Rat(1, 2), Rat(1), Rat(3, 2), Rat(5, 3),
                                              Rat(2),    Rat(7, 3), Rat(9, 4), Rat(4)};
             for (const Rat& d : depths) {
               need(min_level(d) == int(rat_floor(d)) + 1, "min_level must be floor(depth) + 1");
               for (int l = 1; l <= 5; ++l)
                 need(factors_through_level(d, l) == (Rat(l) > d),
                      "level membership must be exactly l > depth");
             }
             for (const Entry& e : cat.entries) {
               if (!e.body.contains("profile")) continue;
               RamificationProfile p = catalog::profile_from_json(e.body["profile"]);
               Rat d = p.max_break();
               need(min_level(d) == int(rat_floor(d)) + 1, e.name + ": min_level must be floor(depth) + 1");
               for (int l = 1; l <= 4; ++l)
                 need(factors_through_level(d, l) == (Rat(l) > d),
                      e.name + ": level membership must be exactly l > depth");
             }
             need(close_field_level_bound(3, 2) == 9, "degree-3 level-2 transfer must need precision 9");
             need(close_field_level_bound(1, 7) == 8 && close_field_level_bound(4, 1) == 9,
                  "the precision bound must be 2^(n-1) r + 1");
             need(close_field_bound_is_constructive(1), "the split case carries a constructive witness");
             need(!close_field_bound_is_constructive(2) && !close_field_bound_is_constructive(3),
                  "division-algebra cases are compatibility statements without a witness");
           });

  gate.run(9, "closeness witnesses succeed/fail as promised and label transport round-trips", 60000,
           [&] {
             LocalFieldSpec A = eq_spec(2, 1), B = unram_spec(2, 1);
             CloseCheck c1 = closeness_witness(make_ring(A, 1), make_ring(B, 1));
             need(c1.close && c1.witness.has_value(), "the two residue-2 fields must be 1-close");
             CloseCheck c2 = closeness_witness(make_ring(A, 2), make_ring(B, 2));
             need(!c2.close, "the two residue-2 fields must not be 2-close");
             need(c2.certificate == "additive exponent 2 != 4",
                  "the level-2 refusal must carry the characteristic certificate");
             CloseCheck c3 = closeness_witness(make_ring(eq_spec(3, 1), 2), make_ring(ram_spec(3, 2), 2));
             need(c3.close, "the residue-3 pair with a ramified partner must be 2-close");

             ZetaWitness zw = zeta_witness(make_ring(A, 1), make_ring(B, 1));
             need(zw.adapted, "the level-1 witness must carry the uniformizer to the uniformizer");
             RingHom back = inverse_hom(zw.hom);
             RingPtr R1 = make_ring(A, 1);
             std::mt19937_64 rng(20260817);
             for (int t = 0; t < 1000; ++t) {
               std::vector<int> a = {int(rng() % 3) - 1, int(rng() % 3) - 1};
               std::sort(a.begin(), a.end());
               DoubleCosetLabel L = canonical_pair(A, a, random_gl(R1, 2, rng), random_gl(R1, 2, rng));
               DoubleCosetLabel Lb = zeta_r(L, zw.hom, B);
               DoubleCosetLabel La = zeta_r(Lb, back, A);
               need(La == L, "a transported label failed to round-trip");
             }
           });

  gate.run(10, "Hecke structure constants over the two 1-close fields agree under label transport",
           600000, [&] {
             LocalFieldSpec A = eq_spec(2, 1), B = unram_spec(2, 1);
             ZetaWitness zw = zeta_witness(make_ring(A, 1), make_ring(B, 1));
             need(zw.adapted, "transport needs a uniformizer-adapted witness");
             RingPtr R1 = make_ring(A, 1);
             std::vector<RElem> elems = RElem::enumerate(R1);
             std::vector<RMat> units;
             for (const auto& a : elems)
               for (const auto& b : elems)
                 for (const auto& c : elems)
                   for (const auto& d : elems) {
                     RMat u = {{a, b}, {c, d}};
                     if (ring_det(u, R1).is_unit()) units.push_back(u);
                   }
             need(units.size() == 6, "the level-1 unit group must have six coordinate classes");
             const std::vector<std::vector<int>> shapes = {{-1, -1}, {-1, 0}, {-1, 1},
                                                           {0, 0},   {0, 1},  {1, 1}};
             std::vector<DoubleCosetLabel> basis;
             std::set<std::string> seen;
             for (const auto& a : shapes)
               for (const auto& U : units)
                 for (const auto& V : units) {
                   DoubleCosetLabel L = canonical_pair(A, a, U, V);
                   if (seen.insert(L.key()).second) basis.push_back(L);
                 }
             std::map<std::string, DoubleCosetLabel> cache;
             auto move_label = [&](const DoubleCosetLabel& L) {
               auto it = cache.find(L.key());
               if (it != cache.end()) return it->second;
               DoubleCosetLabel Lb = zeta_r(L, zw.hom, B, 1000000);
               cache.emplace(L.key(), Lb);
               return Lb;
             };
             auto move_elem = [&](const HeckeElement& f) {
               HeckeElement out;
               out.m = f.m;
               out.level = f.level;
               for (const auto& [key, term] : f.terms) out.add(move_label(term.first), term.second);
               return out;
             };
             std::vector<HeckeElement> fa, fb;
             for (const auto& L : basis) {
               fa.push_back(hecke_indicator(L));
               fb.push_back(move_elem(fa.back()));
             }
             size_t pairs = 0;
             for (size_t i = 0; i < basis.size(); ++i)
               for (size_t j = 0; j < basis.size(); ++j) {
                 HeckeElement lhs = move_elem(hecke_convolve(fa[i], fa[j], A, 1000000));
                 HeckeElement rhs = hecke_convolve(fb[i], fb[j], B, 1000000);
                 need(lhs == rhs, "structure constants disagree at basis pair (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
                 ++pairs;
               }
             need(pairs == basis.size() * basis.size(), "every ordered pair must be checked");
           });

  gate.run(11, "transfer preserves depth, Levi data, component orders, and packet shapes", 0, [&] {
    int transfers = 0, refusals = 0;
    for (const Entry& e : cat.entries) {
      if (e.kind != "parameter" || !e.body.contains("profile")) continue;
      catalog::BuiltParameter bp = catalog::build_parameter(e);
      RamificationProfile prof = catalog::profile_from_json(e.body["profile"]);
      FieldTaggedParameter P{"F", bp.phi, prof};
      Rat d = depth_of_parameter(P);
      const json& expect = e.body.at("expect");
      for (int l = 1; l <= min_level(d) + 1; ++l) {
        if (!factors_through_level(d, l)) {
          bool refused = false;
          try {
            transfer_parameter(P, l, "E");
          } catch (const domain_error&) {
            refused = true;
          }
          need(refused, e.name + ": transfer below the minimal level must be refused");
          ++refusals;
          continue;
        }
        FieldTaggedParameter Q = transfer_parameter(P, l, "E");
        need(Q.field == "E", e.name + ": transfer must re-tag the field");
        need(depth_of_parameter(Q) == d, e.name + ": transfer must preserve depth");
        need(levi_support(Q.phi) == levi_support(bp.phi),
             e.name + ": transfer must preserve the Levi support");
        LanglandsParameter gl = Q.phi;
        gl.sl_side = false;
        GlSGroup gls = s_group_gl(gl);
        need(gls.g == expect.at("g").get<int>(), e.name + ": transfer must preserve g");
        CentralExtension E;
        i64 x_order = 1;
        if (Q.phi.sl_side) {
          SlSGroup rep = s_group_sl(Q.phi, bp.ell);
          E = rep.ext;
          x_order = rep.twists.X.order();
        } else {
          E = to_extension(gls);
        }
        if (expect.contains("x_order"))
          need(x_order == expect["x_order"].get<i64>(), e.name + ": transfer must preserve |X|");
        if (expect.contains("s_order"))
          need(i64(E.S.order()) == expect["s_order"].get<i64>(),
               e.name + ": transfer must preserve |S|");
        CentralCharacterClasses C = irr_with_central_character(E);
        json forms = json::array(), packets = json::array();
        for (const auto& L : packet_table(Q.phi.n, E, C)) {
          forms.push_back(json::array({L.form.n, L.form.d, L.form.h}));
          packets.push_back(L.multiplicities);
          need(kottwitz_label(L.form).k == int((i64(L.central_char) * (Q.phi.n / E.g)) % Q.phi.n),
               e.name + ": the Kottwitz class must match the central character");
        }
        if (expect.contains("forms"))
          need(forms == expect["forms"], e.name + ": transfer must preserve the form list");
        if (expect.contains("packets"))
          need(packets == expect["packets"],
               e.name + ": transfer must preserve all packet cardinalities");
        ++transfers;
      }
    }
    need(transfers >= 8 && refusals >= 3,
         "the catalog must exercise both the transfer and the refusal branches");
  });

  if (gate.failures > 0) {
    std::printf("%d criteria failed\n", gate.failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
