#pragma once

// Worked-example catalog: JSON schema, integrity-checked loading, and
// evaluation of every entry's computed invariants against its frozen
// expectations.  Shared by the command-line tool and the acceptance suite.
//
// Layout on disk: <dir>/manifest.json maps entry file names to FNV-1a
// content hashes; each entry file holds one worked example of kind
// "parameter" (a finite-group-backed parameter, optionally with a
// ramification profile), "archimedean", or "profile" (break data only).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "llpack/char_table.hpp"
#include "llpack/common.hpp"
#include "llpack/finite_group.hpp"
#include "llpack/inner_forms.hpp"
#include "llpack/parameters.hpp"
#include "llpack/sgroups.hpp"
#include "llpack/weil_model.hpp"

namespace llpack::catalog {

using nlohmann::json;

// ---- small codecs ----

inline json rat_json(const Rat& r) { return json::array({r.numerator(), r.denominator()}); }

inline Rat rat_of(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<i64>());
  if (!j.is_array() || j.size() != 2) throw domain_error("catalog: rational must be [num, den]");
  return Rat(j[0].get<i64>(), j[1].get<i64>());
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("catalog: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---- entries and integrity-checked loading ----

struct Entry {
  std::string name;
  std::string kind;  // "parameter" | "archimedean" | "profile"
  std::string file;
  json body;
};

struct Catalog {
  std::string dir;
  std::vector<Entry> entries;

  const Entry& at(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw domain_error("catalog: no entry named " + name);
  }
};

/** Backing groups by family name. */
inline FiniteGroup group_from_json(const json& g) {
  std::string fam = g.at("family").get<std::string>();
  if (fam == "cyclic") return cyclic_group(g.at("n").get<int>());
  if (fam == "dihedral") return dihedral_group(g.at("m").get<int>());
  if (fam == "quaternion") return quaternion_group(g.value("m", 2));
  if (fam == "heisenberg") return heisenberg_group(g.at("p").get<int>());
  throw domain_error("catalog: unknown group family " + fam);
}

inline RamificationProfile profile_from_json(const json& p) {
  std::vector<std::pair<Rat, i64>> jumps;
  for (const auto& j : p.at("jumps")) {
    if (!j.is_array() || j.size() != 3)
      throw domain_error("catalog: each jump must be [num, den, dim]");
    jumps.emplace_back(Rat(j[0].get<i64>(), j[1].get<i64>()), j[2].get<i64>());
  }
  return RamificationProfile(std::move(jumps), p.value("fixed_dim", i64(0)),
                             p.at("total_dim").get<i64>());
}

inline ArchimedeanParameter arch_from_json(const json& b) {
  std::vector<ArchPiece> pieces;
  for (const auto& pj : b.at("pieces")) {
    ArchPiece pc;
    pc.dim = pj.at("dim").get<int>();
    pc.sign = pj.value("sign", 0);
    pc.k = pj.value("k", 0);
    pc.shift = pj.value("shift", std::string());
    for (int c = 0; c < pj.value("mult", 1); ++c) pieces.push_back(pc);
  }
  return make_archimedean_parameter(std::move(pieces), b.value("complex_base", false));
}

inline Catalog load_catalog(const std::string& dir) {
  namespace fs = std::filesystem;
  Catalog cat;
  cat.dir = dir;
  json manifest = json::parse(read_file(dir + "/manifest.json"));
  if (!manifest.contains("entries") || !manifest["entries"].is_object())
    throw domain_error("catalog: manifest has no entry map");
  std::set<std::string> listed, names;
  for (auto it = manifest["entries"].begin(); it != manifest["entries"].end(); ++it) {
    const std::string& file = it.key();
    listed.insert(file);
    std::string content = read_file(dir + "/" + file);
    if (fnv1a_hex(content) != it.value().get<std::string>())
      throw domain_error("catalog: content hash mismatch for " + file);
    Entry e;
    e.file = file;
    e.body = json::parse(content);
    e.name = e.body.at("name").get<std::string>();
    e.kind = e.body.at("kind").get<std::string>();
    if (e.kind != "parameter" && e.kind != "archimedean" && e.kind != "profile")
      throw domain_error("catalog: unknown kind in " + file);
    if (!names.insert(e.name).second) throw domain_error("catalog: duplicate name " + e.name);
    cat.entries.push_back(std::move(e));
  }
  for (const auto& de : fs::directory_iterator(dir)) {
    std::string base = de.path().filename().string();
    if (base == "manifest.json" || de.path().extension() != ".json") continue;
    if (!listed.count(base)) throw domain_error("catalog: unlisted file " + base);
  }
  // every referenced label must resolve
  for (const auto& e : cat.entries) {
    if (e.body.contains("group")) group_from_json(e.body["group"]);
    if (e.body.contains("profile")) profile_from_json(e.body["profile"]);
    if (e.body.contains("expect") && e.body["expect"].contains("forms"))
      for (const auto& f : e.body["expect"]["forms"])
        make_inner_form(f[0].get<int>(), f[1].get<int>(), f[2].get<int>());
  }
  std::sort(cat.entries.begin(), cat.entries.end(),
            [](const Entry& a, const Entry& b) { return a.name < b.name; });
  return cat;
}

// ---- building parameters from entries ----

/** Deterministic irreducible selection: rows of the table filtered by
 *  dimension, optionally to the all-ones row ("trivial") or by the
 *  multiplicative order of the value at one element, then indexed by "nth". */
inline int resolve_irrep(const CharTable& T, const json& sel) {
  int dim = sel.at("dim").get<int>();
  int nth = sel.value("nth", 0);
  int vo = sel.value("value_order", 0);
  int elem = sel.value("element", 1);
  bool triv = sel.value("trivial", false);
  std::vector<int> hits;
  for (int r = 0; r < int(T.dims.size()); ++r) {
    if (T.dims[size_t(r)] != dim) continue;
    if (triv && !std::all_of(T.chi[size_t(r)].begin(), T.chi[size_t(r)].end(),
                             [](i64 v) { return v == 1; }))
      continue;
    if (vo > 0) {
      i64 v = T.value(r, elem);
      int o = 1;
      for (i64 t = v; t != 1; t = mulmod(t, v, T.ell))
        if (++o > int(T.ell)) throw domain_error("catalog: irrep value is not a unit");
      if (o != vo) continue;
    }
    hits.push_back(r);
  }
  if (nth < 0 || nth >= int(hits.size()))
    throw domain_error("catalog: irrep selector matches too few rows");
  return hits[size_t(nth)];
}

struct BuiltParameter {
  LanglandsParameter phi;
  i64 ell = 0;
  FiniteGroup W = trivial_group();
  CharTable table;
};

/** Build the backed parameter of a "parameter" entry.  The realization prime
 *  depends only on the backing and the total size, so it is fixed first and
 *  the irreducible selectors are then resolved against the character table at
 *  that prime; piece labels are derived from the resolved rows. */
inline BuiltParameter build_parameter(const Entry& e) {
  const json& b = e.body;
  BuiltParameter out;
  out.W = group_from_json(b.at("group"));
  i64 n = 0;
  for (const auto& pj : b.at("pieces"))
    n += pj.at("irrep").at("dim").get<i64>() * pj.value("sl2", 1) * pj.value("mult", 1);
  if (n < 1) throw domain_error("catalog: parameter entry has no size");
  out.ell = next_split_prime(std::lcm(out.W.exponent(), 2 * n),
                             std::max<i64>(out.W.order(), 2 * n));
  out.table = character_table(out.W, out.ell);
  std::vector<std::pair<EllipticPiece, int>> pieces;
  for (const auto& pj : b.at("pieces")) {
    int row = resolve_irrep(out.table, pj.at("irrep"));
    EllipticPiece pc;
    pc.weil_id = "r" + std::to_string(row);
    pc.weil_dim = int(out.table.dims[size_t(row)]);
    pc.sl2_size = pj.value("sl2", 1);
    pc.backing_irrep = row;
    if (pj.contains("twist")) {
      pc.twist.val_shift = pj["twist"].value("val_shift", i64(0));
      pc.twist.unit_label = pj["twist"].value("unit_label", std::string());
    }
    pieces.emplace_back(pc, pj.value("mult", 1));
  }
  out.phi = make_parameter(std::move(pieces), b.value("sl_side", false), out.W);
  if (realization_prime(out.phi) != out.ell)
    throw std::logic_error("catalog: realization prime drifted");
  return out;
}

// ---- evaluation: recompute everything an entry freezes ----

inline json profile_facts(const RamificationProfile& prof) {
  json out;
  out["unramified"] = prof.unramified();
  out["max_break"] = rat_json(prof.max_break());
  out["swan"] = rat_json(swan_conductor(prof));
  out["artin"] = rat_json(artin_conductor(prof));
  out["depth"] = rat_json(depth_of_parameter(prof));
  out["min_level"] = min_level(prof.max_break());
  return out;
}

inline json oracle_facts(const CentralizerReport& orc) {
  json out;
  out["oracle_dim"] = orc.dim;
  out["oracle_g"] = orc.g;
  json blocks = json::array();
  for (const auto& [d, m] : orc.blocks) blocks.push_back(json::array({d, m}));
  out["oracle_blocks"] = blocks;
  out["oracle_certified"] = orc.certified;
  return out;
}

inline json evaluate_parameter(const Entry& e) {
  BuiltParameter bp = build_parameter(e);
  const LanglandsParameter& phi = bp.phi;
  json out;
  out["n"] = phi.n;
  out["ell"] = bp.ell;
  out["sl_side"] = phi.sl_side;
  std::vector<i64> levi = levi_support(phi);
  out["levi"] = levi;

  LanglandsParameter gl = phi;
  gl.sl_side = false;
  GlSGroup gls = s_group_gl(gl);
  out["g"] = gls.g;
  out["piece_dims"] = gls.piece_dims;
  out["piece_mults"] = gls.piece_mults;

  CentralExtension E;
  if (phi.sl_side) {
    SlSGroup rep = s_group_sl(phi, bp.ell);
    E = rep.ext;
    out["x_order"] = rep.twists.X.order();
    out.update(oracle_facts(rep.oracle));
  } else {
    E = to_extension(gls);
    out["x_order"] = 1;
    out.update(oracle_facts(brute_force_centralizer_oracle(matrix_realization(phi, bp.ell))));
  }
  out["s_order"] = E.S.order();
  out["s_abelian"] = E.S.is_abelian();

  CentralCharacterClasses C = irr_with_central_character(E);
  PacketTheoremReport pt = check_packet_theorem(E, C);
  out["torsors"] = pt.torsors;
  out["packet_ok"] = pt.ok;
  json forms = json::array(), packets = json::array();
  bool relevant = true;
  for (const auto& L : packet_table(phi.n, E, C)) {
    forms.push_back(json::array({L.form.n, L.form.d, L.form.h}));
    packets.push_back(L.multiplicities);
    if (!is_relevant(levi, L.form)) relevant = false;
  }
  out["forms"] = forms;
  out["packets"] = packets;
  out["forms_relevant"] = relevant;

  if (e.body.contains("profile")) out.update(profile_facts(profile_from_json(e.body["profile"])));
  return out;
}

inline json evaluate_archimedean(const Entry& e) {
  ArchimedeanParameter phi = arch_from_json(e.body);
  ArchSGroupReport rep = archimedean_s_group(phi, e.body.value("sl_side", false));
  json out;
  out["n"] = phi.n;
  out["g"] = rep.g;
  out["x_order"] = rep.x_order;
  out["s_factors"] = rep.s_factors;
  out["s_order"] = rep.ext.S.order();
  out["quaternion_relevant"] = rep.quaternion_relevant;
  out["packet_split"] = rep.packet_split;
  out["packet_quaternion"] = rep.packet_quaternion;
  out["irr_quaternion"] = rep.irr_quaternion;
  out["collapse_fibers"] = int(rep.collapse_fibers.size());
  return out;
}

inline json evaluate_profile(const Entry& e) {
  RamificationProfile prof = profile_from_json(e.body.at("profile"));
  json out = profile_facts(prof);
  out["total_dim"] = prof.total_dim;
  if (e.body.contains("n")) {
    int n = e.body["n"].get<int>();
    Rat a = artin_conductor(prof);
    if (a.denominator() == 1 && (a.numerator() >= n || (n == 1 && a.numerator() == 0))) {
      out["supercuspidal_depth"] = rat_json(depth_of_supercuspidal(n, a.numerator()));
      out["hereditary_period"] = hereditary_period(n, a.numerator());
    }
  }
  return out;
}

inline json evaluate_entry(const Entry& e) {
  if (e.kind == "parameter") return evaluate_parameter(e);
  if (e.kind == "archimedean") return evaluate_archimedean(e);
  return evaluate_profile(e);
}

/** Differences between an entry's frozen expectations and the computed
 *  facts; empty means the entry checks out. */
inline std::vector<std::string> check_entry(const Entry& e, const json& computed) {
  std::vector<std::string> bad;
  if (!e.body.contains("expect")) {
    bad.push_back("entry has no expect block");
    return bad;
  }
  for (auto it = e.body["expect"].begin(); it != e.body["expect"].end(); ++it) {
    if (!computed.contains(it.key())) {
      bad.push_back(it.key() + ": not computed");
      continue;
    }
    if (computed[it.key()] != it.value())
      bad.push_back(it.key() + ": computed " + computed[it.key()].dump() + ", frozen " +
                    it.value().dump());
  }
  return bad;
}

}  // namespace llpack::catalog
