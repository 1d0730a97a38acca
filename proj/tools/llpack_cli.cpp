// Command-line front end: inner-form tables, component-group and packet
// reports from the bundled catalog, depth/conductor bookkeeping, exact
// Cartan/Iwasawa decompositions over truncated local rings, closeness
// checks with transport verification, and a catalog self-test.
//
// Exit codes: 0 success, 1 domain/input error, 2 enumeration budget
// exhausted.

#include <atomic>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "catalog_io.hpp"
#include "llpack/close_fields.hpp"
#include "llpack/ring_iso.hpp"
#include "llpack/truncated_ring.hpp"

using nlohmann::json;
using namespace llpack;

namespace {

struct Output {
  bool as_json = false;
  json j;
  std::ostringstream text;

  void emit() {
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text.str();
  }
};

std::string rat_str(const Rat& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

// ---- field-spec and matrix input ----

LocalFieldSpec spec_from_json(const json& j) {
  LocalFieldSpec s;
  s.p = j.at("p").get<i64>();
  s.f = j.value("f", 1);
  std::string ch = j.value("characteristic", std::string("equal"));
  if (ch == "equal")
    s.characteristic = FieldChar::Equal;
  else if (ch == "mixed")
    s.characteristic = FieldChar::Mixed;
  else
    throw domain_error("field spec: characteristic must be \"equal\" or \"mixed\"");
  s.e = j.value("e", 1);
  if (j.contains("eisenstein"))
    for (const auto& row : j["eisenstein"]) s.eisenstein.push_back(row.get<std::vector<i64>>());
  s.uniformizer = j.value("uniformizer", std::string(ch == "equal" ? "t" : "p"));
  s.name = j.value("name", std::string());
  return s;
}

LocalFieldSpec spec_from_file(const std::string& path) {
  return spec_from_json(json::parse(catalog::read_file(path)));
}

RElem elem_from_json(const RingPtr& R, const json& v) {
  if (v.is_number_integer()) return RElem::from_integer(R, v.get<i64>());
  if (v.is_array()) {
    std::vector<int> ds;
    for (const auto& d : v) ds.push_back(d.get<int>());
    return RElem::from_digits(R, ds);
  }
  throw domain_error("matrix entry must be an integer or a digit vector");
}

struct MatrixInput {
  FMatrix g;
  int width = 1;
};

MatrixInput matrix_from_file(const LocalFieldSpec& spec, const std::string& path) {
  json j = json::parse(catalog::read_file(path));
  int width = j.at("width").get<int>();
  int vmin = j.value("vmin", 0);
  RingPtr R = make_ring(spec, width);
  RMat m;
  for (const auto& row : j.at("entries")) {
    std::vector<RElem> r;
    for (const auto& v : row) r.push_back(elem_from_json(R, v));
    m.push_back(std::move(r));
  }
  return MatrixInput{fmatrix(R, vmin, std::move(m)), width};
}

json rmat_json(const RMat& M) {
  json rows = json::array();
  for (const auto& row : M) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.digits());
    rows.push_back(r);
  }
  return rows;
}

std::string rmat_str(const RMat& M) {
  std::ostringstream os;
  for (const auto& row : M) {
    os << "    [";
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) os << "  ";
      const auto ds = row[c].digits();
      os << "(";
      for (size_t k = 0; k < ds.size(); ++k) os << (k ? "," : "") << ds[k];
      os << ")";
    }
    os << "]\n";
  }
  return os.str();
}

json label_json(const DoubleCosetLabel& L) {
  json out;
  out["a"] = L.a;
  out["left_unit"] = rmat_json(L.left_unit);
  out["right_unit"] = rmat_json(L.right_unit);
  out["level"] = L.level;
  return out;
}

json hecke_json(const HeckeElement& f) {
  json terms = json::array();
  for (const auto& [k, v] : f.terms) {
    json t;
    t["label"] = label_json(v.first);
    t["coefficient"] = catalog::rat_json(v.second);
    terms.push_back(t);
  }
  return terms;
}

std::string diag_str(const std::string& unif, const std::vector<int>& a) {
  std::ostringstream os;
  os << "diag(";
  for (size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << unif << "^" << a[i];
  os << ")";
  return os.str();
}

// ---- subcommands ----

void cmd_forms(Output& out, int n) {
  auto forms = standard_inner_forms(n);
  out.text << "inner forms of GL_" << n << ": " << forms.size() << "\n";
  json rows = json::array();
  for (const auto& f : forms) {
    int k = kottwitz_label(f).k;
    out.text << "  [" << f.n << "," << f.d << "," << f.h << "]  " << f.describe()
             << "  kottwitz k=" << k << "\n";
    json r;
    r["label"] = json::array({f.n, f.d, f.h});
    r["group"] = f.describe();
    r["kottwitz"] = k;
    rows.push_back(r);
  }
  out.j["n"] = n;
  out.j["forms"] = rows;
}

void cmd_sgroup(Output& out, const catalog::Catalog& cat, const std::string& name) {
  const catalog::Entry& e = cat.at(name);
  if (e.kind == "profile")
    throw domain_error("sgroup: entry " + name + " carries break data only");
  json c = catalog::evaluate_entry(e);
  out.j = c;
  out.j["entry"] = name;
  if (e.kind == "parameter") {
    out.text << "entry " << name << " (" << (c["sl_side"].get<bool>() ? "SL" : "GL")
             << " side, n=" << c["n"] << ", modulus " << c["ell"] << ")\n";
    out.text << "  determinant defect g = " << c["g"] << "\n";
    out.text << "  twist group order |X| = " << c["x_order"] << "\n";
    out.text << "  component group order |S| = " << c["s_order"] << " ("
             << (c["s_abelian"].get<bool>() ? "abelian" : "nonabelian") << ")\n";
    out.text << "  character torsors = " << c["torsors"] << "\n";
    out.text << "  centralizer oracle: commutant dim " << c["oracle_dim"] << ", blocks "
             << c["oracle_blocks"].dump()
             << (c["oracle_certified"].get<bool>() ? " (certified)" : "") << "\n";
  } else {
    out.text << "entry " << name << " (archimedean, n=" << c["n"] << ")\n";
    out.text << "  determinant defect g = " << c["g"] << "\n";
    out.text << "  twist group order |X| = " << c["x_order"] << "\n";
    out.text << "  component group order |S| = " << c["s_order"] << ", cyclic factors "
             << c["s_factors"].dump() << "\n";
    out.text << "  quaternion form relevant: "
             << (c["quaternion_relevant"].get<bool>() ? "yes" : "no") << "\n";
  }
}

void cmd_packet(Output& out, const catalog::Catalog& cat, const std::string& name,
                const std::string& form_arg) {
  const catalog::Entry& e = cat.at(name);
  json c = catalog::evaluate_entry(e);
  out.j["entry"] = name;
  if (e.kind == "archimedean") {
    out.j["packet_split"] = c["packet_split"];
    out.j["packet_quaternion"] = c["packet_quaternion"];
    out.text << "entry " << name << ": split packet " << c["packet_split"]
             << ", quaternion packet " << c["packet_quaternion"] << "\n";
    return;
  }
  if (e.kind != "parameter") throw domain_error("packet: entry " + name + " has no packets");
  json table = json::array();
  for (size_t i = 0; i < c["forms"].size(); ++i) {
    json line;
    line["form"] = c["forms"][i];
    line["multiplicities"] = c["packets"][i];
    table.push_back(line);
  }
  if (!form_arg.empty()) {
    int fn, fd, fh;
    char c1, c2;
    std::istringstream is(form_arg);
    if (!(is >> fn >> c1 >> fd >> c2 >> fh) || c1 != ',' || c2 != ',')
      throw domain_error("packet: --form wants N,D,H");
    InnerFormLabel want = make_inner_form(fn, fd, fh);
    json hit;
    for (const auto& line : table)
      if (line["form"] == json::array({want.n, want.d, want.h})) hit = line;
    if (hit.is_null())
      throw domain_error("packet: no member of the packet lives on " + want.describe());
    out.j["line"] = hit;
    out.text << "entry " << name << " on " << want.describe() << ": multiplicities "
             << hit["multiplicities"].dump() << "\n";
    return;
  }
  out.j["table"] = table;
  out.text << "entry " << name << " packet table\n";
  for (const auto& line : table) {
    InnerFormLabel f = make_inner_form(line["form"][0].get<int>(), line["form"][1].get<int>(),
                                       line["form"][2].get<int>());
    out.text << "  " << f.describe() << ": " << line["multiplicities"].dump() << "\n";
  }
}

void cmd_depth(Output& out, const catalog::Catalog& cat, const std::string& name, i64 r) {
  const catalog::Entry& e = cat.at(name);
  if (!e.body.contains("profile"))
    throw domain_error("depth: entry " + name + " has no ramification profile");
  RamificationProfile prof = catalog::profile_from_json(e.body["profile"]);
  int n = 0;
  if (e.body.contains("n"))
    n = e.body["n"].get<int>();
  else
    n = catalog::build_parameter(e).phi.n;
  Rat d = prof.max_break();
  out.j["entry"] = name;
  out.j["n"] = n;
  out.j["unramified"] = prof.unramified();
  out.j["depth"] = catalog::rat_json(depth_of_parameter(prof));
  out.j["max_break"] = catalog::rat_json(d);
  out.j["swan"] = catalog::rat_json(swan_conductor(prof));
  out.j["artin"] = catalog::rat_json(artin_conductor(prof));
  out.j["epsilon_degree"] = catalog::rat_json(epsilon_degree(prof));
  out.j["min_level"] = min_level(d);
  json gate = json::array();
  for (int l = 1; l <= std::max(min_level(d) + 1, 3); ++l)
    gate.push_back(json::array({l, factors_through_level(d, l)}));
  out.j["factors_through"] = gate;
  i64 bound = close_field_level_bound(n, r);
  out.j["transfer_bound"] = {{"r", r},
                             {"level", bound},
                             {"constructive_split", close_field_bound_is_constructive(1)},
                             {"constructive_inner", close_field_bound_is_constructive(2)}};
  out.text << "entry " << name << " (degree " << n << ")\n";
  out.text << "  unramified: " << (prof.unramified() ? "yes" : "no") << "\n";
  out.text << "  depth " << rat_str(depth_of_parameter(prof)) << ", largest break " << rat_str(d)
           << "\n";
  out.text << "  swan " << rat_str(swan_conductor(prof)) << ", artin "
           << rat_str(artin_conductor(prof)) << " (= epsilon-factor degree)\n";
  out.text << "  smallest usable level: " << min_level(d) << "\n";
  out.text << "  transfer bound: degree-" << n << " objects at level r=" << r
           << " move between fields matched to level " << bound << "\n";
  out.text << "    (constructive for the split form; for division-algebra forms the bound is a"
              " compatibility statement without an explicit witness)\n";
}

void cmd_cartan(Output& out, const std::string& spec_file, const std::string& mat_file, int r) {
  LocalFieldSpec spec = spec_from_file(spec_file);
  MatrixInput in = matrix_from_file(spec, mat_file);
  CartanDecomposition c = cartan_decompose(in.g, r);
  const std::string& u = spec.uniformizer;
  out.j["uniformizer"] = u;
  out.j["a"] = c.a;
  out.j["k_left"] = rmat_json(c.k_left);
  out.j["k_right"] = rmat_json(c.k_right);
  auto dv = fm_det_valuation(in.g);
  if (dv) out.j["det_valuation"] = *dv;
  out.text << "cartan: g = k_left * " << diag_str(u, c.a) << " * k_right\n";
  if (dv) out.text << "  det valuation " << *dv << " (= sum of the exponents)\n";
  out.text << "  k_left (digits little-endian in " << u << "):\n" << rmat_str(c.k_left);
  out.text << "  k_right:\n" << rmat_str(c.k_right);
}

void cmd_iwasawa(Output& out, const std::string& spec_file, const std::string& mat_file) {
  LocalFieldSpec spec = spec_from_file(spec_file);
  MatrixInput in = matrix_from_file(spec, mat_file);
  IwasawaDecomposition w = iwasawa_decompose(in.g);
  const std::string& u = spec.uniformizer;
  out.j["uniformizer"] = u;
  out.j["a"] = w.a;
  out.j["u_vmin"] = w.u.vmin;
  out.j["u_mantissa"] = rmat_json(w.u.a);
  out.j["k"] = rmat_json(w.k);
  out.text << "iwasawa: g = u * " << diag_str(u, w.a) << " * k\n";
  out.text << "  u = " << u << "^" << w.u.vmin << " * (mantissa below)\n" << rmat_str(w.u.a);
  out.text << "  k:\n" << rmat_str(w.k);
}

void cmd_close_check(Output& out, const std::string& spec_a, const std::string& spec_b, int level,
                     int r, int m, u64 budget, int pairs) {
  LocalFieldSpec A = spec_from_file(spec_a);
  LocalFieldSpec B = spec_from_file(spec_b);
  RingPtr RA = make_ring(A, level);
  RingPtr RB = make_ring(B, level);
  out.j["level"] = level;
  CloseCheck cc = closeness_witness(RA, RB, budget);
  out.j["close"] = cc.close;
  if (!cc.close) {
    out.j["certificate"] = cc.certificate;
    out.text << "not close at level " << level << ": " << cc.certificate << "\n";
    return;
  }
  ZetaWitness zw = zeta_witness(RA, RB, budget);
  out.j["witness"] = {{"gen_image", zw.hom.gen_img.digits()},
                      {"uniformizer_image", zw.hom.unif_img.digits()},
                      {"adapted", zw.adapted}};
  out.text << "close at level " << level << "\n";
  out.text << "  witness: generator -> digits " << json(zw.hom.gen_img.digits()).dump()
           << ", uniformizer " << A.uniformizer << " -> digits "
           << json(zw.hom.unif_img.digits()).dump() << "\n";
  out.text << "  witness carries the declared uniformizer to the declared uniformizer: "
           << (zw.adapted ? "yes" : "NO (labels transport along the image uniformizer)") << "\n";
  i64 bound = close_field_level_bound(m, r);
  out.j["transfer_bound"] = {{"m", m},
                             {"r", r},
                             {"level", bound},
                             {"constructive_split", close_field_bound_is_constructive(1)},
                             {"constructive_inner", close_field_bound_is_constructive(2)}};
  out.text << "  conservative transfer bound for degree " << m << " at level r=" << r << ": "
           << bound << " (constructive for the split form; heuristic for inner forms)\n";
  if (r > level) {
    out.text << "  coset level r=" << r << " exceeds the matching level; skipping transport\n";
    out.j["transport"] = "skipped: r exceeds level";
    return;
  }
  if (!zw.adapted) {
    out.text << "  witness is not uniformizer-adapted; skipping transport\n";
    out.j["transport"] = "skipped: witness not adapted";
    return;
  }
  // exact transport check on a deterministic sample of level-r elements
  RingPtr Rr = make_ring(A, r);
  std::vector<HeckeElement> basis;
  basis.push_back(hecke_unit(A, m, r));
  {
    std::vector<int> a(size_t(m), 0);
    a.back() = 1;
    basis.push_back(
        hecke_indicator(canonical_pair(A, a, rmat_identity(Rr, m), rmat_identity(Rr, m))));
  }
  if (m >= 2) {
    std::vector<int> a(size_t(m), 0);
    a.front() = -1;
    a.back() = 1;
    basis.push_back(
        hecke_indicator(canonical_pair(A, a, rmat_identity(Rr, m), rmat_identity(Rr, m))));
  }
  std::vector<std::pair<HeckeElement, HeckeElement>> sample;
  for (size_t i = 0; i < basis.size() && int(sample.size()) < pairs; ++i)
    for (size_t j = 0; j < basis.size() && int(sample.size()) < pairs; ++j)
      sample.emplace_back(basis[i], basis[j]);
  RingHom hom = zw.hom;
  if (level > r) hom = reduce_hom(hom, r);
  ZetaHomReport rep = check_zeta_homomorphism(sample, A, B, hom, budget);
  out.j["transport"] = {{"ok", rep.ok},
                        {"pairs_checked", rep.pairs_checked},
                        {"mismatches", rep.mismatches}};
  json moved = json::array();
  for (const auto& f : basis) moved.push_back(hecke_json(zeta_transport(f, hom, B, budget)));
  out.j["transported_basis"] = moved;
  out.text << "  transport respects convolution on " << rep.pairs_checked
           << " sample pairs: " << (rep.ok ? "yes" : "NO") << "\n";
}

int cmd_selftest(Output& out, const catalog::Catalog& cat, int jobs) {
  struct Result {
    std::string name;
    bool ok = false;
    std::vector<std::string> bad;
    std::string error;
  };
  std::vector<Result> results(cat.entries.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cat.entries.size()) return;
      const catalog::Entry& e = cat.entries[i];
      results[i].name = e.name;
      try {
        results[i].bad = catalog::check_entry(e, catalog::evaluate_entry(e));
        results[i].ok = results[i].bad.empty();
      } catch (const std::exception& ex) {
        results[i].ok = false;
        results[i].error = ex.what();
      }
    }
  };
  if (jobs < 1) jobs = 1;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  int failures = 0;
  json rows = json::array();
  for (const auto& res : results) {
    json r;
    r["name"] = res.name;
    r["ok"] = res.ok;
    if (!res.error.empty()) r["error"] = res.error;
    if (!res.bad.empty()) r["mismatches"] = res.bad;
    rows.push_back(r);
    if (res.ok) {
      out.text << "ok   " << res.name << "\n";
    } else {
      ++failures;
      out.text << "FAIL " << res.name << "\n";
      if (!res.error.empty()) out.text << "     " << res.error << "\n";
      for (const auto& b : res.bad) out.text << "     " << b << "\n";
    }
  }
  out.j["entries"] = rows;
  out.j["failures"] = failures;
  out.text << (failures ? "self-test FAILED: " : "self-test passed: ")
           << (cat.entries.size() - size_t(failures)) << "/" << cat.entries.size()
           << " entries\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact packet combinatorics for inner forms of GL(n) and SL(n) over local fields"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string catalog_dir = "catalog";
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_option("--catalog", catalog_dir, "catalog directory")->capture_default_str();

  int forms_n = 2;
  auto* sc_forms = app.add_subcommand("forms", "list the inner forms of GL_n");
  sc_forms->add_option("--n", forms_n, "total size n")->required();

  std::string entry_name, form_arg;
  auto* sc_sgroup = app.add_subcommand("sgroup", "component-group report for a catalog entry");
  sc_sgroup->add_option("--entry", entry_name, "catalog entry name")->required();

  auto* sc_packet = app.add_subcommand("packet", "packet table for a catalog entry");
  sc_packet->add_option("--entry", entry_name, "catalog entry name")->required();
  sc_packet->add_option("--form", form_arg, "restrict to one inner form, as N,D,H");

  i64 depth_r = 1;
  auto* sc_depth = app.add_subcommand("depth", "depth and conductor report for a catalog entry");
  sc_depth->add_option("--entry", entry_name, "catalog entry name")->required();
  sc_depth->add_option("--r", depth_r, "coset level for the transfer bound")
      ->capture_default_str();

  std::string spec_file, spec_file_b, mat_file;
  int cartan_r = 1;
  auto* sc_cartan = app.add_subcommand("cartan", "exact Cartan decomposition of one matrix");
  sc_cartan->add_option("--spec", spec_file, "field spec JSON file")->required();
  sc_cartan->add_option("--matrix", mat_file, "matrix JSON file")->required();
  sc_cartan->add_option("--r", cartan_r, "unit-coordinate level")->capture_default_str();

  auto* sc_iwasawa = app.add_subcommand("iwasawa", "exact Iwasawa decomposition of one matrix");
  sc_iwasawa->add_option("--spec", spec_file, "field spec JSON file")->required();
  sc_iwasawa->add_option("--matrix", mat_file, "matrix JSON file")->required();

  int cc_level = 1, cc_r = 1, cc_m = 2, cc_pairs = 3;
  u64 cc_budget = 2000000;
  auto* sc_close = app.add_subcommand("close-check", "closeness certificate and transport check");
  sc_close->add_option("--spec-a", spec_file, "first field spec JSON file")->required();
  sc_close->add_option("--spec-b", spec_file_b, "second field spec JSON file")->required();
  sc_close->add_option("--level", cc_level, "matching level l")->required();
  sc_close->add_option("--r", cc_r, "coset level for transport")->capture_default_str();
  sc_close->add_option("--m", cc_m, "matrix rank for transport")->capture_default_str();
  sc_close->add_option("--budget", cc_budget, "enumeration budget")->capture_default_str();
  sc_close->add_option("--pairs", cc_pairs, "convolution pairs to verify")->capture_default_str();

  int jobs = int(std::max(1u, std::min(8u, std::thread::hardware_concurrency())));
  auto* sc_selftest = app.add_subcommand("selftest", "recompute every catalog entry");
  sc_selftest->add_option("--jobs", jobs, "worker threads")->capture_default_str();

  Output out;
  int rc = 0;
  try {
    app.parse(argc, argv);
    out.as_json = as_json;
    if (*sc_forms) cmd_forms(out, forms_n);
    if (*sc_sgroup) cmd_sgroup(out, catalog::load_catalog(catalog_dir), entry_name);
    if (*sc_packet) cmd_packet(out, catalog::load_catalog(catalog_dir), entry_name, form_arg);
    if (*sc_depth) cmd_depth(out, catalog::load_catalog(catalog_dir), entry_name, depth_r);
    if (*sc_cartan) cmd_cartan(out, spec_file, mat_file, cartan_r);
    if (*sc_iwasawa) cmd_iwasawa(out, spec_file, mat_file);
    if (*sc_close)
      cmd_close_check(out, spec_file, spec_file_b, cc_level, cc_r, cc_m, cc_budget, cc_pairs);
    if (*sc_selftest) rc = cmd_selftest(out, catalog::load_catalog(catalog_dir), jobs);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const budget_error& e) {
    std::cerr << "budget exhausted (" << e.budget << "): " << e.what() << "\n";
    return 2;
  } catch (const precision_error& e) {
    std::cerr << "precision too low: " << e.what() << " (width " << e.required_width
              << " suffices)\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  out.emit();
  return rc;
}
