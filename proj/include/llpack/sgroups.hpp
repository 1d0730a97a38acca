#pragma once

/**
 * Component groups attached to parameters.
 *
 * On the GL side the centralizer of a parameter is a connected product of
 * linear groups, so the only finite invariant is the cyclic group mu_g cut
 * out by the determinant inside SL_n (g = gcd of the distinct piece sizes).
 * On the SL side the component group is a central extension
 *
 *     1 -> Z/g -> S -> X -> 1
 *
 * of the finite abelian group X of character twists fixing the parameter.
 * The extension class is extracted from an exact matrix realization: choose
 * an intertwiner P_i for each basis twist, measure commutators and k-th
 * powers through the component character s = prod det^(n_i/g), and rebuild
 * S from the resulting presentation.  Every step that the matrices can
 * certify is certified; nothing is taken from the symbolic data alone.
 */

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "llpack/char_table.hpp"
#include "llpack/common.hpp"
#include "llpack/finite_group.hpp"
#include "llpack/flin.hpp"
#include "llpack/inner_forms.hpp"
#include "llpack/parameters.hpp"

namespace llpack {

// ---------------------------------------------------------------------------
// GL side: the determinant defect group.

struct GlSGroup {
  int g = 1;                      // order of pi_0(C(phi) cap SL_n)
  std::vector<int> piece_dims;    // distinct piece sizes n_i
  std::vector<int> piece_mults;   // multiplicities e_i
  std::vector<int> s_exponents;   // n_i / g; s(A) = prod det(A_i)^(n_i/g)
};

inline GlSGroup s_group_gl(const LanglandsParameter& phi) {
  if (phi.sl_side) throw domain_error("s_group_gl: parameter lives on the SL side");
  LanglandsParameter ph = normalize(phi);
  GlSGroup out;
  i64 g = 0;
  for (const auto& [pc, mult] : ph.pieces) {
    out.piece_dims.push_back(pc.dim());
    out.piece_mults.push_back(mult);
    g = std::gcd(g, i64(pc.dim()));
  }
  out.g = int(g);
  for (int d : out.piece_dims) out.s_exponents.push_back(d / out.g);
  return out;
}

// ---------------------------------------------------------------------------
// Central extensions of a finite abelian group by Z/g.

/** Normalized 2-cocycle on X with values in Z/g, tabulated. */
struct CocycleTable {
  int g = 1;
  std::vector<std::vector<int>> kappa;  // kappa[x][y] in [0, g)
};

/** The extension 1 -> Z/g -> S -> X -> 1; element (zeta, x) = zeta*|X| + x. */
struct CentralExtension {
  int g = 1;
  FiniteGroup X = trivial_group();
  AbelianBasis xbasis;
  FiniteGroup S = trivial_group();
  int z = 0;  // central element generating the kernel, of exact order g
  CocycleTable kappa;

  int elem(int zeta, int x) const { return ((zeta % g) + g) % g * X.order() + x; }
  std::pair<int, int> split(int s) const { return {s / X.order(), s % X.order()}; }
};

inline CentralExtension build_central_extension(int g, const FiniteGroup& X,
                                                const CocycleTable& kap) {
  int nx = X.order();
  if (g < 1) throw domain_error("central extension: kernel order must be positive");
  if (kap.g != g || int(kap.kappa.size()) != nx)
    throw domain_error("central extension: cocycle table has the wrong shape");
  for (int x = 0; x < nx; ++x) {
    if (int(kap.kappa[size_t(x)].size()) != nx)
      throw domain_error("central extension: cocycle table has the wrong shape");
    for (int y = 0; y < nx; ++y) {
      int v = kap.kappa[size_t(x)][size_t(y)];
      if (v < 0 || v >= g) throw domain_error("central extension: cocycle value out of range");
    }
    if (kap.kappa[size_t(0)][size_t(x)] != 0 || kap.kappa[size_t(x)][size_t(0)] != 0)
      throw domain_error("central extension: cocycle is not normalized");
  }
  // cocycle identity: kappa(x,y) + kappa(xy,w) = kappa(y,w) + kappa(x,yw)
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y)
      for (int w = 0; w < nx; ++w) {
        int lhs = kap.kappa[size_t(x)][size_t(y)] + kap.kappa[size_t(X.op(x, y))][size_t(w)];
        int rhs = kap.kappa[size_t(y)][size_t(w)] + kap.kappa[size_t(x)][size_t(X.op(y, w))];
        if ((lhs - rhs) % g != 0) throw domain_error("central extension: cocycle identity fails");
      }

  int order = g * nx;
  auto idx = [nx](int zeta, int x) { return zeta * nx + x; };
  std::vector<std::vector<int>> table(size_t(order), std::vector<int>(size_t(order), 0));
  for (int z1 = 0; z1 < g; ++z1)
    for (int x1 = 0; x1 < nx; ++x1)
      for (int z2 = 0; z2 < g; ++z2)
        for (int x2 = 0; x2 < nx; ++x2)
          table[size_t(idx(z1, x1))][size_t(idx(z2, x2))] =
              idx((z1 + z2 + kap.kappa[size_t(x1)][size_t(x2)]) % g, X.op(x1, x2));

  CentralExtension E;
  E.g = g;
  E.X = X;
  E.xbasis = abelian_basis(X);
  E.S = FiniteGroup(std::move(table));  // validates all group axioms
  E.kappa = kap;
  E.z = E.elem(1 % g, 0);
  if (E.S.element_order(E.z) != g)
    throw domain_error("central extension: kernel generator has the wrong order");
  for (int s = 0; s < order; ++s)
    if (E.S.op(E.z, s) != E.S.op(s, E.z))
      throw domain_error("central extension: kernel generator is not central");
  if (int(E.S.subgroup_generated({E.z}).size()) != g)
    throw domain_error("central extension: kernel size mismatch");
  return E;
}

/** Presentation data: generators s_i over basis characters of X with
 *  s_i^{k_i} = z^{nu_i} and s_i s_j = z^{beta_ij} s_j s_i for i < j. */
struct ExtensionPresentation {
  int g = 1;
  std::vector<int> orders;              // k_i, matching an AbelianBasis of X
  std::vector<std::vector<int>> beta;   // full antisymmetric matrix mod g
  std::vector<int> nu;                  // nu_i in [0, g)
};

/** Collect u(a) u(b) = z^kappa(a,b) u(a+b) for the section u(a) = prod s_i^{a_i}. */
inline CocycleTable cocycle_from_presentation(const ExtensionPresentation& pres,
                                              const FiniteGroup& X, const AbelianBasis& basis) {
  size_t r = pres.orders.size();
  if (basis.orders != pres.orders)
    throw domain_error("cocycle: presentation orders disagree with the basis");
  if (pres.nu.size() != r || pres.beta.size() != r)
    throw domain_error("cocycle: presentation arrays have the wrong length");
  for (size_t i = 0; i < r; ++i) {
    if (pres.beta[i].size() != r)
      throw domain_error("cocycle: presentation arrays have the wrong length");
    for (size_t j = 0; j < r; ++j)
      if ((pres.beta[i][j] + pres.beta[j][i]) % pres.g != 0)
        throw domain_error("cocycle: beta matrix is not antisymmetric");
    // s_i^{k_i} is central, so beta must die on k_i-torsion
    for (size_t j = 0; j < r; ++j)
      if ((i64(pres.orders[i]) * pres.beta[i][j]) % pres.g != 0)
        throw domain_error("cocycle: beta is not killed by the generator orders");
  }
  int nx = X.order();
  CocycleTable kap{pres.g, std::vector<std::vector<int>>(size_t(nx), std::vector<int>(size_t(nx), 0))};
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y) {
      const auto& a = basis.coords[size_t(x)];
      const auto& b = basis.coords[size_t(y)];
      i64 acc = 0;
      // moving s_j^{a_j} (j > i) left past s_i^{b_i} costs z^{-beta_ij a_j b_i}
      for (size_t i = 0; i < r; ++i) {
        acc += i64(pres.nu[i]) * ((a[i] + b[i]) / pres.orders[i]);
        for (size_t j = i + 1; j < r; ++j) acc -= i64(pres.beta[i][j]) * a[j] * b[i];
      }
      kap.kappa[size_t(x)][size_t(y)] = int(((acc % pres.g) + pres.g) % pres.g);
    }
  return kap;
}

// ---------------------------------------------------------------------------
// Intertwiner linear algebra over F_ell.

/** Basis of { P : P M_c = lambda_c M_c P for every constraint }. */
inline std::vector<MatF> scaled_intertwiners(const std::vector<MatF>& cons,
                                             const std::vector<i64>& lambdas) {
  if (cons.empty() || cons.size() != lambdas.size())
    throw domain_error("intertwiners: need one scalar per constraint");
  int n = cons[0].r;
  i64 ell = cons[0].ell;
  for (const auto& M : cons)
    if (M.r != n || M.c != n || M.ell != ell)
      throw domain_error("intertwiners: constraints must be square of equal size");
  MatF A(ell, int(cons.size()) * n * n, n * n);
  int row = 0;
  for (size_t cix = 0; cix < cons.size(); ++cix) {
    const MatF& M = cons[cix];
    i64 lam = ((lambdas[cix] % ell) + ell) % ell;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j, ++row) {
        for (int q = 0; q < n; ++q) {
          A.at(row, i * n + q) = (A.at(row, i * n + q) + M.at(q, j)) % ell;
          A.at(row, q * n + j) =
              (A.at(row, q * n + j) + ell - mulmod(lam, M.at(i, q), ell)) % ell;
        }
      }
  }
  MatF ns = A.nullspace();
  std::vector<MatF> basis;
  for (int b = 0; b < ns.c; ++b) {
    MatF P(ell, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P.at(i, j) = ns.at(i * n + j, b);
    basis.push_back(std::move(P));
  }
  return basis;
}

inline std::vector<MatF> commutant_basis(const std::vector<MatF>& cons) {
  return scaled_intertwiners(cons, std::vector<i64>(cons.size(), 1));
}

/** An invertible element of the span: basis members first, then deterministic
 *  random combinations.  Throws when the span is degenerate. */
inline MatF invertible_from_span(const std::vector<MatF>& basis, u64 seed = 0) {
  if (basis.empty()) throw domain_error("invertible_from_span: empty span");
  for (const auto& P : basis)
    if (P.det() != 0) return P;
  i64 ell = basis[0].ell;
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
  std::uniform_int_distribution<i64> coef(0, ell - 1);
  for (int attempt = 0; attempt < 400; ++attempt) {
    MatF P(ell, basis[0].r, basis[0].c);
    for (const auto& B : basis) {
      i64 c = coef(rng);
      if (c == 0) continue;
      P = P + B.scaled(c);
    }
    if (P.det() != 0) return P;
  }
  throw domain_error("invertible_from_span: no invertible element found");
}

inline MatF mat_power(MatF P, int e) {
  if (e < 0) throw domain_error("mat_power: negative exponent");
  MatF acc = MatF::identity(P.ell, P.r);
  while (e > 0) {
    if (e & 1) acc = acc * P;
    P = P * P;
    e >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Commutant coordinates and the component character s.

/** Per-block coordinates A_i of a commutant element: Q must vanish across
 *  blocks and act as A_i (x) I_{n_i} inside block i.  Throws otherwise. */
inline std::vector<MatF> commutant_coordinates(const Realization& R, const MatF& Q) {
  if (Q.r != R.n || Q.c != R.n || Q.ell != R.ell)
    throw domain_error("commutant coordinates: shape mismatch");
  // global index -> (block, copy, position)
  std::vector<int> blk(size_t(R.n)), cpy(size_t(R.n)), pos(size_t(R.n));
  for (size_t b = 0; b < R.blocks.size(); ++b) {
    const auto& B = R.blocks[b];
    int nd = B.dim();
    for (int c = 0; c < B.mult; ++c)
      for (int x = 0; x < nd; ++x) {
        int gi = B.offset + c * nd + x;
        blk[size_t(gi)] = int(b);
        cpy[size_t(gi)] = c;
        pos[size_t(gi)] = x;
      }
  }
  std::vector<MatF> coords;
  for (const auto& B : R.blocks) coords.emplace_back(R.ell, B.mult, B.mult);
  for (size_t b = 0; b < R.blocks.size(); ++b) {
    const auto& B = R.blocks[b];
    int nd = B.dim();
    for (int c = 0; c < B.mult; ++c)
      for (int c2 = 0; c2 < B.mult; ++c2)
        coords[b].at(c, c2) = Q.at(B.offset + c * nd, B.offset + c2 * nd);
  }
  for (int i = 0; i < R.n; ++i)
    for (int j = 0; j < R.n; ++j) {
      i64 expect = 0;
      if (blk[size_t(i)] == blk[size_t(j)] && pos[size_t(i)] == pos[size_t(j)])
        expect = coords[size_t(blk[size_t(i)])].at(cpy[size_t(i)], cpy[size_t(j)]);
      if (Q.at(i, j) != expect)
        throw domain_error("commutant coordinates: element is not block-scalar");
    }
  return coords;
}

inline int realization_g(const Realization& R) {
  i64 g = 0;
  for (const auto& B : R.blocks) g = std::gcd(g, i64(B.dim()));
  return int(g);
}

/** s(Q) = prod det(A_i)^(n_i/g); on det-1 commutant elements this lands in
 *  mu_g and separates the connected components. */
inline i64 s_value(const Realization& R, const MatF& Q) {
  auto coords = commutant_coordinates(R, Q);
  int g = realization_g(R);
  i64 val = 1;
  for (size_t b = 0; b < R.blocks.size(); ++b)
    val = mulmod(val, powmod(coords[b].det(), R.blocks[b].dim() / g, R.ell), R.ell);
  return val;
}

/** Discrete log in mu_g: t with omega^t = val, omega of exact order g. */
inline int mu_dlog(i64 val, i64 omega, int g, i64 ell) {
  for (int t = 0; t < g; ++t)
    if (powmod(omega, t, ell) == ((val % ell) + ell) % ell) return t;
  throw domain_error("mu_dlog: value is not a g-th root of unity");
}

// ---------------------------------------------------------------------------
// Brute-force certification of the centralizer shape.

struct CentralizerReport {
  int dim = 0;                              // commutant dimension
  std::vector<std::pair<int, int>> blocks;  // (piece size n_i, multiplicity e_i)
  int g = 1;
  int witness_order = 0;  // order of s on the constructed witness component
  bool certified = false;
};

inline CentralizerReport brute_force_centralizer_oracle(const Realization& R) {
  CentralizerReport rep;
  auto basis = commutant_basis(R.all_constraints());
  rep.dim = int(basis.size());
  i64 expect = 0;
  for (const auto& B : R.blocks) {
    rep.blocks.emplace_back(B.dim(), B.mult);
    expect += i64(B.mult) * B.mult;
  }
  rep.g = realization_g(R);
  if (rep.dim != expect) return rep;
  for (const auto& Q : basis) {
    try {
      commutant_coordinates(R, Q);
    } catch (const domain_error&) {
      return rep;
    }
  }
  // witness: Bezout exponents x_i with sum x_i n_i = g give an element of
  // C cap SL_n whose s-value has full order g
  int g = rep.g;
  std::vector<i64> xs;
  i64 G = 0;
  for (const auto& B : R.blocks) {
    i64 ni = B.dim();
    if (G == 0) {
      xs.push_back(1);
      G = ni;
      continue;
    }
    i64 r0 = G, r1 = ni, s0 = 1, s1 = 0, t0 = 0, t1 = 1;  // extended gcd of (G, ni)
    while (r1 != 0) {
      i64 q = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
      std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    G = r0;
    for (auto& x : xs) x *= s0;
    xs.push_back(t0);
  }
  if (G != g) return rep;
  i64 omega = g == 1 ? 1 : root_of_order(g, R.ell);
  MatF W(R.ell, R.n, R.n);
  for (const auto& B : R.blocks) {
    size_t b = size_t(&B - R.blocks.data());
    int nd = B.dim();
    i64 e = ((xs[b] % g) + g) % g;
    for (int c = 0; c < B.mult; ++c)
      for (int x = 0; x < nd; ++x)
        W.at(B.offset + c * nd + x, B.offset + c * nd + x) = c == 0 ? powmod(omega, e, R.ell) : 1;
  }
  for (const auto& M : R.all_constraints())
    if (!(W * M == M * W)) return rep;
  if (W.det() != 1) return rep;
  i64 sval = s_value(R, W);
  int ord = 1;
  i64 acc = sval;
  while (acc != 1 && ord <= g + 1) {
    acc = mulmod(acc, sval, R.ell);
    ++ord;
  }
  rep.witness_order = ord;
  rep.certified = (ord == g);
  return rep;
}

// ---------------------------------------------------------------------------
// The twist group X on the SL side.

struct TwistGroupReport {
  FiniteGroup X = trivial_group();
  AbelianBasis basis;
  std::vector<int> char_rows;                // X element -> linear row of the table
  std::vector<std::vector<int>> piece_perm;  // X element -> permutation of distinct pieces
};

/** All linear characters of the backing group whose tensor fixes the
 *  parameter's multiset of pieces.  Pure character arithmetic. */
inline TwistGroupReport twist_stabilizer(const LanglandsParameter& phi, const CharTable& T) {
  LanglandsParameter ph = normalize(phi);
  int k = T.num_classes();
  std::map<std::vector<i64>, int> row_of;
  for (size_t r = 0; r < T.chi.size(); ++r) row_of[T.chi[r]] = int(r);
  auto rowprod = [&](int lin, int any) {
    std::vector<i64> v(size_t(k), 0);
    for (int c = 0; c < k; ++c)
      v[size_t(c)] = mulmod(T.chi[size_t(lin)][size_t(c)], T.chi[size_t(any)][size_t(c)], T.ell);
    auto it = row_of.find(v);
    if (it == row_of.end())
      throw domain_error("twist stabilizer: character product escapes the table");
    return it->second;
  };
  struct Key {
    int row, a, mult;
    UnramifiedTwist tw;
  };
  std::vector<Key> pieces;
  for (const auto& [pc, mult] : ph.pieces) {
    if (pc.backing_irrep < 0)
      throw domain_error("twist stabilizer: parameter must be matrix-backed");
    pieces.push_back({pc.backing_irrep, pc.sl2_size, mult, pc.twist});
  }
  int trivial_row = -1;
  std::vector<int> linear;
  for (size_t r = 0; r < T.dims.size(); ++r)
    if (T.dims[r] == 1) {
      linear.push_back(int(r));
      if (std::all_of(T.chi[r].begin(), T.chi[r].end(), [](i64 v) { return v == 1; }))
        trivial_row = int(r);
    }
  if (trivial_row < 0) throw domain_error("twist stabilizer: table has no trivial row");

  std::vector<int> stab;
  std::vector<std::vector<int>> perms;
  for (int lr : linear) {
    std::vector<int> perm(pieces.size(), -1);
    std::vector<char> used(pieces.size(), 0);
    bool ok = true;
    for (size_t i = 0; i < pieces.size() && ok; ++i) {
      int target = rowprod(lr, pieces[i].row);
      int found = -1;
      for (size_t j = 0; j < pieces.size(); ++j) {
        if (used[j]) continue;
        if (pieces[j].row == target && pieces[j].a == pieces[i].a &&
            pieces[j].mult == pieces[i].mult && pieces[j].tw == pieces[i].tw) {
          found = int(j);
          break;
        }
      }
      if (found < 0)
        ok = false;
      else {
        used[size_t(found)] = 1;
        perm[i] = found;
      }
    }
    if (!ok) continue;
    stab.push_back(lr);
    perms.push_back(perm);
  }
  // trivial character first: it is the identity of X
  for (size_t i = 0; i < stab.size(); ++i)
    if (stab[i] == trivial_row) {
      std::swap(stab[0], stab[i]);
      std::swap(perms[0], perms[i]);
      break;
    }
  if (stab.empty() || stab[0] != trivial_row)
    throw domain_error("twist stabilizer: trivial character does not stabilize");

  std::map<int, int> pos;
  for (size_t i = 0; i < stab.size(); ++i) pos[stab[i]] = int(i);
  int m = int(stab.size());
  std::vector<std::vector<int>> table(size_t(m), std::vector<int>(size_t(m), 0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      auto it = pos.find(rowprod(stab[size_t(a)], stab[size_t(b)]));
      if (it == pos.end())
        throw domain_error("twist stabilizer: stabilizing characters are not closed");
      table[size_t(a)][size_t(b)] = it->second;
    }
  TwistGroupReport rep;
  rep.X = FiniteGroup(std::move(table));
  if (!rep.X.is_abelian()) throw domain_error("twist stabilizer: character group not abelian");
  rep.basis = abelian_basis(rep.X);
  rep.char_rows = stab;
  rep.piece_perm = perms;
  // the permutation action must be a homomorphism
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (size_t i = 0; i < pieces.size(); ++i)
        if (perms[size_t(rep.X.op(a, b))][i] != perms[size_t(b)][size_t(perms[size_t(a)][i])])
          throw domain_error("twist stabilizer: piece action is not a homomorphism");
  return rep;
}

/** Dimension of { P : P phi(w) = chi(w) phi(w) P, P central for the SL2 and
 *  twist constraints }.  Equals sum e_i^2 exactly when chi stabilizes. */
inline int twist_intertwiner_dimension(const Realization& R, const CharTable& T, int row) {
  std::vector<MatF> cons = R.all_constraints();
  std::vector<i64> lam;
  size_t nw = cons.size() - 3;  // weil images, then semisimple/ladder/sampler
  for (size_t w = 0; w < nw; ++w) lam.push_back(T.chi[size_t(row)][size_t(T.class_of[w])]);
  lam.insert(lam.end(), {1, 1, 1});
  return int(scaled_intertwiners(cons, lam).size());
}

/** Declared twist action for parameters without a matrix backing: validated
 *  for shape, never invented. */
struct TwistAction {
  FiniteGroup X = trivial_group();
  std::vector<std::vector<int>> piece_perm;
};

// ---------------------------------------------------------------------------
// The SL-side component group via matrix extraction.

struct SlSGroup {
  i64 ell = 0;    // realization modulus used for the extraction
  i64 omega = 1;  // chosen g-th root of unity mod ell
  int g = 1;
  TwistGroupReport twists;
  ExtensionPresentation pres;
  CentralExtension ext;
  std::vector<MatF> lifts;  // intertwiners for the basis characters
  CentralizerReport oracle;
};

inline SlSGroup s_group_sl(const LanglandsParameter& phi, i64 ell, u64 seed = 0) {
  if (!phi.sl_side) throw domain_error("s_group_sl: parameter lives on the GL side");
  LanglandsParameter ph = normalize(phi);
  if (!ph.backing) throw domain_error("s_group_sl: parameter has no matrix backing");
  Realization R = matrix_realization(ph, ell);
  CharTable T = character_table(*ph.backing, ell);

  SlSGroup out;
  out.ell = ell;
  out.g = realization_g(R);
  out.omega = out.g == 1 ? 1 : root_of_order(out.g, ell);
  out.oracle = brute_force_centralizer_oracle(R);
  if (!out.oracle.certified)
    throw domain_error("s_group_sl: centralizer certification failed");
  out.twists = twist_stabilizer(ph, T);

  // membership cross-check: chi stabilizes iff the intertwiner space is full
  i64 full = 0;
  for (const auto& B : R.blocks) full += i64(B.mult) * B.mult;
  for (size_t r = 0; r < T.dims.size(); ++r) {
    if (T.dims[r] != 1) continue;
    bool member =
        std::find(out.twists.char_rows.begin(), out.twists.char_rows.end(), int(r)) !=
        out.twists.char_rows.end();
    int dim = twist_intertwiner_dimension(R, T, int(r));
    if (member != (dim == full))
      throw domain_error("s_group_sl: twist membership disagrees with intertwiner rank");
  }

  const AbelianBasis& B = out.twists.basis;
  size_t r = B.gens.size();
  std::vector<MatF> cons = R.all_constraints();
  std::vector<MatF> comm = commutant_basis(cons);

  out.lifts.clear();
  for (size_t i = 0; i < r; ++i) {
    int row = out.twists.char_rows[size_t(B.gens[i])];
    std::vector<i64> lam;
    size_t nw = cons.size() - 3;
    for (size_t w = 0; w < nw; ++w) lam.push_back(T.chi[size_t(row)][size_t(T.class_of[w])]);
    lam.insert(lam.end(), {1, 1, 1});
    MatF P = invertible_from_span(scaled_intertwiners(cons, lam), seed + 17 * i);
    if (seed != 0) {
      MatF c = invertible_from_span(comm, seed * 1000003ull + i);
      P = c * P;
    }
    out.lifts.push_back(std::move(P));
  }

  out.pres.g = out.g;
  out.pres.orders = B.orders;
  out.pres.beta.assign(r, std::vector<int>(r, 0));
  out.pres.nu.assign(r, 0);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      if (i == j) continue;
      MatF c = out.lifts[i] * out.lifts[j] * out.lifts[i].inverse() * out.lifts[j].inverse();
      if (c.det() != 1) throw domain_error("s_group_sl: commutator leaves SL");
      out.pres.beta[i][j] = mu_dlog(s_value(R, c), out.omega, out.g, ell);
    }
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      if ((out.pres.beta[i][j] + out.pres.beta[j][i]) % out.g != 0)
        throw domain_error("s_group_sl: commutator pairing is not antisymmetric");
      if ((i64(B.orders[i]) * out.pres.beta[i][j]) % out.g != 0)
        throw domain_error("s_group_sl: commutator pairing survives a generator order");
    }
  // nu_i: with s_i = lambda P_i scaled into SL, s(s_i^{k_i}) = omega^{nu_i};
  // eliminating lambda via lambda^n = det(P_i)^-1 leaves, after raising to
  // g/g0 with g0 = gcd(g, k_i),
  //     omega^{nu_i g/g0} = s(P_i^{k_i})^{g/g0} det(P_i)^{-k_i/g0}.
  // Solutions form the coset nu_i + g0 Z, exactly the section freedom.
  for (size_t i = 0; i < r; ++i) {
    int ki = B.orders[i];
    MatF Q = mat_power(out.lifts[i], ki);
    i64 sq = s_value(R, Q);
    i64 D = out.lifts[i].det();
    int g0 = int(std::gcd(i64(out.g), i64(ki)));
    i64 target = mulmod(powmod(sq, out.g / g0, ell),
                        powmod(invmod(D, ell), ki / g0, ell), ell);
    int found = -1;
    for (int t = 0; t < out.g && found < 0; ++t)
      if (powmod(out.omega, i64(t) * (out.g / g0), ell) == target) found = t;
    if (found < 0) throw domain_error("s_group_sl: power class has no consistent exponent");
    out.pres.nu[i] = found;
  }

  CocycleTable kap = cocycle_from_presentation(out.pres, out.twists.X, B);
  out.ext = build_central_extension(out.g, out.twists.X, kap);
  // the built group must satisfy the extracted presentation
  for (size_t i = 0; i < r; ++i) {
    int si = out.ext.elem(0, B.gens[i]);
    if (out.ext.S.power(si, B.orders[i]) != out.ext.S.power(out.ext.z, out.pres.nu[i]))
      throw domain_error("s_group_sl: built extension violates a power relation");
    for (size_t j = 0; j < r; ++j) {
      int sj = out.ext.elem(0, B.gens[j]);
      if (out.ext.S.commutator(si, sj) != out.ext.S.power(out.ext.z, out.pres.beta[i][j]))
        throw domain_error("s_group_sl: built extension violates a commutator relation");
    }
  }
  // all-pairs check: the section U(x) = prod P_i^{x_i} must realize the
  // collected cocycle's commutator, kappa(x,y) - kappa(y,x), on every pair
  int nx = out.twists.X.order();
  std::vector<MatF> U(size_t(nx), MatF::identity(ell, R.n));
  for (int x = 0; x < nx; ++x)
    for (size_t i = 0; i < r; ++i)
      U[size_t(x)] = U[size_t(x)] * mat_power(out.lifts[i], B.coords[size_t(x)][i]);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y) {
      MatF c = U[size_t(x)] * U[size_t(y)] * U[size_t(x)].inverse() * U[size_t(y)].inverse();
      int want = ((kap.kappa[size_t(x)][size_t(y)] - kap.kappa[size_t(y)][size_t(x)]) % out.g +
                  out.g) % out.g;
      if (mu_dlog(s_value(R, c), out.omega, out.g, ell) != want)
        throw domain_error("s_group_sl: section commutators disagree with the cocycle");
    }
  return out;
}

/** Tier-1 assembly from declared data: the cocycle is supplied, not derived. */
inline SlSGroup s_group_sl_declared(const LanglandsParameter& phi, const TwistAction& act,
                                    const CocycleTable& kap) {
  if (!phi.sl_side) throw domain_error("s_group_sl: parameter lives on the GL side");
  LanglandsParameter ph = normalize(phi);
  i64 g = 0;
  for (const auto& [pc, mult] : ph.pieces) g = std::gcd(g, i64(pc.dim()));
  if (kap.g != int(g)) throw domain_error("s_group_sl: declared cocycle has the wrong kernel");
  if (!act.X.is_abelian()) throw domain_error("s_group_sl: twist group must be abelian");
  size_t np = ph.pieces.size();
  if (act.piece_perm.size() != size_t(act.X.order()))
    throw domain_error("s_group_sl: need one piece permutation per twist");
  for (int a = 0; a < act.X.order(); ++a) {
    const auto& pa = act.piece_perm[size_t(a)];
    if (pa.size() != np) throw domain_error("s_group_sl: piece permutation has wrong length");
    std::vector<char> seen(np, 0);
    for (size_t i = 0; i < np; ++i) {
      int j = pa[i];
      if (j < 0 || size_t(j) >= np || seen[size_t(j)])
        throw domain_error("s_group_sl: piece action is not a permutation");
      seen[size_t(j)] = 1;
      if (ph.pieces[i].first.dim() != ph.pieces[size_t(j)].first.dim() ||
          ph.pieces[i].second != ph.pieces[size_t(j)].second ||
          ph.pieces[i].first.sl2_size != ph.pieces[size_t(j)].first.sl2_size ||
          !(ph.pieces[i].first.twist == ph.pieces[size_t(j)].first.twist))
        throw domain_error("s_group_sl: piece action moves a piece off its shape");
    }
    if (a == 0)
      for (size_t i = 0; i < np; ++i)
        if (pa[i] != int(i)) throw domain_error("s_group_sl: identity twist must act trivially");
    for (int b = 0; b < act.X.order(); ++b)
      for (size_t i = 0; i < np; ++i)
        if (act.piece_perm[size_t(act.X.op(a, b))][i] !=
            act.piece_perm[size_t(b)][size_t(act.piece_perm[size_t(a)][i])])
          throw domain_error("s_group_sl: piece action is not a homomorphism");
  }
  SlSGroup out;
  out.g = int(g);
  out.twists.X = act.X;
  out.twists.basis = abelian_basis(act.X);
  out.twists.piece_perm = act.piece_perm;
  out.ext = build_central_extension(out.g, act.X, kap);
  return out;
}

// ---------------------------------------------------------------------------
// Irreducibles of S sorted by central character, and the two packet routes.

struct CentralCharacterClasses {
  i64 ell = 0;  // splitting modulus of the S-table (independent of the realization)
  CharTable table;
  int g = 1;
  i64 root = 1;  // fixed g-th root of unity mod ell
  std::vector<std::vector<int>> irreps_by_char;  // j -> rows with omega_rho(z) = root^j
};

inline CentralCharacterClasses irr_with_central_character(const CentralExtension& E) {
  CentralCharacterClasses out;
  out.ell = splitting_prime(E.S);
  out.table = character_table(E.S, out.ell);
  out.g = E.g;
  out.root = E.g == 1 ? 1 : root_of_order(E.g, out.ell);
  out.irreps_by_char.assign(size_t(E.g), {});
  for (size_t r = 0; r < out.table.dims.size(); ++r) {
    i64 omega = mulmod(out.table.chi[r][size_t(out.table.class_of[size_t(E.z)])],
                       invmod(out.table.dims[r] % out.ell, out.ell), out.ell);
    out.irreps_by_char[size_t(mu_dlog(omega, out.root, E.g, out.ell))].push_back(int(r));
  }
  return out;
}

inline int packet_cardinality(const CentralCharacterClasses& C, int j) {
  if (j < 0 || j >= C.g) throw domain_error("packet_cardinality: character index out of range");
  return int(C.irreps_by_char[size_t(j)].size());
}

/** Irreducibles with central character j, counted through the twisted group
 *  algebra of X: the radical R_j of the commutator pairing gives |R_j|
 *  irreducibles of common dimension sqrt(|X|/|R_j|). */
struct TwistedIrrSummary {
  int count = 0;
  int dim = 0;
  std::vector<int> radical;  // X elements pairing trivially under j * [.,.]
};

inline TwistedIrrSummary twisted_algebra_irr(const CentralExtension& E, int j) {
  if (j < 0 || j >= E.g) throw domain_error("twisted_algebra_irr: character out of range");
  int nx = E.X.order();
  auto commexp = [&](int x, int y) {
    auto [zc, xc] = E.split(E.S.commutator(E.elem(0, x), E.elem(0, y)));
    if (xc != 0) throw domain_error("twisted_algebra_irr: commutator leaves the kernel");
    return zc;
  };
  TwistedIrrSummary out;
  for (int x = 0; x < nx; ++x) {
    bool rad = true;
    for (int y = 0; y < nx && rad; ++y)
      if ((i64(j) * commexp(x, y)) % E.g != 0) rad = false;
    if (rad) out.radical.push_back(x);
  }
  int rs = int(out.radical.size());
  if (nx % rs != 0) throw domain_error("twisted_algebra_irr: radical does not divide");
  int m = nx / rs;
  int d = 0;
  while ((d + 1) * (d + 1) <= m) ++d;
  if (d * d != m) throw domain_error("twisted_algebra_irr: radical index is not a square");
  out.count = rs;
  out.dim = d;
  return out;
}

/** Number of admissible trivializations: |Irr(S / <z>)|, computed honestly
 *  from the quotient's character table and checked against |X|. */
inline int torsor_count(const CentralExtension& E) {
  auto q = E.S.quotient(E.S.subgroup_generated({E.z}));
  CharTable TQ = character_table(q.group, splitting_prime(q.group));
  int cnt = int(TQ.dims.size());
  if (cnt != E.X.order()) throw domain_error("torsor_count: quotient dual has the wrong size");
  return cnt;
}

/** Both packet counts for every central character: through the twisted
 *  algebra of X, and through the honest character table of S. */
struct PacketTheoremReport {
  bool ok = false;
  std::vector<TwistedIrrSummary> algebra_route;
  std::vector<std::vector<i64>> table_route;  // sorted dims per central character
  int torsors = 0;
};

inline PacketTheoremReport check_packet_theorem(const CentralExtension& E,
                                                const CentralCharacterClasses& C) {
  if (C.g != E.g) throw domain_error("packet theorem: mismatched kernel orders");
  PacketTheoremReport rep;
  rep.ok = true;
  for (int j = 0; j < E.g; ++j) {
    TwistedIrrSummary alg = twisted_algebra_irr(E, j);
    std::vector<i64> dims;
    for (int r : C.irreps_by_char[size_t(j)]) dims.push_back(C.table.dims[size_t(r)]);
    std::sort(dims.begin(), dims.end());
    std::vector<i64> expect(size_t(alg.count), alg.dim);
    if (dims != expect) rep.ok = false;
    i64 ss = 0;
    for (i64 d : dims) ss += d * d;
    if (ss != E.X.order()) rep.ok = false;
    rep.algebra_route.push_back(std::move(alg));
    rep.table_route.push_back(std::move(dims));
  }
  rep.torsors = torsor_count(E);
  if (rep.torsors != E.X.order()) rep.ok = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Enhanced parameters: irreducibles of S spread over the inner forms.

struct EnhancedParameter {
  int central_char = 0;  // j in [0, g)
  int irrep = 0;         // row of the S-table
  i64 dim = 1;           // multiplicity of the member inside its packet
  InnerFormLabel form;
};

/** The central character z -> root^j is the Kottwitz character k = j n / g;
 *  every irreducible of S lands on exactly one inner form. */
inline std::vector<EnhancedParameter> enumerate_enhanced(int n, const CentralExtension& E,
                                                         const CentralCharacterClasses& C) {
  if (E.g < 1 || n % E.g != 0)
    throw domain_error("enumerate_enhanced: kernel order must divide n");
  if (C.g != E.g) throw domain_error("enumerate_enhanced: mismatched kernel orders");
  std::vector<EnhancedParameter> out;
  std::vector<char> seen(C.table.dims.size(), 0);
  for (int j = 0; j < E.g; ++j) {
    int k = int((i64(j) * (n / E.g)) % n);
    InnerFormLabel form = form_from_kottwitz(KottwitzCharacter{n, k});
    if (form.d != E.g / std::gcd(j == 0 ? E.g : j, E.g))
      throw domain_error("enumerate_enhanced: form index disagrees with the character order");
    for (int r : C.irreps_by_char[size_t(j)]) {
      if (seen[size_t(r)]) throw domain_error("enumerate_enhanced: duplicate irreducible");
      seen[size_t(r)] = 1;
      out.push_back({j, r, C.table.dims[size_t(r)], form});
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw domain_error("enumerate_enhanced: partition misses an irreducible");
  return out;
}

/** One line per central character: the form and the packet multiplicities. */
struct PacketLine {
  int central_char = 0;
  InnerFormLabel form;
  std::vector<i64> multiplicities;
};

inline std::vector<PacketLine> packet_table(int n, const CentralExtension& E,
                                            const CentralCharacterClasses& C) {
  std::vector<PacketLine> lines(size_t(E.g));
  for (int j = 0; j < E.g; ++j) {
    lines[size_t(j)].central_char = j;
    lines[size_t(j)].form = form_from_kottwitz(KottwitzCharacter{n, int((i64(j) * (n / E.g)) % n)});
  }
  for (const auto& ep : enumerate_enhanced(n, E, C))
    lines[size_t(ep.central_char)].multiplicities.push_back(ep.dim);
  for (auto& L : lines) std::sort(L.multiplicities.begin(), L.multiplicities.end());
  return lines;
}

/** Packet line for one inner form; throws when no central character of the
 *  extension reaches the label (the form is irrelevant for this parameter). */
inline PacketLine packet_for_form(int n, const CentralExtension& E,
                                  const CentralCharacterClasses& C, const InnerFormLabel& form) {
  for (const auto& L : packet_table(n, E, C))
    if (L.form == form) return L;
  throw domain_error("packet_for_form: no member of the packet lives on this form");
}

/** The GL-side group as a trivial-twist extension: packets are singletons,
 *  one per character of mu_g. */
inline CentralExtension to_extension(const GlSGroup& gl) {
  CocycleTable kap{gl.g, {{0}}};
  return build_central_extension(gl.g, trivial_group(), kap);
}

// ---------------------------------------------------------------------------
// Archimedean component groups, by the classification of the two base fields.

struct ArchSGroupReport {
  int g = 1;        // determinant defect: gcd of the piece dimensions
  int x_order = 1;  // twist group: 2 iff the sign twist fixes the parameter
  std::vector<int> s_factors;  // cyclic invariants of S
  bool quaternion_relevant = false;
  int packet_split = 1;
  int packet_quaternion = 0;  // 0 when the quaternion form is not relevant
  int irr_quaternion = 0;
  std::vector<std::pair<int, int>> collapse_fibers;  // paired S-table rows
  CentralExtension ext;
};

inline ArchSGroupReport archimedean_s_group(const ArchimedeanParameter& phi, bool sl_side) {
  ArchNormalForm nf = archimedean_normal_form(phi);
  ArchSGroupReport rep;
  rep.quaternion_relevant = nf.quaternion_relevant;
  int g = 0;
  for (const auto& pc : nf.sorted.pieces) g = std::gcd(g, pc.dim);
  rep.g = g;

  // sign twist: characters flip their parity, two-dimensional pieces are fixed
  bool sign_stable = true;
  if (!phi.complex_base) {
    std::multiset<std::tuple<int, int, int, std::string>> orig, flip;
    for (const auto& pc : nf.sorted.pieces) {
      orig.insert({pc.dim, pc.sign, pc.k, pc.shift});
      flip.insert({pc.dim, pc.dim == 1 ? 1 - pc.sign : pc.sign, pc.k, pc.shift});
    }
    sign_stable = orig == flip;
  }
  int x = (!phi.complex_base && sl_side && sign_stable) ? 2 : 1;
  rep.x_order = x;

  // assemble the extension; for g = x = 2 the determinant of the standard
  // sign intertwiner is (-1)^(number of two-dimensional pieces)
  ExtensionPresentation pres;
  pres.g = g;
  FiniteGroup X = x == 2 ? cyclic_group(2) : trivial_group();
  if (x == 2) {
    pres.orders = {2};
    pres.beta = {{0}};
    pres.nu = {g == 2 ? nf.n2 % 2 : 0};
  }
  AbelianBasis xb = abelian_basis(X);
  rep.ext = build_central_extension(g, X, cocycle_from_presentation(pres, X, xb));

  CentralCharacterClasses C = irr_with_central_character(rep.ext);
  rep.packet_split = packet_cardinality(C, 0);
  if (rep.quaternion_relevant) {
    if (g != 2) throw domain_error("archimedean: quaternion relevance needs an even defect");
    rep.irr_quaternion = packet_cardinality(C, 1);
    if (!sl_side) {
      rep.packet_quaternion = rep.irr_quaternion;  // one-to-one on the GL side
    } else {
      // the two characters over each quaternion member differ by the pullback
      // of the nontrivial character of X: pair them off
      const auto& cls = C.irreps_by_char[1];
      if (int(cls.size()) % 2 != 0)
        throw domain_error("archimedean: odd fiber over the quaternion form");
      int pull = -1;  // nontrivial row with trivial central character
      for (int r : C.irreps_by_char[0])
        if (C.table.dims[size_t(r)] == 1 &&
            !std::all_of(C.table.chi[size_t(r)].begin(), C.table.chi[size_t(r)].end(),
                         [](i64 v) { return v == 1; }))
          pull = r;
      if (pull < 0) throw domain_error("archimedean: missing pullback character");
      std::map<std::vector<i64>, int> row_of;
      for (size_t r = 0; r < C.table.chi.size(); ++r) row_of[C.table.chi[r]] = int(r);
      std::vector<char> used(C.table.dims.size(), 0);
      for (int r : cls) {
        if (used[size_t(r)]) continue;
        std::vector<i64> prod(C.table.chi[size_t(r)].size());
        for (size_t c = 0; c < prod.size(); ++c)
          prod[c] = mulmod(C.table.chi[size_t(r)][c], C.table.chi[size_t(pull)][c], C.ell);
        auto it = row_of.find(prod);
        if (it == row_of.end() || used[size_t(it->second)] || it->second == r)
          throw domain_error("archimedean: collapse pairing failed");
        used[size_t(r)] = used[size_t(it->second)] = 1;
        rep.collapse_fibers.emplace_back(std::min(r, it->second), std::max(r, it->second));
      }
      rep.packet_quaternion = int(rep.collapse_fibers.size());
    }
  }
  rep.s_factors = abelian_basis(rep.ext.S).orders;
  return rep;
}

}  // namespace llpack
