#pragma once

/**
 * Character tables and irreducible matrix representations over F_ell.
 *
 * ell must be a prime with ell = 1 mod exp(G) and ell > |G|: then F_ell
 * contains enough roots of unity to split every representation, Brauer and
 * ordinary characters agree, and small integers (dimensions, inner products)
 * are recovered exactly from their residues.
 *
 * Table: the commuting class-sum matrices are simultaneously diagonalized by
 * iterative eigenspace splitting (characteristic polynomials by Berkowitz,
 * roots by exhaustive scan).  Dimensions come from
 *   chi(1)^2 = |G| / sum_i w_i w_{i*} / |C_i|
 * with the integer square root identified by a bounded scan.  Row
 * orthogonality over F_ell is verified before returning.
 *
 * Representations: for each irreducible character, the central idempotent is
 * applied to the regular representation and a minimal invariant subspace is
 * spun up from idempotent columns (then pseudorandom image vectors).  The
 * result is certified: the solved matrices must satisfy the full
 * multiplication table and reproduce the character.
 */

#include <algorithm>
#include <vector>

#include "llpack/finite_group.hpp"
#include "llpack/flin.hpp"

namespace llpack {

struct CharTable {
  i64 ell = 0;
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;   // element -> class index
  std::vector<int> inv_class;  // class index -> class of inverses
  std::vector<std::vector<i64>> chi;  // [irrep][class], values in F_ell
  std::vector<i64> dims;              // integer dimensions

  int num_classes() const { return int(classes.size()); }
  i64 value(int irrep, int element) const { return chi[size_t(irrep)][size_t(class_of[size_t(element)])]; }
};

/** Smallest prime ell = 1 mod exp(G) with ell > max(|G|, lower). */
inline i64 splitting_prime(const FiniteGroup& G, i64 lower = 0) {
  return next_split_prime(G.exponent(), std::max<i64>(lower, G.order()));
}

inline CharTable character_table(const FiniteGroup& G, i64 ell) {
  if (!is_prime(ell)) throw domain_error("character_table: modulus must be prime");
  if ((ell - 1) % G.exponent() != 0)
    throw domain_error("character_table: need ell = 1 mod the group exponent");
  if (ell <= G.order()) throw domain_error("character_table: need ell > |G|");
  CharTable T;
  T.ell = ell;
  T.classes = G.conjugacy_classes();
  int k = int(T.classes.size());
  T.class_of.assign(size_t(G.order()), -1);
  for (int i = 0; i < k; ++i)
    for (int x : T.classes[size_t(i)]) T.class_of[size_t(x)] = i;
  T.inv_class.resize(size_t(k));
  for (int i = 0; i < k; ++i) T.inv_class[size_t(i)] = T.class_of[size_t(G.inv(T.classes[size_t(i)][0]))];

  // class-sum action matrices: (M_i)_{t,j} = #{x in C_i : x^{-1} z_t in C_j}
  std::vector<MatF> M;
  for (int i = 0; i < k; ++i) {
    MatF m(ell, k, k);
    for (int t = 0; t < k; ++t) {
      int zt = T.classes[size_t(t)][0];
      for (int x : T.classes[size_t(i)]) {
        int y = G.op(G.inv(x), zt);
        m.at(t, T.class_of[size_t(y)]) = (m.at(t, T.class_of[size_t(y)]) + 1) % ell;
      }
    }
    M.push_back(std::move(m));
  }

  // iterative simultaneous eigenspace splitting
  std::vector<MatF> spaces;  // k x s basis matrices (columns span the space)
  spaces.push_back(MatF::identity(ell, k));
  for (int i = 1; i < k; ++i) {
    std::vector<MatF> next;
    for (const MatF& V : spaces) {
      if (V.c == 1) {
        next.push_back(V);
        continue;
      }
      MatF R = MatF::solve(V, M[size_t(i)] * V);  // restriction; invariance certified by solve
      std::vector<i64> cp = R.charpoly();
      std::vector<i64> roots = poly_roots(cp, ell);
      MatF total(ell, V.c, 0);
      for (i64 lam : roots) {
        MatF K = (R - MatF::identity(ell, R.r).scaled(lam)).nullspace();
        if (K.c == 0) continue;
        next.push_back(V * K);
        MatF merged(ell, V.c, total.c + K.c);
        for (int a = 0; a < V.c; ++a) {
          for (int b = 0; b < total.c; ++b) merged.at(a, b) = total.at(a, b);
          for (int b = 0; b < K.c; ++b) merged.at(a, total.c + b) = K.at(a, b);
        }
        total = merged;
      }
      if (total.rank() != V.c)
        throw domain_error("character_table: class algebra fails to split (bad modulus)");
    }
    spaces = std::move(next);
  }
  for (const MatF& V : spaces)
    if (V.c != 1) throw domain_error("character_table: simultaneous splitting incomplete");

  // recover characters from the eigenvalue vectors
  i64 n = G.order() % ell;
  for (const MatF& V : spaces) {
    // eigenvalue of M_i on V
    std::vector<i64> w(size_t(k), 0);
    int nz = 0;
    while (V.at(nz, 0) == 0) ++nz;
    i64 vinv = invmod(V.at(nz, 0), ell);
    for (int i = 0; i < k; ++i) {
      MatF mv = M[size_t(i)] * V;
      w[size_t(i)] = mulmod(mv.at(nz, 0), vinv, ell);
    }
    i64 s = 0;
    for (int i = 0; i < k; ++i) {
      i64 ci = i64(T.classes[size_t(i)].size()) % ell;
      s = (s + mulmod(mulmod(w[size_t(i)], w[size_t(T.inv_class[size_t(i)])], ell), invmod(ci, ell), ell)) % ell;
    }
    i64 d2 = mulmod(n, invmod(s, ell), ell);
    i64 dim = 0;
    for (i64 d = 1; d * d <= G.order(); ++d)
      if (mulmod(d, d, ell) == d2) {
        dim = d;
        break;
      }
    if (dim == 0) throw domain_error("character_table: dimension recovery failed");
    std::vector<i64> row(size_t(k), 0);
    for (int i = 0; i < k; ++i) {
      i64 ci = i64(T.classes[size_t(i)].size()) % ell;
      row[size_t(i)] = mulmod(mulmod(dim % ell, w[size_t(i)], ell), invmod(ci, ell), ell);
    }
    T.chi.push_back(std::move(row));
    T.dims.push_back(dim);
  }

  // deterministic order: by dimension, then lexicographic values
  std::vector<int> ord(T.chi.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) {
    if (T.dims[size_t(a)] != T.dims[size_t(b)]) return T.dims[size_t(a)] < T.dims[size_t(b)];
    return T.chi[size_t(a)] < T.chi[size_t(b)];
  });
  std::vector<std::vector<i64>> chi2;
  std::vector<i64> dims2;
  for (int i : ord) {
    chi2.push_back(T.chi[size_t(i)]);
    dims2.push_back(T.dims[size_t(i)]);
  }
  T.chi = std::move(chi2);
  T.dims = std::move(dims2);

  // verification: counts, sum of squares, row orthogonality
  if (int(T.chi.size()) != k) throw domain_error("character_table: wrong irreducible count");
  i64 sq = 0;
  for (i64 d : T.dims) sq += d * d;
  if (sq != G.order()) throw domain_error("character_table: dimension check failed");
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      i64 acc = 0;
      for (int i = 0; i < k; ++i) {
        i64 ci = i64(T.classes[size_t(i)].size()) % ell;
        acc = (acc + mulmod(ci, mulmod(T.chi[size_t(a)][size_t(i)],
                                       T.chi[size_t(b)][size_t(T.inv_class[size_t(i)])], ell),
                            ell)) %
              ell;
      }
      i64 expect = (a == b) ? n : 0;
      if (acc != expect) throw domain_error("character_table: orthogonality check failed");
    }
  return T;
}

struct RepF {
  i64 ell = 0;
  int dim = 0;
  std::vector<MatF> mats;  // indexed by group element
  const MatF& operator()(int g) const { return mats[size_t(g)]; }
};

/** Certified irreducible representations aligned with the table rows. */
inline std::vector<RepF> irreducible_reps(const FiniteGroup& G, const CharTable& T) {
  i64 ell = T.ell;
  int n = G.order();
  // left regular representation as permutations: g sends basis vector e_h to e_{gh}
  auto apply_reg = [&](int g, const MatF& B) {
    MatF out(ell, B.r, B.c);
    for (int a = 0; a < n; ++a) {
      int ga = G.op(g, a);
      for (int j = 0; j < B.c; ++j) out.at(ga, j) = B.at(a, j);
    }
    return out;
  };
  std::vector<RepF> reps;
  for (size_t row = 0; row < T.chi.size(); ++row) {
    i64 d = T.dims[row];
    // central idempotent: E_{ab} = (d/|G|) chi(b a^{-1})
    i64 scale = mulmod(d % ell, invmod(i64(n) % ell, ell), ell);
    MatF E(ell, n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        E.at(a, b) = mulmod(scale, T.value(int(row), G.op(b, G.inv(a))), ell);
    // basis of the isotypic component, which has dimension d^2
    MatF Ered = E;
    std::vector<int> epiv = Ered.rref();
    if (i64(epiv.size()) != d * d)
      throw domain_error("irreducible_reps: isotypic component has wrong dimension");
    MatF B(ell, n, int(d * d));
    for (size_t j = 0; j < epiv.size(); ++j)
      for (int a = 0; a < n; ++a) B.at(a, int(j)) = E.at(a, epiv[j]);
    // grow the cyclic span of a vector under the regular action, giving up
    // once it exceeds the target dimension
    auto cyclic_span = [&](const MatF& v) {
      MatF S = v;
      bool grew = true;
      while (grew && S.c <= int(d)) {
        grew = false;
        for (int g = 1; g < n && S.c <= int(d); ++g) {
          MatF w = apply_reg(g, S);
          for (int j = 0; j < w.c; ++j) {
            MatF cand(ell, n, S.c + 1);
            for (int a = 0; a < n; ++a) {
              for (int t = 0; t < S.c; ++t) cand.at(a, t) = S.at(a, t);
              cand.at(a, S.c) = w.at(a, j);
            }
            if (cand.rank() == S.c + 1) {
              S = cand;
              grew = true;
              if (S.c > int(d)) break;
            }
          }
        }
      }
      return S;
    };
    // Left convolution by an element of the component acts on the component
    // as (block of v) tensor identity.  An eigenvalue whose eigenspace has
    // dimension exactly d forces the eigenvectors to have block rank one, so
    // their cyclic spans are minimal invariant subspaces.
    u64 lcg = 0x9e3779b97f4a7c15ull + u64(row);
    auto next_rand = [&lcg]() {
      lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
      return i64(lcg >> 33);
    };
    MatF best;
    for (int attempt = 0; attempt < 64 && best.c != int(d); ++attempt) {
      MatF x(ell, n, 1);
      for (int a = 0; a < n; ++a) x.at(a, 0) = next_rand() % ell;
      MatF v = E * x;
      MatF VB(ell, n, B.c);  // columnwise convolution v * B
      for (int h = 0; h < n; ++h) {
        if (v.at(h, 0) == 0) continue;
        MatF hB = apply_reg(h, B);
        for (int a = 0; a < n; ++a)
          for (int j = 0; j < B.c; ++j)
            VB.at(a, j) = (VB.at(a, j) + mulmod(v.at(h, 0), hB.at(a, j), ell)) % ell;
      }
      MatF L = MatF::solve(B, VB);
      std::vector<i64> cp = L.charpoly();
      for (i64 lam = 0; lam < ell && best.c != int(d); ++lam) {
        i64 val = 0;
        for (size_t k = cp.size(); k-- > 0;) val = (mulmod(val, lam, ell) + cp[k]) % ell;
        if (val != 0) continue;
        MatF shifted = L;
        for (int i = 0; i < L.r; ++i)
          shifted.at(i, i) = ((shifted.at(i, i) - lam) % ell + ell) % ell;
        MatF K = shifted.nullspace();
        if (K.c != int(d)) continue;
        MatF k0(ell, K.r, 1);
        for (int i = 0; i < K.r; ++i) k0.at(i, 0) = K.at(i, 0);
        MatF span = cyclic_span(B * k0);
        if (span.c == int(d)) best = span;
      }
    }
    if (best.c != int(d)) throw domain_error("irreducible_reps: minimal subspace not found");
    RepF rep;
    rep.ell = ell;
    rep.dim = int(d);
    rep.mats.reserve(size_t(n));
    for (int g = 0; g < n; ++g) rep.mats.push_back(MatF::solve(best, apply_reg(g, best)));
    // certification: homomorphism property and character match
    for (int g = 0; g < n; ++g) {
      if (!(rep.mats[size_t(g)].trace() == T.value(int(row), g)))
        throw domain_error("irreducible_reps: character mismatch");
      for (int h = 0; h < n; ++h)
        if (!(rep.mats[size_t(g)] * rep.mats[size_t(h)] == rep.mats[size_t(G.op(g, h))]))
          throw domain_error("irreducible_reps: not a homomorphism");
    }
    reps.push_back(std::move(rep));
  }
  return reps;
}

}  // namespace llpack
