#pragma once

/** Exact matrix decompositions over truncated local rings, double-coset
 *  labels at unit level r, Hecke convolution by coset counting, and the
 *  transport of all of it across a precision witness between two fields
 *  whose integer quotients agree at level l.
 *
 *  A matrix over the fraction field is held as a valuation window: g =
 *  pi^vmin * M with M over o/p^width.  Every pivoting step below multiplies
 *  by exactly representable ring elements, so each factorization recomposes
 *  digit-for-digit inside the window; when the window is too narrow the
 *  routines throw precision_error carrying a width that suffices.
 */

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "llpack/common.hpp"
#include "llpack/cyclic_algebra.hpp"
#include "llpack/parameters.hpp"
#include "llpack/ring_iso.hpp"
#include "llpack/truncated_ring.hpp"
#include "llpack/weil_model.hpp"

namespace llpack {

// ---------------------------------------------------------------------------
// digit surgery on single ring elements

/** x / pi^k, exact; requires valuation(x) >= k. */
inline RElem shift_down(const RElem& x, int k) {
  if (k == 0) return x;
  if (k < 0) throw domain_error("shift_down: negative shift");
  std::vector<int> ds = x.digits();
  for (int i = 0; i < k && i < int(ds.size()); ++i)
    if (ds[size_t(i)] != 0) throw domain_error("shift_down: valuation below shift");
  ds.erase(ds.begin(), ds.begin() + std::min<size_t>(size_t(k), ds.size()));
  ds.resize(size_t(x.ring()->l()), 0);
  return RElem::from_digits(x.ring(), ds);
}

/** floor(x / pi^k): the digits at positions >= k, shifted down by k. */
inline RElem high_digits(const RElem& x, int k) {
  if (k < 0) throw domain_error("high_digits: negative shift");
  std::vector<int> ds = x.digits();
  ds.erase(ds.begin(), ds.begin() + std::min<size_t>(size_t(k), ds.size()));
  ds.resize(size_t(x.ring()->l()), 0);
  return RElem::from_digits(x.ring(), ds);
}

/** x mod pi^k: the digits at positions < k. */
inline RElem low_digits(const RElem& x, int k) {
  std::vector<int> ds = x.digits();
  for (size_t i = size_t(std::max(k, 0)); i < ds.size(); ++i) ds[i] = 0;
  return RElem::from_digits(x.ring(), ds);
}

/** Zero-extend the digits of x into a wider ring over the same field. */
inline RElem widen(const RElem& x, const RingPtr& wide) {
  if (wide->l() < x.ring()->l()) throw domain_error("widen: target is coarser");
  std::vector<int> ds = x.digits();
  ds.resize(size_t(wide->l()), 0);
  return RElem::from_digits(wide, ds);
}

// ---------------------------------------------------------------------------
// square matrices over one truncated ring

using RMat = std::vector<std::vector<RElem>>;

inline RMat rmat_identity(const RingPtr& R, int m) {
  RMat a(size_t(m), std::vector<RElem>(size_t(m), RElem::zero(R)));
  for (int i = 0; i < m; ++i) a[size_t(i)][size_t(i)] = RElem::one(R);
  return a;
}

inline RMat rmat_mul(const RMat& A, const RMat& B) {
  int m = int(A.size());
  if (int(B.size()) != m) throw domain_error("rmat_mul: size mismatch");
  RingPtr R = A[0][0].ring();
  RMat C(size_t(m), std::vector<RElem>(size_t(m), RElem::zero(R)));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      if (A[size_t(i)][size_t(k)].is_zero()) continue;
      for (int j = 0; j < m; ++j)
        C[size_t(i)][size_t(j)] =
            C[size_t(i)][size_t(j)] + A[size_t(i)][size_t(k)] * B[size_t(k)][size_t(j)];
    }
  return C;
}

inline bool rmat_eq(const RMat& A, const RMat& B) {
  if (A.size() != B.size()) return false;
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A.size(); ++j)
      if (!(A[i][j] == B[i][j])) return false;
  return true;
}

inline RMat rmat_reduce(const RMat& A, const RingPtr& low) {
  RMat B = A;
  for (auto& row : B)
    for (auto& x : row) x = reduce_precision(x, low);
  return B;
}

inline RMat rmat_widen(const RMat& A, const RingPtr& wide) {
  RMat B = A;
  for (auto& row : B)
    for (auto& x : row) x = widen(x, wide);
  return B;
}

inline std::string rmat_key(const RMat& A) {
  std::ostringstream os;
  for (auto& row : A)
    for (auto& x : row) os << x.key() << ";";
  return os.str();
}

/** Inverse of a matrix invertible over the ring (unit determinant), by
 *  Gauss-Jordan elimination on unit pivots. */
inline RMat rmat_inverse(const RingPtr& R, RMat A) {
  int m = int(A.size());
  RMat inv = rmat_identity(R, m);
  for (int c = 0; c < m; ++c) {
    int pr = -1;
    for (int i = c; i < m; ++i)
      if (A[size_t(i)][size_t(c)].is_unit()) {
        pr = i;
        break;
      }
    if (pr < 0) throw domain_error("rmat_inverse: matrix is not invertible over the ring");
    std::swap(A[size_t(pr)], A[size_t(c)]);
    std::swap(inv[size_t(pr)], inv[size_t(c)]);
    RElem s = A[size_t(c)][size_t(c)].inv();
    for (int j = 0; j < m; ++j) {
      A[size_t(c)][size_t(j)] = A[size_t(c)][size_t(j)] * s;
      inv[size_t(c)][size_t(j)] = inv[size_t(c)][size_t(j)] * s;
    }
    for (int i = 0; i < m; ++i) {
      if (i == c || A[size_t(i)][size_t(c)].is_zero()) continue;
      RElem f = A[size_t(i)][size_t(c)];
      for (int j = 0; j < m; ++j) {
        A[size_t(i)][size_t(j)] = A[size_t(i)][size_t(j)] - f * A[size_t(c)][size_t(j)];
        inv[size_t(i)][size_t(j)] = inv[size_t(i)][size_t(j)] - f * inv[size_t(c)][size_t(j)];
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// matrices over the fraction field, held at a valuation window

struct FMatrix {
  RingPtr R;     // ring at the working width
  int vmin = 0;  // the true matrix is pi^vmin times the mantissa
  RMat a;        // mantissa, entries in o/p^width

  int n() const { return int(a.size()); }
};

inline FMatrix fmatrix(const RingPtr& R, int vmin, RMat entries) {
  size_t m = entries.size();
  for (auto& row : entries)
    if (row.size() != m) throw domain_error("fmatrix: not square");
  return FMatrix{R, vmin, std::move(entries)};
}

inline FMatrix fm_identity(const RingPtr& R, int m) { return FMatrix{R, 0, rmat_identity(R, m)}; }

inline FMatrix fm_mul(const FMatrix& x, const FMatrix& y) {
  return FMatrix{x.R, x.vmin + y.vmin, rmat_mul(x.a, y.a)};
}

/** Equality of the represented matrices on the window both sides know. */
inline bool fm_equal(const FMatrix& x, const FMatrix& y) {
  if (x.n() != y.n()) return false;
  int shift = y.vmin - x.vmin;
  const FMatrix *lo = &x, *hi = &y;
  if (shift < 0) {
    std::swap(lo, hi);
    shift = -shift;
  }
  RElem pk = RElem::uniformizer(lo->R).pow(shift);
  for (int i = 0; i < x.n(); ++i)
    for (int j = 0; j < x.n(); ++j)
      if (!(lo->a[size_t(i)][size_t(j)] == hi->a[size_t(i)][size_t(j)] * pk)) return false;
  return true;
}

/** Valuation of det(g), or nullopt when the determinant vanishes at the
 *  window. */
inline std::optional<int> fm_det_valuation(const FMatrix& g) {
  RElem d = ring_det(g.a, g.R);
  auto v = d.valuation();
  if (!v.has_value()) return std::nullopt;
  return *v + g.n() * g.vmin;
}

// ---------------------------------------------------------------------------
// column Hermite form: the common core of the Iwasawa decomposition and the
// left-coset labels

namespace detail_cf {

inline int val_or_width(const RElem& x) {
  auto v = x.valuation();
  return v.has_value() ? *v : x.ring()->l();
}

struct ColumnHNF {
  RMat t;              // upper triangular, diagonal pi^{b_i}, upper entries reduced mod pi^{b_i}
  std::vector<int> b;  // diagonal exponents, per row
  RMat ops;            // accumulated column operations: mantissa * ops == t
};

/** Reduce M by right multiplication with GL_m(o) into upper triangular form
 *  with pure uniformizer powers on the diagonal and row-i entries reduced mod
 *  pi^{b_i}.  All operations are exact at the window. */
inline ColumnHNF column_hnf(const RingPtr& R, RMat M) {
  int m = int(M.size());
  int width = R->l();
  RMat A = rmat_identity(R, m);
  std::vector<int> b(size_t(m), 0);
  RElem pi = RElem::uniformizer(R);
  auto col_axpy = [&](RMat& X, int dst, int src, const RElem& c) {
    for (int i = 0; i < m; ++i)
      X[size_t(i)][size_t(dst)] = X[size_t(i)][size_t(dst)] - c * X[size_t(i)][size_t(src)];
  };
  auto col_swap = [&](RMat& X, int i, int j) {
    for (int t = 0; t < m; ++t) std::swap(X[size_t(t)][size_t(i)], X[size_t(t)][size_t(j)]);
  };
  auto col_scale = [&](RMat& X, int j, const RElem& s) {
    for (int i = 0; i < m; ++i) X[size_t(i)][size_t(j)] = X[size_t(i)][size_t(j)] * s;
  };
  for (int i = m - 1; i >= 0; --i) {
    int bestj = -1, bestv = width;
    for (int j = 0; j <= i; ++j) {
      int v = val_or_width(M[size_t(i)][size_t(j)]);
      if (v < bestv) {
        bestv = v;
        bestj = j;
      }
    }
    if (bestj < 0)
      throw precision_error("column reduction: a row vanishes at this window", width + 1);
    if (bestj != i) {
      col_swap(M, bestj, i);
      col_swap(A, bestj, i);
    }
    b[size_t(i)] = bestv;
    RElem u = high_digits(M[size_t(i)][size_t(i)], bestv).inv();
    col_scale(M, i, u);
    col_scale(A, i, u);
    M[size_t(i)][size_t(i)] = pi.pow(bestv);  // exact: the scaled pivot is this power
    for (int j = 0; j < i; ++j) {
      RElem c = shift_down(M[size_t(i)][size_t(j)], bestv);
      col_axpy(M, j, i, c);
      col_axpy(A, j, i, c);
      M[size_t(i)][size_t(j)] = RElem::zero(R);
    }
  }
  // reduce the strictly upper entries mod the diagonal below them
  for (int j = 1; j < m; ++j)
    for (int i = j - 1; i >= 0; --i) {
      RElem c = high_digits(M[size_t(i)][size_t(j)], b[size_t(i)]);
      if (c.is_zero()) continue;
      col_axpy(M, j, i, c);
      col_axpy(A, j, i, c);
      M[size_t(i)][size_t(j)] = low_digits(M[size_t(i)][size_t(j)], b[size_t(i)]);
    }
  return ColumnHNF{std::move(M), std::move(b), std::move(A)};
}

}  // namespace detail_cf

// ---------------------------------------------------------------------------
// Cartan decomposition

struct CartanDecomposition {
  RMat k_left;         // in GL_m(o)
  std::vector<int> a;  // nondecreasing diagonal exponents
  RMat k_right;        // in GL_m(o)
};

/** g = k_left * diag(pi^{a_i}) * k_right with a nondecreasing, by Smith
 *  reduction pivoting on a minimal-valuation entry.  The window must satisfy
 *  width > 2*max|a_i| + r so that level-r unit coordinates of the factors are
 *  trustworthy; violations throw precision_error with a sufficient width. */
inline CartanDecomposition cartan_decompose(const FMatrix& g, int r = 0) {
  int m = g.n();
  if (m < 1) throw domain_error("cartan_decompose: empty matrix");
  const RingPtr& R = g.R;
  int width = R->l();
  RMat M = g.a;
  RMat KL = rmat_identity(R, m), KR = rmat_identity(R, m);
  RElem pi = RElem::uniformizer(R);
  for (int i = 0; i < m; ++i) {
    int bp = -1, bq = -1, bv = width;
    for (int p = i; p < m; ++p)
      for (int q = i; q < m; ++q) {
        int v = detail_cf::val_or_width(M[size_t(p)][size_t(q)]);
        if (v < bv) {
          bv = v;
          bp = p;
          bq = q;
        }
      }
    if (bp < 0)
      throw precision_error("cartan_decompose: remaining block vanishes at this window",
                            width + 1);
    if (bp != i) {
      std::swap(M[size_t(bp)], M[size_t(i)]);
      for (int t = 0; t < m; ++t)
        std::swap(KL[size_t(t)][size_t(bp)], KL[size_t(t)][size_t(i)]);
    }
    if (bq != i) {
      for (int t = 0; t < m; ++t) std::swap(M[size_t(t)][size_t(bq)], M[size_t(t)][size_t(i)]);
      std::swap(KR[size_t(bq)], KR[size_t(i)]);
    }
    RElem u = high_digits(M[size_t(i)][size_t(i)], bv);
    RElem ui = u.inv();
    for (int j = 0; j < m; ++j) {
      M[size_t(i)][size_t(j)] = M[size_t(i)][size_t(j)] * ui;  // scale row i
      KL[size_t(j)][size_t(i)] = KL[size_t(j)][size_t(i)] * u;  // absorb into k_left
    }
    M[size_t(i)][size_t(i)] = pi.pow(bv);
    for (int t = i + 1; t < m; ++t) {  // clear column i below the pivot
      RElem c = shift_down(M[size_t(t)][size_t(i)], bv);
      if (c.is_zero()) continue;
      for (int j = 0; j < m; ++j)
        M[size_t(t)][size_t(j)] = M[size_t(t)][size_t(j)] - c * M[size_t(i)][size_t(j)];
      for (int j = 0; j < m; ++j)
        KL[size_t(j)][size_t(i)] = KL[size_t(j)][size_t(i)] + c * KL[size_t(j)][size_t(t)];
      M[size_t(t)][size_t(i)] = RElem::zero(R);
    }
    for (int t = i + 1; t < m; ++t) {  // clear row i rightward
      RElem c = shift_down(M[size_t(i)][size_t(t)], bv);
      if (c.is_zero()) continue;
      for (int j = 0; j < m; ++j)
        M[size_t(j)][size_t(t)] = M[size_t(j)][size_t(t)] - c * M[size_t(j)][size_t(i)];
      for (int j = 0; j < m; ++j)
        KR[size_t(i)][size_t(j)] = KR[size_t(i)][size_t(j)] + c * KR[size_t(t)][size_t(j)];
      M[size_t(i)][size_t(t)] = RElem::zero(R);
    }
  }
  std::vector<int> a(size_t(m), 0);
  int amax = 0;
  for (int i = 0; i < m; ++i) {
    a[size_t(i)] = detail_cf::val_or_width(M[size_t(i)][size_t(i)]) + g.vmin;
    amax = std::max(amax, std::abs(a[size_t(i)]));
  }
  if (width <= 2 * amax + r)
    throw precision_error("cartan_decompose: window too narrow for these exponents",
                          2 * amax + r + 1);
  RMat D = rmat_identity(R, m);
  for (int i = 0; i < m; ++i) D[size_t(i)][size_t(i)] = pi.pow(a[size_t(i)] - g.vmin);
  if (!rmat_eq(rmat_mul(rmat_mul(KL, D), KR), g.a))
    throw std::logic_error("cartan_decompose: recomposition drifted");
  return CartanDecomposition{std::move(KL), std::move(a), std::move(KR)};
}

// ---------------------------------------------------------------------------
// Iwasawa decomposition

struct IwasawaDecomposition {
  FMatrix u;           // upper unitriangular over the fraction field
  std::vector<int> a;  // per-row diagonal exponents (unsorted; unique for gK_0)
  RMat k;              // in GL_m(o)
};

/** g = u * diag(pi^{a_i}) * k with u upper unitriangular and k integral:
 *  bottom-up column reduction; the exponent vector a depends only on the
 *  coset g*GL_m(o). */
inline IwasawaDecomposition iwasawa_decompose(const FMatrix& g) {
  int m = g.n();
  if (m < 1) throw domain_error("iwasawa_decompose: empty matrix");
  const RingPtr& R = g.R;
  detail_cf::ColumnHNF h = detail_cf::column_hnf(R, g.a);
  RMat k = rmat_inverse(R, h.ops);
  if (!rmat_eq(rmat_mul(h.t, k), g.a))
    throw std::logic_error("iwasawa_decompose: recomposition drifted");
  int bmax = *std::max_element(h.b.begin(), h.b.end());
  RElem pi = RElem::uniformizer(R);
  RMat um(size_t(m), std::vector<RElem>(size_t(m), RElem::zero(R)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      um[size_t(i)][size_t(j)] = h.t[size_t(i)][size_t(j)] * pi.pow(bmax - h.b[size_t(j)]);
  std::vector<int> a(size_t(m), 0);
  for (int i = 0; i < m; ++i) a[size_t(i)] = h.b[size_t(i)] + g.vmin;
  return IwasawaDecomposition{FMatrix{R, -bmax, std::move(um)}, std::move(a), std::move(k)};
}

// ---------------------------------------------------------------------------
// left cosets of the level-r congruence subgroup

/** Canonical key of the coset w*K_r, K_r = 1 + p^r M_m(o): the column
 *  Hermite form of w (window independent, written in true valuations)
 *  together with the GL_m(o)-coordinate mod p^r.  Throws precision_error
 *  when the window cannot certify the key. */
inline std::string left_coset_key(const FMatrix& w, const RingPtr& Rr) {
  const RingPtr& R = w.R;
  int width = R->l();
  int r = Rr->l();
  detail_cf::ColumnHNF h = detail_cf::column_hnf(R, w.a);
  int bmax = *std::max_element(h.b.begin(), h.b.end());
  if (width < 2 * bmax + r)
    throw precision_error("left_coset_key: window too narrow for this coset", 2 * bmax + r);
  std::ostringstream os;
  os << "D:";
  for (size_t i = 0; i < h.b.size(); ++i) os << (h.b[i] + w.vmin) << ",";
  os << "|T:";
  for (int i = 0; i < w.n(); ++i)
    for (int j = i + 1; j < w.n(); ++j) {
      std::vector<int> ds = h.t[size_t(i)][size_t(j)].digits();
      for (int p = 0; p < h.b[size_t(i)]; ++p)
        if (ds[size_t(p)] != 0) os << i << "." << j << "." << (p + w.vmin) << "." << ds[size_t(p)] << ",";
    }
  os << "|K:" << rmat_key(rmat_reduce(rmat_inverse(R, h.ops), Rr));
  return os.str();
}

// ---------------------------------------------------------------------------
// double cosets K_r \ K_0 diag(pi^a) K_0 / K_r

struct DoubleCosetLabel {
  std::vector<int> a;  // nondecreasing Cartan exponents
  RMat left_unit;      // canonical unit coordinates over the level ring
  RMat right_unit;
  int level = 1;

  int m() const { return int(a.size()); }
  std::string key() const {
    std::ostringstream os;
    os << "a:";
    for (int ai : a) os << ai << ",";
    os << "|L:" << rmat_key(left_unit) << "|R:" << rmat_key(right_unit);
    return os.str();
  }
  bool operator==(const DoubleCosetLabel& o) const { return key() == o.key(); }
  bool operator!=(const DoubleCosetLabel& o) const { return !(*this == o); }
};

/** Canonicalize the unit-coordinate pair of a double coset: walk the orbit of
 *  (U, V) under the stabilizer of diag(pi^a) acting by (U s, (a^{-1}s a)^{-1} V)
 *  and keep the lexicographically least pair of coordinate keys. */
inline DoubleCosetLabel canonical_pair(const LocalFieldSpec& spec, std::vector<int> a, RMat U,
                                       RMat V, u64 budget = 1000000) {
  int m = int(a.size());
  if (m < 1 || int(U.size()) != m || int(V.size()) != m)
    throw domain_error("canonical_pair: size mismatch");
  for (int i = 0; i + 1 < m; ++i)
    if (a[size_t(i)] > a[size_t(i + 1)])
      throw domain_error("canonical_pair: exponents must be nondecreasing");
  RingPtr Rr = U[0][0].ring();
  int r = Rr->l();
  int spread = a[size_t(m - 1)] - a[0];
  int P = r + spread;
  RingPtr RP = make_ring(spec, P);
  RElem piP = RElem::uniformizer(RP);
  i64 q = Rr->q();
  // image of s in level r together with the inverse of a^{-1} s a
  auto conj_by_a = [&](const RMat& S) {
    RMat C(size_t(m), std::vector<RElem>(size_t(m), RElem::zero(Rr)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        int k = a[size_t(j)] - a[size_t(i)];
        RElem x = S[size_t(i)][size_t(j)];
        C[size_t(i)][size_t(j)] =
            reduce_precision(k >= 0 ? x * piP.pow(k) : shift_down(x, -k), Rr);
      }
    return C;
  };
  struct Gen {
    RMat right;    // s mod p^r
    RMat leftinv;  // (a^{-1} s a)^{-1} mod p^r
  };
  std::vector<Gen> gens;
  std::map<std::string, bool> gen_seen;
  auto push_gen = [&](const RMat& S) {
    RMat right = rmat_reduce(S, Rr);
    RMat leftinv = rmat_inverse(Rr, conj_by_a(S));
    std::string k = rmat_key(right) + "#" + rmat_key(leftinv);
    if (gen_seen.emplace(k, true).second) gens.push_back(Gen{std::move(right), std::move(leftinv)});
  };
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) {
      int lo = std::max(0, a[size_t(s)] - a[size_t(t)]);
      for (int d = lo; d < P; ++d) {
        if (s == t && d == 0) continue;
        for (i64 cidx = 1; cidx < q; ++cidx) {
          RElem c = RElem::from_residue(RP, int(cidx));
          if (c.is_zero()) continue;
          RMat S = rmat_identity(RP, m);
          S[size_t(s)][size_t(t)] = S[size_t(s)][size_t(t)] + c * piP.pow(d);
          push_gen(S);
        }
      }
    }
  for (int s = 0; s < m; ++s)
    for (i64 cidx = 1; cidx < q; ++cidx) {
      RElem c = RElem::from_residue(RP, int(cidx));
      if (!c.is_unit() || c == RElem::one(RP)) continue;
      RMat S = rmat_identity(RP, m);
      S[size_t(s)][size_t(s)] = c;
      push_gen(S);
    }
  auto pair_key = [](const RMat& X, const RMat& Y) { return rmat_key(X) + "#" + rmat_key(Y); };
  std::map<std::string, std::pair<RMat, RMat>> seen;
  std::deque<const std::pair<RMat, RMat>*> queue;
  std::string start = pair_key(U, V);
  auto it0 = seen.emplace(start, std::make_pair(std::move(U), std::move(V))).first;
  queue.push_back(&it0->second);
  std::string best = start;
  while (!queue.empty()) {
    const auto* cur = queue.front();
    queue.pop_front();
    for (const Gen& g : gens) {
      RMat NU = rmat_mul(cur->first, g.right);
      RMat NV = rmat_mul(g.leftinv, cur->second);
      std::string k = pair_key(NU, NV);
      auto ins = seen.emplace(k, std::make_pair(std::move(NU), std::move(NV)));
      if (ins.second) {
        if (seen.size() > budget)
          throw budget_error("canonical_pair: orbit exceeds the budget", budget);
        queue.push_back(&ins.first->second);
        if (k < best) best = k;
      }
    }
  }
  const auto& win = seen.at(best);
  return DoubleCosetLabel{std::move(a), win.first, win.second, r};
}

/** Label of the double coset K_r g K_r. */
inline DoubleCosetLabel double_coset_label(const FMatrix& g, int r, u64 budget = 1000000) {
  if (r < 1) throw domain_error("double_coset_label: level must be at least 1");
  CartanDecomposition c = cartan_decompose(g, r);
  RingPtr Rr = make_ring(g.R->spec(), r);
  return canonical_pair(g.R->spec(), c.a, rmat_reduce(c.k_left, Rr),
                        rmat_reduce(c.k_right, Rr), budget);
}

/** A matrix in the labeled double coset, at the window of Rw. */
inline FMatrix coset_representative(const DoubleCosetLabel& L, const RingPtr& Rw) {
  int m = L.m();
  int vmin = std::min(L.a[0], 0);
  RMat D = rmat_identity(Rw, m);
  RElem pi = RElem::uniformizer(Rw);
  for (int i = 0; i < m; ++i) D[size_t(i)][size_t(i)] = pi.pow(L.a[size_t(i)] - vmin);
  RMat M = rmat_mul(rmat_mul(rmat_widen(L.left_unit, Rw), D), rmat_widen(L.right_unit, Rw));
  return FMatrix{Rw, vmin, std::move(M)};
}

// ---------------------------------------------------------------------------
// Hecke elements at level r

struct HeckeElement {
  int m = 1;
  int level = 1;
  std::map<std::string, std::pair<DoubleCosetLabel, Rat>> terms;

  void add(const DoubleCosetLabel& L, const Rat& c) {
    if (c == Rat(0)) return;
    auto it = terms.find(L.key());
    if (it == terms.end()) {
      terms.emplace(L.key(), std::make_pair(L, c));
    } else {
      it->second.second += c;
      if (it->second.second == Rat(0)) terms.erase(it);
    }
  }
  bool operator==(const HeckeElement& o) const {
    if (m != o.m || level != o.level || terms.size() != o.terms.size()) return false;
    for (const auto& [k, v] : terms) {
      auto it = o.terms.find(k);
      if (it == o.terms.end() || it->second.second != v.second) return false;
    }
    return true;
  }
  bool operator!=(const HeckeElement& o) const { return !(*this == o); }
  /** Largest |a_i| over the support. */
  int support_bound() const {
    int s = 0;
    for (const auto& [k, v] : terms)
      for (int ai : v.first.a) s = std::max(s, std::abs(ai));
    return s;
  }
};

inline HeckeElement hecke_indicator(const DoubleCosetLabel& L) {
  HeckeElement f{L.m(), L.level, {}};
  f.add(L, Rat(1));
  return f;
}

/** The unit: the indicator of K_r itself. */
inline HeckeElement hecke_unit(const LocalFieldSpec& spec, int m, int r) {
  RingPtr Rr = make_ring(spec, r);
  return hecke_indicator(canonical_pair(spec, std::vector<int>(size_t(m), 0),
                                        rmat_identity(Rr, m), rmat_identity(Rr, m)));
}

/** Representatives of the left cosets x K_r inside K_r g K_r, found by
 *  closing the labeled representative under left multiplication by
 *  congruence generators; deterministic (sorted by coset key). */
inline std::vector<FMatrix> left_coset_reps(const DoubleCosetLabel& L,
                                            const LocalFieldSpec& spec, const RingPtr& Rw,
                                            u64 budget = 1000000) {
  int m = L.m();
  int r = L.level;
  RingPtr Rr = make_ring(spec, r);
  int spread = L.a[size_t(m - 1)] - L.a[0];
  RElem pi = RElem::uniformizer(Rw);
  i64 q = Rw->q();
  std::vector<FMatrix> kappas;
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t)
      for (int d = r; d < r + spread + 1; ++d)
        for (i64 cidx = 1; cidx < q; ++cidx) {
          RElem c = RElem::from_residue(Rw, int(cidx));
          if (c.is_zero()) continue;
          RMat K = rmat_identity(Rw, m);
          K[size_t(s)][size_t(t)] = K[size_t(s)][size_t(t)] + c * pi.pow(d);
          kappas.push_back(FMatrix{Rw, 0, std::move(K)});
        }
  FMatrix x0 = coset_representative(L, Rw);
  std::map<std::string, FMatrix> seen;
  std::deque<const FMatrix*> queue;
  auto it0 = seen.emplace(left_coset_key(x0, Rr), std::move(x0)).first;
  queue.push_back(&it0->second);
  while (!queue.empty()) {
    const FMatrix* cur = queue.front();
    queue.pop_front();
    for (const FMatrix& k : kappas) {
      FMatrix nx = fm_mul(k, *cur);
      std::string key = left_coset_key(nx, Rr);
      auto ins = seen.emplace(key, std::move(nx));
      if (ins.second) {
        if (seen.size() > budget)
          throw budget_error("left_coset_reps: enumeration exceeds the budget", budget);
        queue.push_back(&ins.first->second);
      }
    }
  }
  std::vector<FMatrix> out;
  out.reserve(seen.size());
  for (auto& [k, v] : seen) out.push_back(std::move(v));
  return out;
}

/** Number of left K_r-cosets in the labeled double coset. */
inline u64 left_coset_count(const DoubleCosetLabel& L, const LocalFieldSpec& spec,
                            u64 budget = 1000000) {
  int amax = 0;
  for (int ai : L.a) amax = std::max(amax, std::abs(ai));
  RingPtr Rw = make_ring(spec, 4 * amax + L.level + 2);
  return left_coset_reps(L, spec, Rw, budget).size();
}

/** Exact convolution of two level-r Hecke elements by coset counting: the
 *  structure constant of a product double coset is the number of split-pair
 *  products landing in any one of its left cosets; constancy across the left
 *  cosets is re-verified on every bucket. */
inline HeckeElement hecke_convolve(const HeckeElement& f1, const HeckeElement& f2,
                                   const LocalFieldSpec& spec, u64 budget = 1000000) {
  if (f1.m != f2.m) throw domain_error("hecke_convolve: rank mismatch");
  if (f1.level != f2.level) throw domain_error("hecke_convolve: level mismatch");
  int r = f1.level;
  int amax = f1.support_bound() + f2.support_bound();
  RingPtr Rw = make_ring(spec, 4 * (amax + 1) + r);
  RingPtr Rr = make_ring(spec, r);
  u64 used = 0;
  auto charge = [&](u64 n) {
    used += n;
    if (used > budget) throw budget_error("hecke_convolve: coset budget exhausted", budget);
  };
  std::map<std::string, std::vector<FMatrix>> rep_cache;
  auto reps_of = [&](const DoubleCosetLabel& L) -> const std::vector<FMatrix>& {
    auto it = rep_cache.find(L.key());
    if (it == rep_cache.end()) {
      std::vector<FMatrix> reps = left_coset_reps(L, spec, Rw, budget);
      charge(reps.size());
      it = rep_cache.emplace(L.key(), std::move(reps)).first;
    }
    return it->second;
  };
  HeckeElement out{f1.m, r, {}};
  for (const auto& [xk, xv] : f1.terms)
    for (const auto& [yk, yv] : f2.terms) {
      const auto& LX = reps_of(xv.first);
      const auto& LY = reps_of(yv.first);
      std::map<std::string, std::pair<FMatrix, u64>> hits;
      for (const FMatrix& xi : LX)
        for (const FMatrix& yj : LY) {
          charge(1);
          FMatrix prod = fm_mul(xi, yj);
          std::string key = left_coset_key(prod, Rr);
          auto it = hits.find(key);
          if (it == hits.end())
            hits.emplace(key, std::make_pair(std::move(prod), u64(1)));
          else
            ++it->second.second;
        }
      std::map<std::string, std::pair<DoubleCosetLabel, u64>> buckets;
      for (const auto& [lk, hv] : hits) {
        DoubleCosetLabel Lz = double_coset_label(hv.first, r);
        auto it = buckets.find(Lz.key());
        if (it == buckets.end())
          buckets.emplace(Lz.key(), std::make_pair(Lz, hv.second));
        else if (it->second.second != hv.second)
          throw std::logic_error("hecke_convolve: structure constant varies across cosets");
      }
      for (const auto& [zk, zv] : buckets)
        out.add(zv.first, xv.second * yv.second * Rat(i64(zv.second)));
    }
  return out;
}

/** Sum of coefficient times left-coset count; multiplicative under
 *  convolution, a cheap global consistency check. */
inline Rat hecke_mass(const HeckeElement& f, const LocalFieldSpec& spec, u64 budget = 1000000) {
  Rat s(0);
  for (const auto& [k, v] : f.terms)
    s += v.second * Rat(i64(left_coset_count(v.first, spec, budget)));
  return s;
}

// ---------------------------------------------------------------------------
// transport across a precision witness

/** Ring witness prepared for coset transport.  `adapted` records that the
 *  map carries the declared uniformizer of one side to the declared
 *  uniformizer of the other, the convention every label implicitly uses;
 *  a non-adapted witness is surfaced, never silently substituted. */
struct ZetaWitness {
  RingHom hom;
  bool adapted = false;
};

inline ZetaWitness zeta_witness(const RingPtr& A, const RingPtr& B, u64 budget = 2000000) {
  std::vector<RElem> gens = lifted_roots(B, modulus_poly(A));
  RElem u = RElem::uniformizer(B);
  for (const RElem& g : gens) {
    if (!(eisenstein_defect(A, B, g, u) == RElem::zero(B))) continue;
    RingHom h = make_hom(A, B, g, u);
    if (!verify_hom(h, true).has_value()) return ZetaWitness{h, true};
  }
  CloseCheck cc = closeness_witness(A, B, budget);
  if (!cc.close) throw domain_error("zeta_witness: rings are not close: " + cc.certificate);
  return ZetaWitness{*cc.witness, false};
}

/** Restrict a level-l witness to level r <= l. */
inline RingHom reduce_hom(const RingHom& h, int r) {
  if (h.from->l() < r) throw domain_error("reduce_hom: witness precision below requested level");
  RingPtr A = make_ring(h.from->spec(), r);
  RingPtr B = make_ring(h.to->spec(), r);
  RingHom hr = make_hom(A, B, reduce_precision(h.gen_img, B), reduce_precision(h.unif_img, B));
  if (auto e = verify_hom(hr, true))
    throw domain_error("reduce_hom: reduced map is not an isomorphism: " + *e);
  return hr;
}

/** Invert a bijective witness by finite preimage lookup. */
inline RingHom inverse_hom(const RingHom& h, u64 budget = 2000000) {
  std::vector<RElem> all = RElem::enumerate(h.from, budget);
  std::map<std::string, RElem> pre;
  for (const RElem& x : all) pre.emplace(h.apply(x).key(), x);
  if (pre.size() != all.size()) throw domain_error("inverse_hom: witness is not injective");
  auto find = [&](const RElem& y) {
    auto it = pre.find(y.key());
    if (it == pre.end()) throw domain_error("inverse_hom: witness is not surjective");
    return it->second;
  };
  RingHom inv = make_hom(h.to, h.from, find(RElem::gen(h.to)), find(RElem::uniformizer(h.to)));
  if (auto e = verify_hom(inv, true))
    throw domain_error("inverse_hom: inverse fails verification: " + *e);
  return inv;
}

/** Does reducing after mapping equal mapping after reducing?  The square
 *  that makes level-l and level-r transports consistent. */
inline bool check_hom_reduction(const RingHom& h, const RingHom& hr, u64 budget = 2000000) {
  RingPtr lowA = hr.from, lowB = hr.to;
  for (const RElem& x : RElem::enumerate(h.from, budget))
    if (!(reduce_precision(h.apply(x), lowB) == hr.apply(reduce_precision(x, lowA))))
      return false;
  return true;
}

/** Transport a double-coset label through a level-r witness: exponents are
 *  kept, unit coordinates are mapped entrywise and re-canonicalized on the
 *  far side.  Throws when the witness precision is below the label level. */
inline DoubleCosetLabel zeta_r(const DoubleCosetLabel& L, const RingHom& hom,
                               const LocalFieldSpec& target_spec, u64 budget = 1000000) {
  RingHom h = hom;
  if (hom.from->l() < L.level)
    throw domain_error("zeta_r: witness precision below the coset level");
  if (hom.from->l() > L.level) h = reduce_hom(hom, L.level);
  if (h.from->signature() != L.left_unit[0][0].ring()->signature())
    throw domain_error("zeta_r: witness does not start at the label's ring");
  auto map_mat = [&](const RMat& X) {
    RMat Y = X;
    for (auto& row : Y)
      for (auto& x : row) x = h.apply(x);
    return Y;
  };
  return canonical_pair(target_spec, L.a, map_mat(L.left_unit), map_mat(L.right_unit), budget);
}

/** Transport every term of a Hecke element; coefficients are untouched. */
inline HeckeElement zeta_transport(const HeckeElement& f, const RingHom& hom,
                                   const LocalFieldSpec& target_spec, u64 budget = 1000000) {
  HeckeElement out{f.m, f.level, {}};
  for (const auto& [k, v] : f.terms) {
    DoubleCosetLabel L = zeta_r(v.first, hom, target_spec, budget);
    if (out.terms.count(L.key()))
      throw std::logic_error("zeta_transport: transported labels collided");
    out.add(L, v.second);
  }
  return out;
}

struct ZetaHomReport {
  bool ok = true;
  u64 pairs_checked = 0;
  std::vector<std::string> mismatches;  // offending coset keys with both coefficients
};

/** Verify zeta_r(f1 * f2) == zeta_r(f1) * zeta_r(f2) coefficientwise on the
 *  given pairs, convolving each side in its own exact arithmetic. */
inline ZetaHomReport check_zeta_homomorphism(
    const std::vector<std::pair<HeckeElement, HeckeElement>>& pairs, const LocalFieldSpec& specA,
    const LocalFieldSpec& specB, const RingHom& hom, u64 budget = 1000000) {
  ZetaHomReport rep;
  for (const auto& [fa, fb] : pairs) {
    HeckeElement lhs = zeta_transport(hecke_convolve(fa, fb, specA, budget), hom, specB, budget);
    HeckeElement rhs = hecke_convolve(zeta_transport(fa, hom, specB, budget),
                                      zeta_transport(fb, hom, specB, budget), specB, budget);
    ++rep.pairs_checked;
    if (lhs == rhs) continue;
    rep.ok = false;
    for (const auto& [k, v] : lhs.terms) {
      auto it = rhs.terms.find(k);
      if (it == rhs.terms.end() || it->second.second != v.second) rep.mismatches.push_back(k);
    }
    for (const auto& [k, v] : rhs.terms)
      if (!lhs.terms.count(k)) rep.mismatches.push_back(k);
  }
  return rep;
}

/** Keep the terms whose cosets consist of matrices with determinant in
 *  1 + p^r: exponent sum zero and unit-coordinate determinant one at level
 *  r.  Idempotent, and it commutes with zeta transport. */
inline HeckeElement norm_one_restriction(const HeckeElement& f) {
  HeckeElement out{f.m, f.level, {}};
  for (const auto& [k, v] : f.terms) {
    const DoubleCosetLabel& L = v.first;
    int s = 0;
    for (int ai : L.a) s += ai;
    if (s != 0) continue;
    RingPtr Rr = L.left_unit[0][0].ring();
    RElem det = ring_det(L.left_unit, Rr) * ring_det(L.right_unit, Rr);
    if (!(det == RElem::one(Rr))) continue;
    out.add(L, v.second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// parameter transfer between close fields

/** A parameter remembered together with the field it lives over and the
 *  ramification profile that measures its depth. */
struct FieldTaggedParameter {
  std::string field;
  LanglandsParameter phi;
  RamificationProfile profile;
};

inline Rat depth_of_parameter(const FieldTaggedParameter& P) {
  return P.profile.max_break();
}

/** Re-tag a parameter to the partner of an l-close pair.  Only the finite
 *  level-l quotient of the wild inertia sees the parameter, and the witness
 *  identifies those quotients, so the combinatorial data moves unchanged;
 *  parameters too deep for the shared level are refused. */
inline FieldTaggedParameter transfer_parameter(const FieldTaggedParameter& P, int l,
                                               const std::string& partner_field) {
  if (!factors_through_level(depth_of_parameter(P), l))
    throw domain_error("transfer_parameter: parameter depth reaches beyond the shared level");
  return FieldTaggedParameter{partner_field, P.phi, P.profile};
}

}  // namespace llpack
