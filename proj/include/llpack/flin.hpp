#pragma once

/**
 * Dense linear algebra over a prime field F_ell (ell a runtime prime).
 *
 * Everything the representation-theoretic layers need: row reduction,
 * nullspaces, solving, determinants, Kronecker products, and the Berkowitz
 * characteristic polynomial (division-free, so the same code serves rings
 * with zero divisors elsewhere).  Polynomial root finding is an exhaustive
 * scan: the moduli in play are small primes chosen by the caller.
 */

#include <vector>

#include "llpack/common.hpp"

namespace llpack {

struct MatF {
  i64 ell = 2;
  int r = 0, c = 0;
  std::vector<i64> d;  // row-major, entries in [0, ell)

  MatF() = default;
  MatF(i64 ell_, int r_, int c_) : ell(ell_), r(r_), c(c_), d(size_t(r_) * size_t(c_), 0) {}

  i64& at(int i, int j) { return d[size_t(i) * size_t(c) + size_t(j)]; }
  i64 at(int i, int j) const { return d[size_t(i) * size_t(c) + size_t(j)]; }

  static MatF identity(i64 ell, int n) {
    MatF m(ell, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  friend MatF operator*(const MatF& a, const MatF& b) {
    if (a.c != b.r || a.ell != b.ell) throw domain_error("MatF: shape mismatch in product");
    MatF m(a.ell, a.r, b.c);
    for (int i = 0; i < a.r; ++i)
      for (int k = 0; k < a.c; ++k) {
        i64 v = a.at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < b.c; ++j)
          m.at(i, j) = (m.at(i, j) + mulmod(v, b.at(k, j), a.ell)) % a.ell;
      }
    return m;
  }
  friend MatF operator+(const MatF& a, const MatF& b) {
    if (a.r != b.r || a.c != b.c || a.ell != b.ell) throw domain_error("MatF: shape mismatch");
    MatF m(a.ell, a.r, a.c);
    for (size_t i = 0; i < m.d.size(); ++i) m.d[i] = (a.d[i] + b.d[i]) % a.ell;
    return m;
  }
  friend MatF operator-(const MatF& a, const MatF& b) {
    if (a.r != b.r || a.c != b.c || a.ell != b.ell) throw domain_error("MatF: shape mismatch");
    MatF m(a.ell, a.r, a.c);
    for (size_t i = 0; i < m.d.size(); ++i) m.d[i] = ((a.d[i] - b.d[i]) % a.ell + a.ell) % a.ell;
    return m;
  }
  friend bool operator==(const MatF& a, const MatF& b) {
    return a.ell == b.ell && a.r == b.r && a.c == b.c && a.d == b.d;
  }

  MatF scaled(i64 s) const {
    MatF m = *this;
    s = ((s % ell) + ell) % ell;
    for (auto& v : m.d) v = mulmod(v, s, ell);
    return m;
  }

  MatF transpose() const {
    MatF m(ell, c, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(j, i) = at(i, j);
    return m;
  }

  i64 trace() const {
    i64 t = 0;
    for (int i = 0; i < std::min(r, c); ++i) t = (t + at(i, i)) % ell;
    return t;
  }

  static MatF kron(const MatF& a, const MatF& b) {
    MatF m(a.ell, a.r * b.r, a.c * b.c);
    for (int i = 0; i < a.r; ++i)
      for (int j = 0; j < a.c; ++j) {
        i64 v = a.at(i, j);
        if (v == 0) continue;
        for (int k = 0; k < b.r; ++k)
          for (int l = 0; l < b.c; ++l)
            m.at(i * b.r + k, j * b.c + l) = mulmod(v, b.at(k, l), a.ell);
      }
    return m;
  }

  /** In-place reduced row echelon form; returns the pivot columns. */
  std::vector<int> rref() {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < c && row < r; ++col) {
      int sel = -1;
      for (int i = row; i < r; ++i)
        if (at(i, col) != 0) {
          sel = i;
          break;
        }
      if (sel < 0) continue;
      for (int j = 0; j < c; ++j) std::swap(at(sel, j), at(row, j));
      i64 inv = invmod(at(row, col), ell);
      for (int j = 0; j < c; ++j) at(row, j) = mulmod(at(row, j), inv, ell);
      for (int i = 0; i < r; ++i) {
        if (i == row || at(i, col) == 0) continue;
        i64 f = at(i, col);
        for (int j = 0; j < c; ++j)
          at(i, j) = ((at(i, j) - mulmod(f, at(row, j), ell)) % ell + ell) % ell;
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  int rank() const {
    MatF m = *this;
    return int(m.rref().size());
  }

  /** Basis of the right nullspace, as columns of the returned matrix. */
  MatF nullspace() const {
    MatF m = *this;
    std::vector<int> pivots = m.rref();
    std::vector<char> is_pivot(size_t(c), 0);
    for (int p : pivots) is_pivot[size_t(p)] = 1;
    int nul = c - int(pivots.size());
    MatF ns(ell, c, nul);
    int col = 0;
    for (int j = 0; j < c; ++j) {
      if (is_pivot[size_t(j)]) continue;
      ns.at(j, col) = 1;
      for (size_t pi = 0; pi < pivots.size(); ++pi)
        ns.at(pivots[pi], col) = ((-m.at(int(pi), j)) % ell + ell) % ell;
      ++col;
    }
    return ns;
  }

  /** Solve A X = B (unique solution required: A has full column rank). */
  static MatF solve(const MatF& A, const MatF& B) {
    if (A.r != B.r) throw domain_error("MatF::solve: shape mismatch");
    MatF aug(A.ell, A.r, A.c + B.c);
    for (int i = 0; i < A.r; ++i) {
      for (int j = 0; j < A.c; ++j) aug.at(i, j) = A.at(i, j);
      for (int j = 0; j < B.c; ++j) aug.at(i, A.c + j) = B.at(i, j);
    }
    std::vector<int> pivots = aug.rref();
    if (int(pivots.size()) > A.c || (!pivots.empty() && pivots.back() >= A.c))
      throw domain_error("MatF::solve: inconsistent system");
    if (int(pivots.size()) != A.c) throw domain_error("MatF::solve: solution not unique");
    MatF X(A.ell, A.c, B.c);
    for (int i = 0; i < A.c; ++i)
      for (int j = 0; j < B.c; ++j) X.at(i, j) = aug.at(i, A.c + j);
    return X;
  }

  MatF inverse() const {
    if (r != c) throw domain_error("MatF::inverse: not square");
    return solve(*this, identity(ell, r));
  }

  /** Characteristic polynomial by the Berkowitz method (monic, ascending). */
  std::vector<i64> charpoly() const {
    if (r != c) throw domain_error("MatF::charpoly: not square");
    int n = r;
    // iteratively build via Toeplitz products; result has degree n
    // descending coefficients, seeded with the empty matrix's polynomial 1
    std::vector<i64> cur{1};
    for (int k = 1; k <= n; ++k) {
      // principal k x k submatrix split:
      //   M = [ A  R ]   A is (k-1)x(k-1), R column, S row, d scalar
      //       [ S  d ]
      i64 dd = at(k - 1, k - 1);
      // compute S A^j R for j = 0..k-2
      std::vector<i64> sar(size_t(k), 0);
      {
        // v = R
        std::vector<i64> v(size_t(k - 1));
        for (int i = 0; i < k - 1; ++i) v[size_t(i)] = at(i, k - 1);
        for (int j = 0; j <= k - 2; ++j) {
          i64 acc = 0;
          for (int i = 0; i < k - 1; ++i)
            acc = (acc + mulmod(at(k - 1, i), v[size_t(i)], ell)) % ell;
          sar[size_t(j)] = acc;
          if (j < k - 2) {
            std::vector<i64> w(size_t(k - 1), 0);
            for (int i = 0; i < k - 1; ++i) {
              if (v[size_t(i)] == 0) continue;
              for (int t = 0; t < k - 1; ++t)
                w[size_t(t)] = (w[size_t(t)] + mulmod(at(t, i), v[size_t(i)], ell)) % ell;
            }
            v = w;
          }
        }
      }
      // Toeplitz column: [1, -d, -SR, -SAR, ...]
      std::vector<i64> col(size_t(k + 1));
      col[0] = 1;
      col[1] = ((-dd) % ell + ell) % ell;
      for (int j = 2; j <= k; ++j) col[size_t(j)] = ((-sar[size_t(j - 2)]) % ell + ell) % ell;
      // next = Toeplitz(col) * cur
      std::vector<i64> next(size_t(k + 1), 0);
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j < int(cur.size()); ++j) {
          if (i - j < 0 || i - j > k) continue;
          next[size_t(i)] = (next[size_t(i)] + mulmod(col[size_t(i - j)], cur[size_t(j)], ell)) % ell;
        }
      cur = next;
    }
    // cur holds coefficients with cur[0] the leading one (descending);
    // convert to ascending
    std::vector<i64> out(cur.rbegin(), cur.rend());
    return out;
  }

  i64 det() const {
    std::vector<i64> cp = charpoly();
    i64 c0 = cp[0];  // charpoly(0) = det(-M) = (-1)^n det M
    if (r % 2 == 1) c0 = ((-c0) % ell + ell) % ell;
    return c0;
  }
};

/** Horner evaluation of an ascending-coefficient polynomial at x in F_ell. */
inline i64 poly_eval(const std::vector<i64>& poly, i64 x, i64 ell) {
  i64 acc = 0;
  for (size_t k = poly.size(); k-- > 0;) acc = (mulmod(acc, x, ell) + poly[k]) % ell;
  return acc;
}

/** All roots in F_ell by exhaustive scan (with multiplicity collapsed). */
inline std::vector<i64> poly_roots(const std::vector<i64>& poly, i64 ell) {
  std::vector<i64> roots;
  for (i64 x = 0; x < ell; ++x)
    if (poly_eval(poly, x, ell) == 0) roots.push_back(x);
  return roots;
}

}  // namespace llpack
