#pragma once

/**
 * Arithmetic in the finite field F_q, q = p^f with q <= 64.
 *
 * Elements are packed integers 0..q-1: the element sum d_i x^i is stored as
 * sum d_i p^i (little-endian base-p digits).  The defining polynomial is the
 * lexicographically least monic irreducible of degree f over F_p, where
 * candidates x^f + a_{f-1}x^{f-1} + ... + a_0 are ordered by the integer
 * sum a_i p^i.  This makes every residue-field computation reproducible.
 */

#include <array>
#include <vector>

#include "llpack/common.hpp"

namespace llpack {

namespace detail {

// Dense poly over F_p, little-endian coefficients, no trailing zeros enforced.
using PPoly = std::vector<int>;

inline PPoly ppoly_mod(PPoly a, const PPoly& m, int p) {
  // m monic of degree dm
  int dm = int(m.size()) - 1;
  for (int k = int(a.size()) - 1; k >= dm; --k) {
    int c = a[k] % p;
    if (c == 0) continue;
    for (int i = 0; i <= dm; ++i) {
      int idx = k - dm + i;
      a[idx] = ((a[idx] - c * m[i]) % p + p) % p;
    }
  }
  a.resize(dm);
  return a;
}

inline PPoly ppoly_mul(const PPoly& a, const PPoly& b, int p) {
  PPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = int((c[i + j] + i64(a[i]) * b[j]) % p);
  return c;
}

inline bool ppoly_divides(const PPoly& d, PPoly a, int p) {
  // d monic
  int dd = int(d.size()) - 1;
  for (int k = int(a.size()) - 1; k >= dd; --k) {
    int c = a[k] % p;
    if (c == 0) continue;
    for (int i = 0; i <= dd; ++i) {
      int idx = k - dd + i;
      a[idx] = ((a[idx] - c * d[i]) % p + p) % p;
    }
  }
  for (int v : a)
    if (v % p != 0) return false;
  return true;
}

inline bool ppoly_irreducible(const PPoly& f, int p) {
  int df = int(f.size()) - 1;
  if (df == 1) return true;
  // trial division by all monic polynomials of degree 1..df/2
  for (int dd = 1; dd <= df / 2; ++dd) {
    i64 count = ipow(p, dd);
    for (i64 n = 0; n < count; ++n) {
      PPoly d(dd + 1, 0);
      i64 t = n;
      for (int i = 0; i < dd; ++i) {
        d[i] = int(t % p);
        t /= p;
      }
      d[dd] = 1;
      if (ppoly_divides(d, f, p)) return false;
    }
  }
  return true;
}

}  // namespace detail

/** Least monic irreducible of degree f over F_p; coefficients c_0..c_{f-1} of
 *  x^f + c_{f-1}x^{f-1} + ... + c_0. */
inline std::vector<int> min_irreducible_poly(i64 p, int f) {
  if (!is_prime(p)) throw domain_error("min_irreducible_poly: p not prime");
  if (f < 1) throw domain_error("min_irreducible_poly: f < 1");
  if (f == 1) return {0};  // x itself; unused in degree-1 towers
  i64 q = ipow(p, f);
  for (i64 n = 0; n < q; ++n) {
    detail::PPoly cand(f + 1, 0);
    i64 t = n;
    for (int i = 0; i < f; ++i) {
      cand[i] = int(t % p);
      t /= p;
    }
    cand[f] = 1;
    if (detail::ppoly_irreducible(cand, int(p))) {
      cand.pop_back();
      return std::vector<int>(cand.begin(), cand.end());
    }
  }
  throw domain_error("min_irreducible_poly: none found");
}

class FqField {
 public:
  FqField(i64 p, int f) : p_(p), f_(f) {
    if (!is_prime(p)) throw domain_error("FqField: p not prime");
    if (f < 1) throw domain_error("FqField: f < 1");
    q_ = ipow(p, f);
    if (q_ > 64) throw domain_error("FqField: q > 64 unsupported");
    modulus_ = min_irreducible_poly(p, f);
    mul_.assign(size_t(q_ * q_), 0);
    for (i64 a = 0; a < q_; ++a)
      for (i64 b = 0; b < q_; ++b) mul_[size_t(a * q_ + b)] = mul_slow(int(a), int(b));
  }

  i64 p() const { return p_; }
  int f() const { return f_; }
  i64 q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  int add(int a, int b) const {
    int r = 0, mult = 1;
    for (int i = 0; i < f_; ++i) {
      int da = int((a / mult) % p_), db = int((b / mult) % p_);
      r += int((da + db) % p_) * mult;
      mult *= int(p_);
    }
    return r;
  }
  int neg(int a) const {
    int r = 0, mult = 1;
    for (int i = 0; i < f_; ++i) {
      int da = int((a / mult) % p_);
      r += ((int(p_) - da) % int(p_)) * mult;
      mult *= int(p_);
    }
    return r;
  }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int mul(int a, int b) const { return mul_[size_t(i64(a) * q_ + b)]; }
  int pow(int a, i64 e) const {
    if (e < 0) throw domain_error("FqField::pow: negative exponent");
    int r = 1, base = a;
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  int inv(int a) const {
    if (a == 0) throw domain_error("FqField::inv: zero");
    return pow(a, q_ - 2);
  }
  int frobenius(int a) const { return pow(a, p_); }

  /** Multiplicative order of a nonzero element. */
  i64 order(int a) const {
    if (a == 0) throw domain_error("FqField::order: zero");
    i64 o = 1;
    int x = a;
    while (x != 1) {
      x = mul(x, a);
      ++o;
    }
    return o;
  }

  std::vector<int> digits(int a) const {
    std::vector<int> d(f_);
    for (int i = 0; i < f_; ++i) {
      d[i] = int(a % p_);
      a = int(a / p_);
    }
    return d;
  }
  int from_digits(const std::vector<int>& d) const {
    int a = 0, mult = 1;
    for (int i = 0; i < f_; ++i) {
      int di = i < int(d.size()) ? ((d[i] % int(p_)) + int(p_)) % int(p_) : 0;
      a += di * mult;
      mult *= int(p_);
    }
    return a;
  }

  /** The class of x (degree-f generator); for f = 1 returns 1. */
  int gen() const { return f_ == 1 ? 1 : int(p_); }

  /** Evaluate an integer-coefficient polynomial at a field element. */
  int eval_int_poly(const std::vector<i64>& coeffs, int at) const {
    int acc = 0;
    for (int i = int(coeffs.size()) - 1; i >= 0; --i) {
      acc = mul(acc, at);
      i64 c = ((coeffs[size_t(i)] % p_) + p_) % p_;
      acc = add(acc, mul(int(c % p_), 1));
    }
    return acc;
  }

  std::vector<int> roots_of_int_poly(const std::vector<i64>& coeffs) const {
    std::vector<int> roots;
    for (int a = 0; a < q_; ++a)
      if (eval_int_poly(coeffs, a) == 0) roots.push_back(a);
    return roots;
  }

 private:
  int mul_slow(int a, int b) const {
    std::vector<int> da = digits(a), db = digits(b);
    std::vector<int> c(size_t(2 * f_ - 1), 0);
    for (int i = 0; i < f_; ++i)
      for (int j = 0; j < f_; ++j)
        c[size_t(i + j)] = int((c[size_t(i + j)] + i64(da[size_t(i)]) * db[size_t(j)]) % p_);
    for (int k = 2 * f_ - 2; k >= f_; --k) {
      int cc = c[size_t(k)];
      if (cc == 0) continue;
      for (int i = 0; i < f_; ++i) {
        size_t idx = size_t(k - f_ + i);
        c[idx] = int((((c[idx] - i64(cc) * modulus_[size_t(i)]) % p_) + p_) % p_);
      }
      c[size_t(k)] = 0;
    }
    c.resize(size_t(f_));
    std::vector<int> cv(c.begin(), c.end());
    return from_digits(cv);
  }

  i64 p_;
  int f_;
  i64 q_;
  std::vector<int> modulus_;  // c_0..c_{f-1}
  std::vector<int> mul_;
};

}  // namespace llpack
