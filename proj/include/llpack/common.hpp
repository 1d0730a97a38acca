#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace llpack {

using i64 = long long;
using u64 = unsigned long long;

/** Exact rational scalar. All conductor/depth arithmetic is exact. */
using Rat = boost::rational<i64>;

/** Violated precondition or mathematically undefined request. */
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/** Windowed arithmetic ran out of known digits; carries the width that would suffice. */
class precision_error : public std::runtime_error {
 public:
  precision_error(const std::string& what, int required_width)
      : std::runtime_error(what), required_width(required_width) {}
  int required_width;
};

/** An enumeration exceeded its configured budget. */
class budget_error : public std::runtime_error {
 public:
  budget_error(const std::string& what, u64 budget)
      : std::runtime_error(what), budget(budget) {}
  u64 budget;
};

inline i64 ipow(i64 base, int exp) {
  if (exp < 0) throw domain_error("ipow: negative exponent");
  i64 r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > (i64(1) << 62) / (base < 0 ? -base : base))
      throw domain_error("ipow: overflow");
    r *= base;
  }
  return r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return i64(((__int128)a * b) % m);
}

inline i64 powmod(i64 a, i64 e, i64 m) {
  a %= m;
  if (a < 0) a += m;
  i64 r = 1;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline i64 invmod(i64 a, i64 m) {
  i64 g = std::gcd(a % m, m);
  if (g != 1 && g != -1) throw domain_error("invmod: not invertible");
  i64 r = powmod(a, m - 2, m);  // callers use prime m
  if (mulmod(r, a, m) != 1) {
    // generic extended Euclid fallback for non-prime m
    i64 t = 0, newt = 1, rr = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
      i64 q = rr / newr;
      i64 tmp = t - q * newt; t = newt; newt = tmp;
      tmp = rr - q * newr; rr = newr; newr = tmp;
    }
    if (rr != 1) throw domain_error("invmod: not invertible");
    r = ((t % m) + m) % m;
  }
  return r;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/** Smallest prime p with p ≡ 1 (mod m) and p > lower. */
inline i64 next_split_prime(i64 m, i64 lower) {
  if (m <= 0) throw domain_error("next_split_prime: modulus must be positive");
  i64 p = lower + 1;
  if (p < 2) p = 2;
  // advance to ≡ 1 mod m
  while (p % m != 1 % m) ++p;
  while (!is_prime(p)) p += m;
  return p;
}

/** Smallest generator of (Z/p)^x for prime p. */
inline i64 primitive_root_mod(i64 p) {
  if (!is_prime(p)) throw domain_error("primitive_root_mod: modulus not prime");
  if (p == 2) return 1;
  std::vector<i64> prime_factors;
  i64 m = p - 1;
  for (i64 d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      prime_factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) prime_factors.push_back(m);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 q : prime_factors)
      if (powmod(g, (p - 1) / q, p) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw domain_error("primitive_root_mod: no generator found");
}

/** Element of exact multiplicative order d in (Z/p)^x; requires d | p-1. */
inline i64 root_of_order(i64 d, i64 p) {
  if (d <= 0 || (p - 1) % d != 0)
    throw domain_error("root_of_order: order does not divide p-1");
  return powmod(primitive_root_mod(p), (p - 1) / d, p);
}

/** FNV-1a 64-bit content hash, used by the catalog manifest. */
inline u64 fnv1a(const std::string& data) {
  u64 h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string fnv1a_hex(const std::string& data) {
  static const char* digits = "0123456789abcdef";
  u64 h = fnv1a(data);
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace llpack
