#pragma once

/**
 * Inner forms of GL_n over a local field: labels for the groups GL_m(D) with
 * D a division algebra of index d (md = n) and Hasse numerator h coprime to
 * d, the bijection with characters of mu_n, opposite algebras, and the
 * relevance criterion that decides which Levi supports an inner form sees.
 *
 * Character convention: a character of mu_n is z -> z^k for k mod n.  The
 * label (n, d, h) maps to k = (n/d) h mod n; gcd(k, n) = n/d recovers the
 * label, so the assignment is a bijection from labels to all n characters.
 */

#include <numeric>
#include <string>
#include <vector>

#include "llpack/common.hpp"

namespace llpack {

struct InnerFormLabel {
  int n = 1;  // total size: the form is an inner form of GL_n
  int d = 1;  // index of the underlying division algebra, d | n
  int h = 0;  // Hasse numerator: invariant h/d mod 1; h in [0,d), gcd(h,d)=1
  bool archimedean = false;

  int m() const { return n / d; }

  std::string describe() const {
    if (d == 1) return "GL_" + std::to_string(n) + "(F)";
    if (archimedean) return "GL_" + std::to_string(m()) + "(H)";
    return "GL_" + std::to_string(m()) + "(D_" + std::to_string(h) + "/" + std::to_string(d) +
           ")";
  }
};

inline bool operator==(const InnerFormLabel& a, const InnerFormLabel& b) {
  return a.n == b.n && a.d == b.d && a.h == b.h && a.archimedean == b.archimedean;
}
inline bool operator!=(const InnerFormLabel& a, const InnerFormLabel& b) { return !(a == b); }

inline InnerFormLabel make_inner_form(int n, int d, int h, bool archimedean = false) {
  if (n < 1 || d < 1 || n % d != 0) throw domain_error("make_inner_form: need d | n");
  if (h < 0 || h >= d || std::gcd(h == 0 ? d : h, d) != 1)
    throw domain_error("make_inner_form: need h in [0,d) coprime to d");
  if (d == 1 && h != 0) throw domain_error("make_inner_form: split form has h = 0");
  if (archimedean && d > 2)
    throw domain_error("make_inner_form: archimedean division algebras have d <= 2");
  return InnerFormLabel{n, d, h, archimedean};
}

/** One label per character of mu_n: n labels in total (sum of phi(d) over
 *  d | n).  Ordered by d, then h. */
inline std::vector<InnerFormLabel> standard_inner_forms(int n) {
  if (n < 1) throw domain_error("standard_inner_forms: n must be >= 1");
  std::vector<InnerFormLabel> out;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    for (int h = 0; h < d; ++h) {
      if (std::gcd(h == 0 ? d : h, d) != 1) continue;
      out.push_back(InnerFormLabel{n, d, h, false});
    }
  }
  return out;
}

/** A character of mu_n (the centre of SL_n on the dual side): z -> z^k. */
struct KottwitzCharacter {
  int n = 1;
  int k = 0;  // exponent mod n

  int order() const { return n / std::gcd(n, k == 0 ? n : k); }
};

inline bool operator==(const KottwitzCharacter& a, const KottwitzCharacter& b) {
  return a.n == b.n && a.k == b.k;
}

inline KottwitzCharacter kottwitz_label(const InnerFormLabel& f) {
  return KottwitzCharacter{f.n, int((i64(f.m()) * f.h) % f.n)};
}

inline InnerFormLabel form_from_kottwitz(const KottwitzCharacter& c) {
  if (c.n < 1 || c.k < 0 || c.k >= c.n) throw domain_error("form_from_kottwitz: bad character");
  int g = c.k == 0 ? c.n : std::gcd(c.n, c.k);  // = m
  return make_inner_form(c.n, c.n / g, c.k / g);
}

/** The opposite algebra: inverts the Hasse invariant.  Involution; fixes all
 *  labels with d <= 2. */
inline InnerFormLabel opposite_form(const InnerFormLabel& f) {
  return make_inner_form(f.n, f.d, f.h == 0 ? 0 : f.d - f.h, f.archimedean);
}

/** Equivalence of inner forms (as forms): equality of labels.  This is finer
 *  than isomorphism of the underlying groups. */
inline bool equivalent_forms(const InnerFormLabel& a, const InnerFormLabel& b) { return a == b; }

/** Isomorphism of the groups GL_m(D): a division algebra and its opposite
 *  give isomorphic groups (transpose-inverse), so labels h and -h collapse.
 *  Distinct from equivalent_forms whenever d > 2. */
inline bool isomorphic_groups(const InnerFormLabel& a, const InnerFormLabel& b) {
  return a == b || opposite_form(a) == b;
}

/** A parameter with the given Levi support (block sizes n_i summing to n) is
 *  seen by the inner form iff every block transfers, i.e. d | n_i for all i.
 *  Recomputed through the dual-side criterion — the Kottwitz character must
 *  kill the central subgroup {z in mu_n : z^(n/g) = 1}, g = gcd(n_i) — and
 *  the two routes are checked against each other. */
inline bool is_relevant(const std::vector<i64>& levi_dims, const InnerFormLabel& f) {
  if (levi_dims.empty()) throw domain_error("is_relevant: empty Levi support");
  i64 total = 0;
  for (i64 ni : levi_dims) {
    if (ni < 1) throw domain_error("is_relevant: nonpositive block");
    total += ni;
  }
  if (total != f.n) throw domain_error("is_relevant: Levi support does not sum to n");

  bool direct = true;
  for (i64 ni : levi_dims)
    if (ni % f.d != 0) direct = false;

  // dual route: enumerate the subgroup and test the character on it
  i64 g = 0;
  for (i64 ni : levi_dims) g = std::gcd(g, ni);
  int k = kottwitz_label(f).k;
  bool dual = true;
  for (i64 j = 0; j < f.n; ++j) {
    if ((j * (f.n / g)) % f.n != 0) continue;  // zeta^j outside the subgroup
    if ((j * k) % f.n != 0) dual = false;
  }
  if (direct != dual) throw std::logic_error("is_relevant: criteria disagree");
  return direct;
}

}  // namespace llpack
