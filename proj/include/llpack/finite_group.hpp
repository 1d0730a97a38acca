#pragma once

/**
 * Finite groups as explicit multiplication tables.
 *
 * Everything downstream (character tables, Galois-type models, component
 * groups) works with element indices 0..n-1, index 0 the identity.  The
 * constructor validates the full group axioms, so a FiniteGroup instance is
 * always a genuine group.  Factories cover the cyclic, dihedral, and
 * (generalized) quaternion families, direct products, permutation closures,
 * and quotients; each returns a plain table, so nothing downstream depends
 * on how a group was presented.
 */

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "llpack/common.hpp"

namespace llpack {

class FiniteGroup {
 public:
  explicit FiniteGroup(std::vector<std::vector<int>> table) : mul_(std::move(table)) {
    n_ = int(mul_.size());
    if (n_ == 0) throw domain_error("FiniteGroup: empty table");
    for (const auto& row : mul_)
      if (int(row.size()) != n_) throw domain_error("FiniteGroup: ragged table");
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (mul_[size_t(a)][size_t(b)] < 0 || mul_[size_t(a)][size_t(b)] >= n_)
          throw domain_error("FiniteGroup: entry out of range");
    // identity at index 0
    for (int a = 0; a < n_; ++a)
      if (mul_[0][size_t(a)] != a || mul_[size_t(a)][0] != a)
        throw domain_error("FiniteGroup: index 0 is not an identity");
    // associativity
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (mul_[size_t(mul_[size_t(a)][size_t(b)])][size_t(c)] !=
              mul_[size_t(a)][size_t(mul_[size_t(b)][size_t(c)])])
            throw domain_error("FiniteGroup: not associative");
    // inverses
    inv_.assign(size_t(n_), -1);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b)
        if (mul_[size_t(a)][size_t(b)] == 0 && mul_[size_t(b)][size_t(a)] == 0) {
          inv_[size_t(a)] = b;
          break;
        }
      if (inv_[size_t(a)] < 0) throw domain_error("FiniteGroup: missing inverse");
    }
  }

  int order() const { return n_; }
  int op(int a, int b) const { return mul_[size_t(a)][size_t(b)]; }
  int inv(int a) const { return inv_[size_t(a)]; }
  int id() const { return 0; }
  const std::vector<std::vector<int>>& table() const { return mul_; }

  int conj(int g, int x) const { return op(op(g, x), inv(g)); }
  int commutator(int a, int b) const { return op(op(a, b), op(inv(a), inv(b))); }

  int element_order(int a) const {
    int x = a, k = 1;
    while (x != 0) {
      x = op(x, a);
      ++k;
      if (k > n_) throw domain_error("FiniteGroup: order overflow");
    }
    return k;
  }

  int power(int a, i64 e) const {
    int m = element_order(a);
    e %= m;
    if (e < 0) e += m;
    int acc = 0;
    for (i64 i = 0; i < e; ++i) acc = op(acc, a);
    return acc;
  }

  i64 exponent() const {
    i64 m = 1;
    for (int a = 0; a < n_; ++a) m = std::lcm(m, i64(element_order(a)));
    return m;
  }

  bool is_abelian() const {
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (op(a, b) != op(b, a)) return false;
    return true;
  }

  std::vector<int> subgroup_generated(const std::vector<int>& gens) const {
    std::vector<char> in(size_t(n_), 0);
    in[0] = 1;
    std::vector<int> stack{0}, out{0};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int g : gens) {
        for (int y : {op(x, g), op(x, inv(g))}) {
          if (!in[size_t(y)]) {
            in[size_t(y)] = 1;
            stack.push_back(y);
            out.push_back(y);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_subgroup(const std::vector<int>& h) const {
    std::vector<char> in(size_t(n_), 0);
    for (int x : h) in[size_t(x)] = 1;
    if (!in[0]) return false;
    for (int a : h)
      for (int b : h)
        if (!in[size_t(op(a, b))]) return false;
    return true;
  }

  bool is_normal(const std::vector<int>& h) const {
    std::vector<char> in(size_t(n_), 0);
    for (int x : h) in[size_t(x)] = 1;
    for (int g = 0; g < n_; ++g)
      for (int x : h)
        if (!in[size_t(conj(g, x))]) return false;
    return true;
  }

  std::vector<std::vector<int>> conjugacy_classes() const {
    std::vector<int> cls(size_t(n_), -1);
    std::vector<std::vector<int>> out;
    for (int a = 0; a < n_; ++a) {
      if (cls[size_t(a)] >= 0) continue;
      std::vector<int> orbit;
      for (int g = 0; g < n_; ++g) {
        int y = conj(g, a);
        if (cls[size_t(y)] < 0) {
          cls[size_t(y)] = int(out.size());
          orbit.push_back(y);
        }
      }
      std::sort(orbit.begin(), orbit.end());
      out.push_back(orbit);
    }
    return out;
  }

  std::vector<int> center() const {
    std::vector<int> z;
    for (int a = 0; a < n_; ++a) {
      bool central = true;
      for (int b = 0; b < n_ && central; ++b)
        if (op(a, b) != op(b, a)) central = false;
      if (central) z.push_back(a);
    }
    return z;
  }

  std::vector<int> commutator_subgroup() const {
    std::vector<int> gens;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) gens.push_back(commutator(a, b));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return subgroup_generated(gens);
  }

  /** Left cosets of a subgroup, each sorted, identity coset first. */
  std::vector<std::vector<int>> left_cosets(const std::vector<int>& h) const {
    std::vector<int> which(size_t(n_), -1);
    std::vector<std::vector<int>> out;
    for (int g = 0; g < n_; ++g) {
      if (which[size_t(g)] >= 0) continue;
      std::vector<int> cs;
      for (int x : h) {
        int y = op(g, x);
        which[size_t(y)] = int(out.size());
        cs.push_back(y);
      }
      std::sort(cs.begin(), cs.end());
      out.push_back(cs);
    }
    return out;
  }

  struct Quotient;

  /** Quotient by a normal subgroup; coset of the identity is index 0. */
  Quotient quotient(const std::vector<int>& h) const;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
};

struct FiniteGroup::Quotient {
  FiniteGroup group;
  std::vector<int> proj;  // element of the source -> element of the quotient
};

inline FiniteGroup::Quotient FiniteGroup::quotient(const std::vector<int>& h) const {
  if (!is_subgroup(h) || !is_normal(h)) throw domain_error("quotient: subgroup not normal");
  auto cosets = left_cosets(h);
  int m = int(cosets.size());
  std::vector<int> which(size_t(n_), -1);
  for (int i = 0; i < m; ++i)
    for (int x : cosets[size_t(i)]) which[size_t(x)] = i;
  std::vector<std::vector<int>> table(size_t(m), std::vector<int>(size_t(m), 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      table[size_t(i)][size_t(j)] = which[size_t(op(cosets[size_t(i)][0], cosets[size_t(j)][0]))];
  return Quotient{FiniteGroup(std::move(table)), std::move(which)};
}

inline FiniteGroup trivial_group() {
  return FiniteGroup(std::vector<std::vector<int>>{{0}});
}

inline FiniteGroup cyclic_group(int n) {
  if (n < 1) throw domain_error("cyclic_group: order must be positive");
  std::vector<std::vector<int>> t(size_t(n), std::vector<int>(size_t(n), 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[size_t(a)][size_t(b)] = (a + b) % n;
  return FiniteGroup(std::move(t));
}

/** Dihedral group of order 2m: elements r^a s^b, (a, b) -> index 2a + b. */
inline FiniteGroup dihedral_group(int m) {
  if (m < 1) throw domain_error("dihedral_group: need m >= 1");
  int n = 2 * m;
  auto idx = [m](int a, int b) { return 2 * (((a % m) + m) % m) + (b & 1); };
  std::vector<std::vector<int>> t(size_t(n), std::vector<int>(size_t(n), 0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < m; ++c)
        for (int e = 0; e < 2; ++e) {
          // (r^a s^b)(r^c s^e) = r^{a + (-1)^b c} s^{b+e}
          int aa = b ? a - c : a + c;
          t[size_t(idx(a, b))][size_t(idx(c, e))] = idx(aa, b + e);
        }
  return FiniteGroup(std::move(t));
}

/** Generalized quaternion group of order 4m (m >= 2); m = 2 is the usual Q8.
 *  Elements x^a y^b with x of order 2m, y^2 = x^m, y x y^{-1} = x^{-1};
 *  (a, b) -> index 2a + b. */
inline FiniteGroup quaternion_group(int m = 2) {
  if (m < 2) throw domain_error("quaternion_group: need m >= 2");
  int n = 4 * m;
  int xo = 2 * m;
  auto idx = [xo](int a, int b) { return 2 * (((a % xo) + xo) % xo) + (b & 1); };
  std::vector<std::vector<int>> t(size_t(n), std::vector<int>(size_t(n), 0));
  for (int a = 0; a < xo; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < xo; ++c)
        for (int e = 0; e < 2; ++e) {
          // (x^a y^b)(x^c y^e) = x^{a + (-1)^b c} y^{b+e}, y^2 = x^m
          int aa = b ? a - c : a + c;
          int bb = b + e;
          if (bb == 2) {
            aa += m;
            bb = 0;
          }
          t[size_t(idx(a, b))][size_t(idx(c, e))] = idx(aa, bb);
        }
  return FiniteGroup(std::move(t));
}

inline FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B) {
  int n = A.order() * B.order();
  auto idx = [&](int a, int b) { return a * B.order() + b; };
  std::vector<std::vector<int>> t(size_t(n), std::vector<int>(size_t(n), 0));
  for (int a = 0; a < A.order(); ++a)
    for (int b = 0; b < B.order(); ++b)
      for (int c = 0; c < A.order(); ++c)
        for (int e = 0; e < B.order(); ++e)
          t[size_t(idx(a, b))][size_t(idx(c, e))] = idx(A.op(a, c), B.op(b, e));
  return FiniteGroup(std::move(t));
}

/** Semidirect product Z/n x| Z/m with the generator of Z/m acting by x -> x^k.
 *  Requires k^m = 1 mod n.  (a, b) -> index a*m + b. */
inline FiniteGroup semidirect_cyclic(int n, int m, i64 k) {
  i64 kk = 1;
  for (int i = 0; i < m; ++i) kk = (kk * k) % n;
  if (((kk % n) + n) % n != 1 % n) throw domain_error("semidirect_cyclic: action order must divide m");
  int N = n * m;
  auto idx = [&](i64 a, i64 b) { return int((((a % n) + n) % n) * m + (((b % m) + m) % m)); };
  std::vector<std::vector<int>> t(size_t(N), std::vector<int>(size_t(N), 0));
  auto act = [&](i64 b, i64 a) {  // action of the second factor power b on a
    i64 f = 1;
    b = ((b % m) + m) % m;
    for (i64 i = 0; i < b; ++i) f = (f * k) % n;
    return (a * f) % n;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < m; ++e)
          t[size_t(idx(a, b))][size_t(idx(c, e))] = idx(a + act(b, c), b + e);
  return FiniteGroup(std::move(t));
}

/** Heisenberg group of order p^3 (upper unitriangular 3x3 matrices over F_p):
 *  triples (a, b, c) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b'),
 *  (a, b, c) -> index (a*p + b)*p + c.  Nonabelian of exponent p for odd p. */
inline FiniteGroup heisenberg_group(int p) {
  if (p < 2) throw domain_error("heisenberg_group: p must be at least 2");
  int N = p * p * p;
  auto idx = [&](int a, int b, int c) { return ((a % p) * p + (b % p)) * p + (c % p); };
  std::vector<std::vector<int>> t(size_t(N), std::vector<int>(size_t(N), 0));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int a2 = 0; a2 < p; ++a2)
          for (int b2 = 0; b2 < p; ++b2)
            for (int c2 = 0; c2 < p; ++c2)
              t[size_t(idx(a, b, c))][size_t(idx(a2, b2, c2))] =
                  idx(a + a2, b + b2, c + c2 + a * b2);
  return FiniteGroup(std::move(t));
}

/** Closure of permutation generators on a finite domain; the identity is
 *  inserted automatically.  Returns the group and the permutations matching
 *  its element indices. */
struct PermGroup {
  FiniteGroup group;
  std::vector<std::vector<int>> perms;
};

inline PermGroup group_from_permutations(int degree, const std::vector<std::vector<int>>& gens) {
  for (const auto& g : gens) {
    if (int(g.size()) != degree) throw domain_error("group_from_permutations: wrong degree");
    std::vector<char> seen(size_t(degree), 0);
    for (int v : g) {
      if (v < 0 || v >= degree || seen[size_t(v)])
        throw domain_error("group_from_permutations: not a permutation");
      seen[size_t(v)] = 1;
    }
  }
  std::vector<int> idp(size_t(degree), 0);
  std::iota(idp.begin(), idp.end(), 0);
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> elems{idp};
  index[idp] = 0;
  std::vector<int> stack{0};
  auto compose = [&](const std::vector<int>& f, const std::vector<int>& g) {
    std::vector<int> h(size_t(degree), 0);
    for (int i = 0; i < degree; ++i) h[size_t(i)] = f[size_t(g[size_t(i)])];
    return h;
  };
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (const auto& g : gens) {
      std::vector<int> h = compose(elems[size_t(i)], g);
      if (!index.count(h)) {
        index[h] = int(elems.size());
        elems.push_back(h);
        stack.push_back(int(elems.size()) - 1);
        if (elems.size() > 100000) throw budget_error("group_from_permutations: closure too large", 100000);
      }
    }
  }
  int n = int(elems.size());
  std::vector<std::vector<int>> t(size_t(n), std::vector<int>(size_t(n), 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[size_t(a)][size_t(b)] = index.at(compose(elems[size_t(a)], elems[size_t(b)]));
  return PermGroup{FiniteGroup(std::move(t)), std::move(elems)};
}

/** Exact isomorphism test by invariant prefilter plus generator backtracking.
 *  Intended for small groups (tables are explicit anyway). */
inline bool group_isomorphic(const FiniteGroup& A, const FiniteGroup& B) {
  int n = A.order();
  if (B.order() != n) return false;
  auto profile = [](const FiniteGroup& G) {
    std::vector<int> ords(size_t(G.order()));
    for (int a = 0; a < G.order(); ++a) ords[size_t(a)] = G.element_order(a);
    std::sort(ords.begin(), ords.end());
    std::vector<int> cls;
    for (const auto& c : G.conjugacy_classes()) cls.push_back(int(c.size()));
    std::sort(cls.begin(), cls.end());
    return std::make_tuple(ords, cls, int(G.center().size()), G.is_abelian());
  };
  if (profile(A) != profile(B)) return false;

  // small generating set of A, built greedily
  std::vector<int> gens;
  std::vector<int> cur{0};
  while (int(cur.size()) < n) {
    std::vector<char> in(size_t(n), 0);
    for (int x : cur) in[size_t(x)] = 1;
    int next = -1;
    for (int a = 1; a < n && next < 0; ++a)
      if (!in[size_t(a)]) next = a;
    gens.push_back(next);
    cur = A.subgroup_generated(gens);
  }

  std::vector<int> f(size_t(n), -1);  // partial map A -> B
  std::vector<char> used(size_t(n), 0);
  f[0] = 0;
  used[0] = 1;
  std::vector<int> defined{0};

  // extend the partial map with a -> b and close under products
  auto extend = [&](int a, int b) -> bool {
    if (f[size_t(a)] >= 0) return f[size_t(a)] == b;
    if (used[size_t(b)]) return false;
    f[size_t(a)] = b;
    used[size_t(b)] = 1;
    defined.push_back(a);
    for (size_t i = 0; i < defined.size(); ++i) {
      int x = defined[i];
      for (size_t j = 0; j <= i; ++j) {
        for (auto [p, q] : {std::pair<int, int>{x, defined[j]}, {defined[j], x}}) {
          int pq = A.op(p, q);
          int im = B.op(f[size_t(p)], f[size_t(q)]);
          if (f[size_t(pq)] >= 0) {
            if (f[size_t(pq)] != im) return false;
          } else {
            if (used[size_t(im)]) return false;
            f[size_t(pq)] = im;
            used[size_t(im)] = 1;
            defined.push_back(pq);
          }
        }
      }
    }
    return true;
  };

  std::function<bool(size_t)> search = [&](size_t gi) -> bool {
    if (gi == gens.size()) return int(defined.size()) == n;
    int a = gens[gi];
    if (f[size_t(a)] >= 0) return search(gi + 1);  // already forced
    int ordA = A.element_order(a);
    auto snap_f = f;
    auto snap_used = used;
    auto snap_def = defined;
    for (int b = 0; b < n; ++b) {
      if (used[size_t(b)] || B.element_order(b) != ordA) continue;
      if (extend(a, b) && search(gi + 1)) return true;
      f = snap_f;
      used = snap_used;
      defined = snap_def;
    }
    return false;
  };
  return search(0);
}

/** Decomposition of a finite abelian group as an internal direct product of
 *  cyclic subgroups, with coordinates for every element.  Verified: the
 *  mixed-radix products must enumerate the group bijectively. */
struct AbelianBasis {
  std::vector<int> gens;                  // element indices
  std::vector<int> orders;                // matching cyclic orders
  std::vector<std::vector<int>> coords;   // element -> exponents, coords[x][i] < orders[i]
};

inline AbelianBasis abelian_basis(const FiniteGroup& X) {
  if (!X.is_abelian()) throw domain_error("abelian_basis: group is not abelian");
  int n = X.order();
  AbelianBasis out;
  std::vector<char> inT(size_t(n), 0);
  inT[0] = 1;
  int tsize = 1;
  while (tsize < n) {
    // maximal order in the quotient by the span so far
    int bestt = 1;
    for (int x = 1; x < n; ++x) {
      int t = 1, p = x;
      while (!inT[size_t(p)]) {
        p = X.op(p, x);
        ++t;
      }
      bestt = std::max(bestt, t);
    }
    // a clean representative: full order bestt, cyclic span meeting T trivially
    int chosen = -1;
    for (int y = 1; y < n && chosen < 0; ++y) {
      if (X.element_order(y) != bestt) continue;
      bool ok = true;
      int p = y;
      for (int t = 1; t < bestt && ok; ++t) {
        if (inT[size_t(p)]) ok = false;
        p = X.op(p, y);
      }
      if (ok) chosen = y;
    }
    if (chosen < 0) throw domain_error("abelian_basis: no clean generator found");
    out.gens.push_back(chosen);
    out.orders.push_back(bestt);
    std::vector<int> members;
    for (int x = 0; x < n; ++x)
      if (inT[size_t(x)]) members.push_back(x);
    for (int m : members) {
      int p = m;
      for (int t = 1; t < bestt; ++t) {
        p = X.op(p, chosen);
        inT[size_t(p)] = 1;
      }
    }
    tsize = 0;
    for (int x = 0; x < n; ++x) tsize += inT[size_t(x)];
  }
  // enumerate all products and record coordinates; must be bijective
  out.coords.assign(size_t(n), {});
  int r = int(out.gens.size());
  std::vector<int> a(size_t(r), 0);
  int count = 0;
  while (true) {
    int prod = 0;
    for (int i = 0; i < r; ++i) prod = X.op(prod, X.power(out.gens[size_t(i)], a[size_t(i)]));
    if (!out.coords[size_t(prod)].empty() || (prod == 0 && count > 0))
      throw domain_error("abelian_basis: decomposition is not direct");
    out.coords[size_t(prod)] = a;
    ++count;
    int i = 0;
    while (i < r && ++a[size_t(i)] == out.orders[size_t(i)]) a[size_t(i++)] = 0;
    if (i == r) break;
  }
  if (count != n) throw domain_error("abelian_basis: decomposition misses elements");
  if (out.coords[0].empty()) out.coords[0].assign(size_t(r), 0);
  return out;
}

}  // namespace llpack
