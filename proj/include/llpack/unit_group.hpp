#pragma once

/**
 * Structure of the unit group (o/p^l)^x.
 *
 * The group is mu_{q-1} x (1 + p), with the second factor a finite abelian
 * p-group of order q^{l-1}.  The torsion part is realized by a Teichmuller
 * representative of a residue-field generator (iterating the q-power map
 * until it stabilizes).  The p-part's cyclic type is read off from element
 * order counts: #{x : x^{p^k} = 1} = p^{sum_j min(k, lambda_j)} determines
 * the partition lambda for an abelian p-group.  Explicit generators are then
 * found greedily, certified by subgroup-closure cardinality, so the returned
 * decomposition is a proven direct product.  A discrete-log table over the
 * full group supports character labeling downstream.
 */

#include <map>
#include <string>
#include <vector>

#include "llpack/ring_iso.hpp"
#include "llpack/truncated_ring.hpp"

namespace llpack {

struct UnitGroup {
  RingPtr ring;
  std::vector<RElem> gens;
  std::vector<i64> orders;  // gens[i] has this exact order; group is the direct product
  i64 order = 1;
  std::map<std::string, std::vector<i64>> dlog;  // element key -> exponent vector

  std::vector<i64> exponents_of(const RElem& u) const {
    auto it = dlog.find(u.key());
    if (it == dlog.end()) throw domain_error("UnitGroup: element is not a unit of this ring");
    return it->second;
  }

  RElem from_exponents(const std::vector<i64>& e) const {
    RElem acc = RElem::one(ring);
    for (size_t i = 0; i < gens.size(); ++i) {
      i64 k = ((e[i] % orders[i]) + orders[i]) % orders[i];
      acc = acc * gens[i].pow(k);
    }
    return acc;
  }

  i64 exponent() const {
    i64 m = 1;
    for (i64 o : orders) m = std::lcm(m, o);
    return m;
  }
};

namespace detail {

inline i64 elem_order(const RElem& x, i64 bound) {
  RElem acc = x;
  for (i64 k = 1; k <= bound; ++k) {
    if (acc == RElem::one(x.ring())) return k;
    acc = acc * x;
  }
  throw domain_error("elem_order: bound exceeded");
}

}  // namespace detail

inline UnitGroup unit_group(const RingPtr& R, u64 budget = 2000000) {
  UnitGroup U;
  U.ring = R;
  i64 q = R->q();
  int l = R->l();
  i64 principal = 1;
  for (int i = 1; i < l; ++i) principal *= q;
  U.order = (q - 1) * principal;
  if (u64(U.order) > budget) throw budget_error("unit_group: group too large", budget);

  // Teichmuller representative of a residue-field generator
  if (q > 2) {
    const FqField& fq = R->residue_field();
    int prim = 0;
    for (int a = 2; a < int(q); ++a) {
      if (fq.order(a) == q - 1) {
        prim = a;
        break;
      }
    }
    if (prim == 0) prim = 1;  // q = 2 handled above; q = 3 gives a = 2
    RElem t = RElem::from_residue(R, prim);
    for (int it = 0; it < l + 2; ++it) t = t.pow(q);
    if (!(t.pow(q) == t)) throw domain_error("unit_group: Teichmuller iteration failed");
    if (detail::elem_order(t, q) != q - 1)
      throw domain_error("unit_group: torsion representative has wrong order");
    U.gens.push_back(t);
    U.orders.push_back(q - 1);
  }

  // principal units
  if (principal > 1) {
    std::vector<RElem> pu;
    RElem one = RElem::one(R);
    for (const RElem& x : RElem::enumerate(R, budget)) {
      if (x == one) {
        pu.push_back(x);
        continue;
      }
      auto v = (x - one).valuation();
      if (v.has_value() && *v >= 1) pu.push_back(x);
    }
    if (i64(pu.size()) != principal) throw domain_error("unit_group: principal unit count mismatch");
    i64 p = R->p();
    // order exponents: ordk[x] = min k with x^{p^k} = 1
    std::vector<int> ordk(pu.size(), 0);
    int kmax = 0;
    for (size_t i = 0; i < pu.size(); ++i) {
      RElem acc = pu[i];
      int k = 0;
      while (!(acc == one)) {
        acc = acc.pow(p);
        ++k;
        if (k > 64) throw domain_error("unit_group: runaway order");
      }
      ordk[i] = k;
      kmax = std::max(kmax, k);
    }
    // conjugate partition: c_k = log_p #{x : x^{p^k} = 1} - log_p #{x : x^{p^{k-1}} = 1}
    // counts #{ordk <= k} are p-powers; differences of logs give #{j : lambda_j >= k}
    std::vector<i64> cnt(size_t(kmax) + 1, 0);
    for (int k : ordk) ++cnt[size_t(k)];
    std::vector<int> logs(size_t(kmax) + 1, 0);
    i64 run = 0;
    for (int k = 0; k <= kmax; ++k) {
      run += cnt[size_t(k)];
      i64 r = run;
      int lg = 0;
      while (r > 1) {
        if (r % p != 0) throw domain_error("unit_group: order census is not a p-power");
        r /= p;
        ++lg;
      }
      logs[size_t(k)] = lg;
    }
    // c_k = #{j : lambda_j >= k}; part k has multiplicity c_k - c_{k+1}
    std::vector<int> cdesc(size_t(kmax) + 2, 0);
    for (int k = 1; k <= kmax; ++k) cdesc[size_t(k)] = logs[size_t(k)] - logs[size_t(k - 1)];
    std::vector<int> lambda;  // cyclic exponents, descending
    for (int k = kmax; k >= 1; --k) {
      int mult = cdesc[size_t(k)] - cdesc[size_t(k) + 1];
      if (mult < 0) throw domain_error("unit_group: inconsistent order census");
      for (int j = 0; j < mult; ++j) lambda.push_back(k);
    }
    // greedy generators certified by closure size
    std::vector<RElem> basis;
    std::map<std::string, bool> closure;
    closure[one.key()] = true;
    i64 closure_size = 1;
    auto grow_closure = [&](const RElem& g, i64 ord) {
      std::vector<RElem> old;
      for (const RElem& x : pu)
        if (closure.count(x.key())) old.push_back(x);
      closure.clear();
      for (const RElem& x : old) {
        RElem acc = x;
        for (i64 e = 0; e < ord; ++e) {
          closure[acc.key()] = true;
          acc = acc * g;
        }
      }
      closure_size = i64(closure.size());
    };
    for (int le : lambda) {
      i64 target_ord = ipow(p, le);
      bool found = false;
      for (size_t i = 0; i < pu.size() && !found; ++i) {
        if (ordk[i] != le) continue;
        if (closure.count(pu[i].key())) continue;
        // tentative closure growth must multiply the size by exactly p^le
        auto saved = closure;
        i64 saved_size = closure_size;
        grow_closure(pu[i], target_ord);
        if (closure_size == saved_size * target_ord) {
          basis.push_back(pu[i]);
          found = true;
        } else {
          closure = std::move(saved);
          closure_size = saved_size;
        }
      }
      if (!found) throw domain_error("unit_group: basis search failed");
      U.gens.push_back(basis.back());
      U.orders.push_back(target_ord);
    }
    if (closure_size != principal) throw domain_error("unit_group: closure does not fill group");
  }

  // discrete-log table over the verified direct product
  std::vector<i64> e(U.gens.size(), 0);
  while (true) {
    RElem x = U.from_exponents(e);
    std::string k = x.key();
    if (U.dlog.count(k)) throw domain_error("unit_group: product is not direct");
    U.dlog[k] = e;
    size_t j = 0;
    while (j < e.size()) {
      if (++e[j] < U.orders[j]) break;
      e[j] = 0;
      ++j;
    }
    if (j == e.size()) break;
    if (e.empty()) break;
  }
  if (i64(U.dlog.size()) != U.order) throw domain_error("unit_group: dlog table incomplete");
  return U;
}

}  // namespace llpack
