#pragma once

/**
 * Truncated cyclic division algebras.  D is generated over its maximal
 * unramified subfield L (degree d over the base F) by a uniformizer pi with
 *   pi * b = sigma^h(b) * pi   for b in L,     pi^d = w  (the uniformizer of F),
 * where sigma is the Frobenius generator of Gal(L/F) and gcd(h, d) = 1.  The
 * pair (d, h) is the label of the algebra; h/d mod 1 is its Hasse invariant.
 *
 * Elements of o_D / p_D^r are stored as d-tuples (a_0, ..., a_{d-1}) of
 * truncated L-elements, x = sum a_i pi^i, with every coefficient held at the
 * uniform L-precision ceil(r/d) + 1.  The extra digit is a guard: it makes
 * the regular representation and its determinant exact at storage precision,
 * while quantities attached to a class mod p_D^r are only meaningful mod
 * p_F^{ceil(r/d)} (see reduced_norm).
 *
 * The reduced norm of g in GL_m(D) is the determinant of the left-regular
 * embedding M_m(D) -> M_{md}(L) (division-free Berkowitz, valid over the
 * truncated ring), which is Frobenius-fixed and therefore descends to the
 * embedded copy of the F-ring; the descent is found by exhaustive lookup.
 * Note Nrd(1 + p_D^r) = 1 + p_F^{ceil(r/d)}: the image is wider than the
 * naive 1 + p_F^r whenever d > 1, which is why the guard digit convention
 * above is the right one.
 */

#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "llpack/common.hpp"
#include "llpack/ring_iso.hpp"
#include "llpack/truncated_ring.hpp"

namespace llpack {

/** Division-free determinant over a truncated ring (Berkowitz iteration on
 *  principal minors; no entry inversions needed). */
inline RElem ring_det(const std::vector<std::vector<RElem>>& A, const RingPtr& R) {
  int n = int(A.size());
  for (auto& row : A)
    if (int(row.size()) != n) throw domain_error("ring_det: not square");
  if (n == 0) return RElem::one(R);
  const RElem zero = RElem::zero(R);
  const RElem one = RElem::one(R);
  std::vector<RElem> cur{one};  // charpoly coefficients, descending
  for (int k = 1; k <= n; ++k) {
    std::vector<RElem> sar(size_t(k), zero);
    std::vector<RElem> v(size_t(k - 1), zero);
    for (int i = 0; i < k - 1; ++i) v[size_t(i)] = A[size_t(i)][size_t(k - 1)];
    for (int j = 0; j <= k - 2; ++j) {
      RElem acc = zero;
      for (int i = 0; i < k - 1; ++i) acc = acc + A[size_t(k - 1)][size_t(i)] * v[size_t(i)];
      sar[size_t(j)] = acc;
      if (j < k - 2) {
        std::vector<RElem> w(size_t(k - 1), zero);
        for (int i = 0; i < k - 1; ++i)
          for (int t = 0; t < k - 1; ++t)
            w[size_t(t)] = w[size_t(t)] + A[size_t(t)][size_t(i)] * v[size_t(i)];
        v = w;
      }
    }
    std::vector<RElem> col(size_t(k + 1), zero);
    col[0] = one;
    col[1] = -A[size_t(k - 1)][size_t(k - 1)];
    for (int j = 2; j <= k; ++j) col[size_t(j)] = -sar[size_t(j - 2)];
    std::vector<RElem> next(size_t(k + 1), zero);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j < int(cur.size()); ++j) {
        if (i - j < 0 || i - j > k) continue;
        next[size_t(i)] = next[size_t(i)] + col[size_t(i - j)] * cur[size_t(j)];
      }
    cur = next;
  }
  // charpoly(0) = det(-A) = (-1)^n det A
  RElem c0 = cur.back();
  return (n % 2 == 1) ? -c0 : c0;
}

class CyclicAlgebra {
 public:
  /** A D-element as its coefficient tuple over L. */
  struct Elem {
    std::vector<RElem> c;
  };

  CyclicAlgebra(const LocalFieldSpec& base, int d, int h, i64 r)
      : base_(base), d_(d), h_(h), r_(r) {
    if (d_ < 1) throw domain_error("CyclicAlgebra: index must be >= 1");
    if (h_ < 0 || h_ >= d_ || std::gcd(h_ == 0 ? d_ : i64(h_), i64(d_)) != 1)
      throw domain_error("CyclicAlgebra: twist must lie in [0,d) coprime to d");
    if (d_ == 1 && h_ != 0) throw domain_error("CyclicAlgebra: split algebra has h = 0");
    if (r_ < 1) throw domain_error("CyclicAlgebra: precision must be >= 1");
    // ramified base rings are supported only when the Eisenstein coefficients
    // are integer constants: those keep their meaning verbatim inside the
    // enlarged coefficient ring
    for (auto& cv : base.eisenstein)
      for (size_t j = 1; j < cv.size(); ++j)
        if (cv[j] != 0)
          throw domain_error("CyclicAlgebra: Eisenstein data must be integer constants");
    lF_ = int((r_ + d_ - 1) / d_) + 1;
    F_ = make_ring(base, lF_);
    LocalFieldSpec lspec = base;
    lspec.f = base.f * d_;
    lspec.name = base.name.empty() ? "" : base.name + "-unramified-ext";
    L_ = make_ring(lspec, lF_);

    // F -> L along the smallest lifted root of F's coefficient modulus
    auto roots = lifted_roots(L_, modulus_poly(F_));
    if (roots.empty()) throw domain_error("CyclicAlgebra: base modulus has no roots upstairs");
    embed_ = std::make_unique<RingHom>(make_hom(F_, L_, roots[0], RElem::uniformizer(L_)));
    if (auto err = verify_hom(*embed_, false))
      throw domain_error("CyclicAlgebra: embedding failed: " + *err);

    // Frobenius powers sigma^j, each the automorphism of L fixing F and the
    // uniformizer, acting as the q_F^j power on the residue field
    const FqField& k = L_->residue_field();
    i64 qF = ipow(base.p, base.f);
    for (int j = 0; j < d_; ++j) {
      int img = k.gen();
      for (int t = 0; t < j; ++t) img = k.pow(img, qF);
      RElem glift = hensel_lift_root(L_, modulus_poly(L_), img);
      sig_.push_back(make_hom(L_, L_, glift, RElem::uniformizer(L_)));
      if (auto err = verify_hom(sig_.back(), true))
        throw domain_error("CyclicAlgebra: Frobenius power failed: " + *err);
    }
    // sigma must fix the embedded base ring (enough to check its generators)
    if (d_ > 1) {
      if (!(sig_[1].apply(roots[0]) == roots[0]))
        throw std::logic_error("CyclicAlgebra: Frobenius moves the embedded base generator");
    }
  }

  const RingPtr& base_ring() const { return F_; }
  const RingPtr& coeff_ring() const { return L_; }
  const RingHom& embedding() const { return *embed_; }
  const RingHom& frobenius(int j = 1) const { return sig_[size_t(((j % d_) + d_) % d_)]; }
  int index() const { return d_; }
  int twist() const { return h_; }
  i64 precision() const { return r_; }
  int coeff_precision() const { return lF_; }
  /** Largest F-precision at which quantities attached to classes mod p_D^r
   *  are representative-independent. */
  int norm_precision() const { return lF_ - 1; }

  Elem zero() const { return Elem{std::vector<RElem>(size_t(d_), RElem::zero(L_))}; }
  Elem one() const {
    Elem x = zero();
    x.c[0] = RElem::one(L_);
    return x;
  }
  Elem from_coeff(const RElem& a) const {
    if (a.ring()->signature() != L_->signature())
      throw domain_error("CyclicAlgebra: coefficient from a different ring");
    Elem x = zero();
    x.c[0] = a;
    return x;
  }
  Elem from_base(const RElem& a) const { return from_coeff(embed_->apply(a)); }
  Elem from_coeffs(std::vector<RElem> cs) const {
    if (int(cs.size()) != d_) throw domain_error("CyclicAlgebra: need d coefficients");
    for (auto& a : cs)
      if (a.ring()->signature() != L_->signature())
        throw domain_error("CyclicAlgebra: coefficient from a different ring");
    return Elem{std::move(cs)};
  }
  /** The algebra uniformizer pi (equals the base uniformizer when d = 1). */
  Elem pi() const {
    Elem x = zero();
    if (d_ == 1) {
      x.c[0] = RElem::uniformizer(L_);
    } else {
      x.c[1] = RElem::one(L_);
    }
    return x;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem x = zero();
    for (int i = 0; i < d_; ++i) x.c[size_t(i)] = a.c[size_t(i)] + b.c[size_t(i)];
    return x;
  }
  Elem neg(const Elem& a) const {
    Elem x = zero();
    for (int i = 0; i < d_; ++i) x.c[size_t(i)] = -a.c[size_t(i)];
    return x;
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem mul(const Elem& a, const Elem& b) const {
    // (a_i pi^i)(b_j pi^j) = a_i sigma^{ih}(b_j) pi^{i+j}, pi^d = w central
    Elem x = zero();
    const RElem w = RElem::uniformizer(L_);
    for (int i = 0; i < d_; ++i) {
      if (a.c[size_t(i)].is_zero()) continue;
      for (int j = 0; j < d_; ++j) {
        if (b.c[size_t(j)].is_zero()) continue;
        RElem term = a.c[size_t(i)] * sig_[size_t((i * h_) % d_)].apply(b.c[size_t(j)]);
        int K = i + j;
        if (K >= d_) {
          K -= d_;
          term = term * w;
        }
        x.c[size_t(K)] = x.c[size_t(K)] + term;
      }
    }
    return x;
  }
  bool equal(const Elem& a, const Elem& b) const {
    for (int i = 0; i < d_; ++i)
      if (!(a.c[size_t(i)] == b.c[size_t(i)])) return false;
    return true;
  }

  /** pi-adic valuation in D at storage precision: min(d * v_L(a_i) + i). */
  std::optional<i64> valuation(const Elem& a) const {
    std::optional<i64> best;
    for (int i = 0; i < d_; ++i) {
      auto v = a.c[size_t(i)].valuation();
      if (!v) continue;
      i64 cand = i64(d_) * *v + i;
      if (!best || cand < *best) best = cand;
    }
    return best;
  }

  /** Congruence mod p_D^k: every coefficient difference must have
   *  L-valuation at least ceil((k - i)/d).  A zero difference certifies
   *  valuation lF (full storage precision) and no more. */
  bool congruent(const Elem& a, const Elem& b, i64 k) const {
    for (int i = 0; i < d_; ++i) {
      i64 need = k - i;
      if (need <= 0) continue;
      i64 lneed = (need + d_ - 1) / d_;
      auto v = (a.c[size_t(i)] - b.c[size_t(i)]).valuation();
      i64 have = v ? i64(*v) : i64(lF_);
      if (have < lneed) return false;
    }
    return true;
  }

  /** Left-regular representation of one element: the d x d matrix over L
   *  with M[K][k] = sigma^{-Kh}(a_{(K-k) mod d}) * w^{[K < k]}, acting on
   *  right-L coordinates in the basis pi^0, ..., pi^{d-1}. */
  std::vector<std::vector<RElem>> regular_matrix(const Elem& a) const {
    std::vector<std::vector<RElem>> M(size_t(d_),
                                      std::vector<RElem>(size_t(d_), RElem::zero(L_)));
    const RElem w = RElem::uniformizer(L_);
    for (int K = 0; K < d_; ++K) {
      int s = ((-K * h_) % d_ + d_) % d_;
      for (int k = 0; k < d_; ++k) {
        RElem entry = sig_[size_t(s)].apply(a.c[size_t(((K - k) % d_ + d_) % d_)]);
        if (K < k) entry = entry * w;
        M[size_t(K)][size_t(k)] = entry;
      }
    }
    return M;
  }

  /** Block regular representation of an m x m matrix over D. */
  std::vector<std::vector<RElem>> regular_matrix(const std::vector<std::vector<Elem>>& g) const {
    int m = int(g.size());
    for (auto& row : g)
      if (int(row.size()) != m) throw domain_error("CyclicAlgebra: matrix not square");
    int N = m * d_;
    std::vector<std::vector<RElem>> M(size_t(N), std::vector<RElem>(size_t(N), RElem::zero(L_)));
    for (int s = 0; s < m; ++s)
      for (int t = 0; t < m; ++t) {
        auto blk = regular_matrix(g[size_t(s)][size_t(t)]);
        for (int K = 0; K < d_; ++K)
          for (int k = 0; k < d_; ++k) M[size_t(s * d_ + K)][size_t(t * d_ + k)] = blk[size_t(K)][size_t(k)];
      }
    return M;
  }

  /** Determinant of the regular representation, as an L-element.  Always
   *  Frobenius-fixed. */
  RElem norm_upstairs(const std::vector<std::vector<Elem>>& g) const {
    RElem det = ring_det(regular_matrix(g), L_);
    if (d_ > 1 && !(sig_[1].apply(det) == det))
      throw std::logic_error("CyclicAlgebra: norm is not Frobenius-fixed");
    return det;
  }

  /** Reduced norm of an m x m matrix over D, descended to the base ring.
   *  Exact at storage precision for honestly stored inputs; for classes mod
   *  p_D^r only the reduction to norm_precision() is canonical. */
  RElem reduced_norm(const std::vector<std::vector<Elem>>& g, u64 budget = 2000000) const {
    RElem det = norm_upstairs(g);
    for (const RElem& x : RElem::enumerate(F_, budget))
      if (embed_->apply(x) == det) return x;
    throw std::logic_error("CyclicAlgebra: norm did not descend");
  }
  RElem reduced_norm(const Elem& a, u64 budget = 2000000) const {
    return reduced_norm(std::vector<std::vector<Elem>>{{a}}, budget);
  }

  /** Invertibility of g mod p_D^r (unit determinant upstairs).  Throws when
   *  the determinant vanishes at storage precision: then the valuation is
   *  off the scale and the question is undecidable at this precision. */
  bool is_invertible(const std::vector<std::vector<Elem>>& g) const {
    RElem det = ring_det(regular_matrix(g), L_);
    auto v = det.valuation();
    if (!v) throw precision_error("CyclicAlgebra: determinant valuation exceeds precision", lF_);
    return *v == 0;
  }

 private:
  LocalFieldSpec base_;
  int d_;
  int h_;
  i64 r_;
  int lF_;
  RingPtr F_;
  RingPtr L_;
  std::unique_ptr<RingHom> embed_;
  std::vector<RingHom> sig_;
};

}  // namespace llpack
