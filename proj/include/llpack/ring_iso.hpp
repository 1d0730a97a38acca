#pragma once

/**
 * Homomorphisms between truncated local rings, and certified closeness
 * checks.
 *
 * A homomorphism is stored by the images of the coefficient generator and
 * the uniformizer; it acts Z-linearly on the additive basis
 * {gen^j pi^i : j < f, i < E}, whose coordinates are exactly the internal
 * storage of an element.  verify_hom runs the finite battery that makes the
 * linear extension a certified ring map:
 *   - additive orders of basis images divide the source orders
 *     (well-definedness of the Z-linear extension),
 *   - multiplicativity on all basis pairs (Z-bilinearity then gives full
 *     multiplicativity),
 *   - phi(1) = 1,
 *   - phi(pi^{l-1}) != 0, which forces injectivity because every ideal of
 *     the source is a power of (pi).
 * A surjectivity requirement is a cardinality comparison on top of that.
 *
 * closeness_witness searches the complete candidate space: the generator
 * must land on one of the Hensel lifts of the residue roots of the shared
 * minimal polynomial (those are ALL roots of it in the target), the
 * uniformizer on a valuation-1 element satisfying the mapped Eisenstein
 * relation.  Exhausting that space without a verified map is therefore a
 * proof of non-isomorphism, reported as a certificate string alongside the
 * cheap invariant mismatches (cardinality, residue field, additive
 * exponent).
 */

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "llpack/truncated_ring.hpp"

namespace llpack {

struct RingHom {
  RingPtr from;
  RingPtr to;
  RElem gen_img;
  RElem unif_img;
  std::vector<std::vector<RElem>> basis_img;  // [i][j] = gen_img^j * unif_img^i

  RElem apply(const RElem& x) const {
    if (x.ring()->signature() != from->signature())
      throw domain_error("RingHom::apply: element from a different ring");
    RElem acc = RElem::zero(to);
    const auto& raw = x.raw();
    for (int i = 0; i < from->storage_len(); ++i)
      for (int j = 0; j < from->f(); ++j) {
        i64 n = raw[size_t(i)][size_t(j)];
        if (n == 0) continue;
        acc = acc + RElem::from_integer(to, n) * basis_img[size_t(i)][size_t(j)];
      }
    return acc;
  }
};

inline RingHom make_hom(RingPtr from, RingPtr to, RElem gen_img, RElem unif_img) {
  RingHom h{std::move(from), std::move(to), std::move(gen_img), std::move(unif_img), {}};
  h.basis_img.assign(size_t(h.from->storage_len()),
                     std::vector<RElem>(size_t(h.from->f()), RElem::zero(h.to)));
  RElem upow = RElem::one(h.to);
  for (int i = 0; i < h.from->storage_len(); ++i) {
    RElem gpow = upow;
    for (int j = 0; j < h.from->f(); ++j) {
      h.basis_img[size_t(i)][size_t(j)] = gpow;
      gpow = gpow * h.gen_img;
    }
    upow = upow * h.unif_img;
  }
  return h;
}

/** Full verification battery; nullopt on success, else the failed property. */
inline std::optional<std::string> verify_hom(const RingHom& h, bool require_surjective) {
  const RingPtr& A = h.from;
  const RingPtr& B = h.to;
  // phi(1) = 1 holds by construction (basis_img[0][0] = 1) but is restated
  if (!(h.basis_img[0][0] == RElem::one(B))) return "unit image";
  // additive orders
  for (int i = 0; i < A->storage_len(); ++i) {
    i64 ord = ipow(A->p(), A->level(i));
    for (int j = 0; j < A->f(); ++j) {
      RElem img = h.basis_img[size_t(i)][size_t(j)];
      if (!(RElem::from_integer(B, ord) * img == RElem::zero(B))) return "additive order";
    }
  }
  // multiplicativity on basis pairs
  std::vector<RElem> abasis;
  RElem api = RElem::uniformizer(A);
  RElem ag = RElem::gen(A);
  RElem upow = RElem::one(A);
  for (int i = 0; i < A->storage_len(); ++i) {
    RElem gpow = upow;
    for (int j = 0; j < A->f(); ++j) {
      abasis.push_back(gpow);
      gpow = gpow * ag;
    }
    upow = upow * api;
  }
  std::vector<RElem> bimgs;
  for (int i = 0; i < A->storage_len(); ++i)
    for (int j = 0; j < A->f(); ++j) bimgs.push_back(h.basis_img[size_t(i)][size_t(j)]);
  for (size_t s = 0; s < abasis.size(); ++s)
    for (size_t t = s; t < abasis.size(); ++t) {
      RElem lhs = h.apply(abasis[s] * abasis[t]);
      RElem rhs = bimgs[s] * bimgs[t];
      if (!(lhs == rhs)) return "multiplicativity";
    }
  // injectivity: image of pi^{l-1} must not vanish
  RElem tail = h.apply(api.pow(A->l() - 1));
  if (A->l() >= 1 && tail == RElem::zero(B) && A->l() > 1) return "injectivity";
  if (A->l() == 1 && h.basis_img[0][0] == RElem::zero(B)) return "injectivity";
  if (require_surjective && A->cardinality() != B->cardinality()) return "cardinality";
  return std::nullopt;
}

/** Hensel-lift a simple residue root of an integer polynomial into the ring. */
inline RElem hensel_lift_root(const RingPtr& R, const std::vector<i64>& int_poly, int residue_root) {
  auto eval_poly = [&](const RElem& x) {
    RElem acc = RElem::zero(R);
    for (size_t k = int_poly.size(); k-- > 0;)
      acc = acc * x + RElem::from_integer(R, int_poly[k]);
    return acc;
  };
  auto eval_dpoly = [&](const RElem& x) {
    RElem acc = RElem::zero(R);
    for (size_t k = int_poly.size(); k-- > 1;)
      acc = acc * x + RElem::from_integer(R, i64(k) * int_poly[k]);
    return acc;
  };
  RElem x = RElem::from_residue(R, residue_root);
  RElem dfx = eval_dpoly(x);
  if (!dfx.is_unit()) throw domain_error("hensel_lift_root: multiple residue root");
  for (int it = 0; it < R->l() + 2; ++it) {
    RElem fx = eval_poly(x);
    if (fx == RElem::zero(R)) break;
    x = x - fx * eval_dpoly(x).inv();
  }
  if (!(eval_poly(x) == RElem::zero(R))) throw domain_error("hensel_lift_root: no convergence");
  return x;
}

/** Monic integer lift of the ring's coefficient modulus, degree f. */
inline std::vector<i64> modulus_poly(const RingPtr& R) {
  std::vector<i64> poly;
  for (int c : R->residue_field().modulus()) poly.push_back(c);
  poly.push_back(1);
  return poly;
}

/** All Hensel lifts in R of the residue roots of an integer polynomial,
 *  ordered by the packed residue-root value. */
inline std::vector<RElem> lifted_roots(const RingPtr& R, const std::vector<i64>& int_poly) {
  std::vector<i64> ipoly;
  for (i64 c : int_poly) ipoly.push_back(((c % R->p()) + R->p()) % R->p());
  std::vector<int> rroots = R->residue_field().roots_of_int_poly(ipoly);
  std::sort(rroots.begin(), rroots.end());
  std::vector<RElem> out;
  for (int r : rroots) out.push_back(hensel_lift_root(R, int_poly, r));
  return out;
}

struct CloseCheck {
  bool close = false;
  std::string certificate;
  std::optional<RingHom> witness;
};

/** Mapped Eisenstein relation of A evaluated at (gen_img, u) inside B. */
inline RElem eisenstein_defect(const RingPtr& A, const RingPtr& B, const RElem& gen_img,
                               const RElem& u) {
  RElem acc = u.pow(A->estar());
  if (A->spec().characteristic == FieldChar::Mixed) {
    if (A->spec().e == 1) {
      // unramified: the uniformizer is p itself
      acc = u - RElem::from_integer(B, A->p());
    } else {
      for (int i = 0; i < A->spec().e; ++i) {
        RElem c = RElem::zero(B);
        RElem gp = RElem::one(B);
        for (size_t j = 0; j < A->spec().eisenstein[size_t(i)].size(); ++j) {
          c = c + RElem::from_integer(B, A->spec().eisenstein[size_t(i)][j]) * gp;
          gp = gp * gen_img;
        }
        acc = acc + c * u.pow(i);
      }
    }
  }
  // equal characteristic: relation is pi^{l} = 0, automatic for valuation >= 1
  return acc;
}

/**
 * Certified check whether A and B are isomorphic as rings, with either a
 * verified witness or a non-isomorphism certificate.
 */
inline CloseCheck closeness_witness(const RingPtr& A, const RingPtr& B, u64 budget = 2000000) {
  CloseCheck res;
  if (A->cardinality() != B->cardinality()) {
    std::ostringstream os;
    os << "cardinality " << A->cardinality() << " != " << B->cardinality();
    res.certificate = os.str();
    return res;
  }
  if (A->p() != B->p() || A->f() != B->f()) {
    std::ostringstream os;
    os << "residue field F_" << A->q() << " != F_" << B->q();
    res.certificate = os.str();
    return res;
  }
  if (A->additive_exponent() != B->additive_exponent()) {
    std::ostringstream os;
    os << "additive exponent " << A->additive_exponent() << " != " << B->additive_exponent();
    res.certificate = os.str();
    return res;
  }
  // candidate generator images: all roots of the shared modulus in B
  std::vector<RElem> gens = lifted_roots(B, modulus_poly(A));
  // candidate uniformizer images: valuation-1 elements satisfying the mapped
  // Eisenstein relation, in enumeration order
  std::vector<RElem> all = RElem::enumerate(B, budget);
  for (const RElem& g : gens) {
    for (const RElem& u : all) {
      auto v = u.valuation();
      if (!v.has_value() || *v != 1) {
        if (B->l() == 1 && u == RElem::zero(B)) {
          // at l = 1 the uniformizer is 0
        } else {
          continue;
        }
      }
      if (!(eisenstein_defect(A, B, g, u) == RElem::zero(B))) continue;
      RingHom h = make_hom(A, B, g, u);
      if (!verify_hom(h, true).has_value()) {
        res.close = true;
        res.certificate = "witness";
        res.witness = std::move(h);
        return res;
      }
    }
  }
  res.certificate = "exhausted candidate maps";
  return res;
}

/** Verified embedding of a ring into one with larger residue field
 *  (same p, l, and compatible uniformizer). */
inline RingHom unramified_embedding(const RingPtr& A, const RingPtr& B, u64 budget = 2000000) {
  if (A->p() != B->p() || B->f() % A->f() != 0 || A->l() != B->l())
    throw domain_error("unramified_embedding: incompatible towers");
  std::vector<RElem> gens = lifted_roots(B, modulus_poly(A));
  if (gens.empty()) throw domain_error("unramified_embedding: modulus has no roots in target");
  // prefer the target's own uniformizer, then fall back to a search
  std::vector<RElem> candidates{RElem::uniformizer(B)};
  for (const RElem& g : gens) {
    for (const RElem& u : candidates) {
      if (!(eisenstein_defect(A, B, g, u) == RElem::zero(B))) continue;
      RingHom h = make_hom(A, B, g, u);
      if (!verify_hom(h, false).has_value()) return h;
    }
  }
  // full search (rare path: uniformizer conventions differ)
  std::vector<RElem> all = RElem::enumerate(B, budget);
  for (const RElem& g : gens) {
    for (const RElem& u : all) {
      auto v = u.valuation();
      bool val_ok = (v.has_value() && *v == 1) || (B->l() == 1 && u == RElem::zero(B));
      if (!val_ok) continue;
      if (!(eisenstein_defect(A, B, g, u) == RElem::zero(B))) continue;
      RingHom h = make_hom(A, B, g, u);
      if (!verify_hom(h, false).has_value()) return h;
    }
  }
  throw domain_error("unramified_embedding: no verified embedding found");
}

/** Canonical projection to the same spec at lower precision. */
inline RElem reduce_precision(const RElem& x, const RingPtr& low) {
  if (low->l() > x.ring()->l()) throw domain_error("reduce_precision: target is finer");
  std::vector<int> ds = x.digits();
  ds.resize(size_t(low->l()));
  return RElem::from_digits(low, ds);
}

}  // namespace llpack
