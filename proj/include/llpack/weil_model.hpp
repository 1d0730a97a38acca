#pragma once

/**
 * Finite models of Weil groups with ramification data.
 *
 * A model is a finite group W, an inertia subgroup I normal in W with W/I
 * cyclic and a chosen Frobenius representative generating that quotient, and
 * a descending filtration G_0 = I >= G_1 >= ... >= G_m >= {1} in the lower
 * numbering.  Every G_i is required to be normal in all of W: that makes the
 * fixed space of any irreducible W-representation under G_i either 0 or
 * everything, which is what the break/conductor bookkeeping uses.
 *
 * The transition function phi is Serre's piecewise-linear integral
 *   phi(u) = integral_0^u dt / [G_0 : G_t]
 * evaluated in exact rational arithmetic, with psi its inverse.  For an
 * irreducible character the break is phi(c) with c the largest index whose
 * filtration step acts nontrivially; the Swan conductor is dim * phi(c) and
 * doubles as a cross-check against the general fixed-space sum
 *   swan = sum_{i>=1} (|G_i|/|G_0|) (dim - dim^{G_i}),
 * which is also what reducible characters use.  Artin adds the inertia
 * coinvariant defect dim - dim^{G_0}.
 */

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "llpack/char_table.hpp"
#include "llpack/common.hpp"
#include "llpack/finite_group.hpp"

namespace llpack {

inline i64 rat_floor(const Rat& r) {
  i64 q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

class WeilModel {
 public:
  WeilModel(FiniteGroup W, std::vector<int> inertia, int frob,
            std::vector<std::vector<int>> filtration)
      : W_(std::move(W)), inertia_(std::move(inertia)), frob_(frob), filt_(std::move(filtration)) {
    std::sort(inertia_.begin(), inertia_.end());
    if (!W_.is_subgroup(inertia_)) throw domain_error("WeilModel: inertia is not a subgroup");
    if (!W_.is_normal(inertia_)) throw domain_error("WeilModel: inertia is not normal");
    if (frob_ < 0 || frob_ >= W_.order()) throw domain_error("WeilModel: bad Frobenius index");
    // W/I must be cyclic and generated by the Frobenius class
    auto q = W_.quotient(inertia_);
    int fimg = q.proj[size_t(frob_)];
    if (q.group.element_order(fimg) != q.group.order())
      throw domain_error("WeilModel: Frobenius does not generate W/I");
    if (filt_.empty()) throw domain_error("WeilModel: filtration must start at inertia");
    for (auto& g : filt_) std::sort(g.begin(), g.end());
    if (filt_[0] != inertia_) throw domain_error("WeilModel: filtration must start at inertia");
    for (size_t i = 0; i < filt_.size(); ++i) {
      if (!W_.is_subgroup(filt_[i])) throw domain_error("WeilModel: filtration step not a subgroup");
      if (!W_.is_normal(filt_[i])) throw domain_error("WeilModel: filtration step not normal in W");
      if (i + 1 < filt_.size()) {
        for (int x : filt_[i + 1])
          if (!std::binary_search(filt_[i].begin(), filt_[i].end(), x))
            throw domain_error("WeilModel: filtration not descending");
      }
    }
    // normalize: ensure the chain ends at the trivial group
    if (filt_.back().size() != 1) filt_.push_back({W_.id()});
  }

  const FiniteGroup& group() const { return W_; }
  const std::vector<int>& inertia() const { return inertia_; }
  int frobenius() const { return frob_; }
  /** G_i (trivial beyond the stored chain). */
  const std::vector<int>& filtration_step(int i) const {
    static const std::vector<int> trivial{0};
    if (i < 0) throw domain_error("filtration_step: negative index");
    if (size_t(i) >= filt_.size()) return trivial;
    return filt_[size_t(i)];
  }
  int filtration_length() const { return int(filt_.size()); }
  bool totally_unramified() const { return inertia_.size() == 1; }

  i64 g(int i) const { return i64(filtration_step(i).size()); }

  /** Serre transition function, exact. */
  Rat phi(const Rat& u) const {
    if (u < Rat(0)) throw domain_error("phi: negative argument");
    Rat acc(0);
    Rat g0(g(0));
    int i = 1;
    Rat left(0);
    while (true) {
      Rat right(i);
      Rat slope = Rat(g(i)) / g0;
      if (u <= right) return acc + (u - left) * slope;
      acc += (right - left) * slope;
      left = right;
      ++i;
      if (i > filtration_length() + 2) {
        // beyond the chain the slope is constant 1/g0
        return acc + (u - left) * (Rat(1) / g0);
      }
    }
  }

  /** Inverse transition function, exact. */
  Rat psi(const Rat& v) const {
    if (v < Rat(0)) throw domain_error("psi: negative argument");
    Rat acc(0);  // phi value at the left endpoint
    Rat g0(g(0));
    int i = 1;
    Rat left(0);
    while (true) {
      Rat slope = Rat(g(i)) / g0;
      Rat right_acc = acc + slope;  // phi at u = i
      if (v <= right_acc) return left + (v - acc) / slope;
      acc = right_acc;
      left = Rat(i);
      ++i;
      if (i > filtration_length() + 2) return left + (v - acc) / (Rat(1) / g0);
    }
  }

  /** Exact fixed-space dimension of a character under a subgroup. */
  i64 dim_fixed(const CharTable& T, const std::vector<i64>& chi, const std::vector<int>& H) const {
    i64 ell = T.ell;
    i64 acc = 0;
    for (int h : H) acc = (acc + chi[size_t(T.class_of[size_t(h)])]) % ell;
    acc = mulmod(acc, invmod(i64(H.size()) % ell, ell), ell);
    // the true dimension is a small integer; recover it from its residue
    i64 dim_bound = W_.order();
    for (i64 d = 0; d <= dim_bound; ++d)
      if (d % ell == acc) return d;
    throw domain_error("dim_fixed: dimension recovery failed");
  }

  /** Largest i with G_i not inside ker(chi); -1 if even G_0 acts trivially. */
  int break_index(const CharTable& T, const std::vector<i64>& chi, i64 dim) const {
    int c = -1;
    for (int i = 0; i < filtration_length(); ++i) {
      if (i64(filtration_step(i).size()) == 1) break;
      if (dim_fixed(T, chi, filtration_step(i)) < dim) c = i;
    }
    return c;
  }

  struct BreakInfo {
    bool unramified = false;  // inertia inside the kernel
    Rat depth{0};             // phi(c); 0 when tame or unramified
  };

  /** Depth (= break) of an irreducible character. */
  BreakInfo break_of(const CharTable& T, int irrep) const {
    const std::vector<i64>& chi = T.chi[size_t(irrep)];
    i64 dim = T.dims[size_t(irrep)];
    int c = break_index(T, chi, dim);
    BreakInfo b;
    if (c < 0) {
      b.unramified = true;
      b.depth = Rat(0);
      return b;
    }
    b.depth = phi(Rat(c));
    return b;
  }

  /** Swan conductor by the fixed-space sum (valid for any character). */
  Rat swan_general(const CharTable& T, const std::vector<i64>& chi, i64 dim) const {
    Rat acc(0);
    Rat g0(g(0));
    for (int i = 1; i < filtration_length(); ++i) {
      if (i64(filtration_step(i).size()) == 1) break;
      i64 fixed = dim_fixed(T, chi, filtration_step(i));
      acc += (Rat(g(i)) / g0) * Rat(dim - fixed);
    }
    return acc;
  }

  /** Swan conductor of an irreducible as dim * phi(break index). */
  Rat swan_irreducible(const CharTable& T, int irrep) const {
    int c = break_index(T, T.chi[size_t(irrep)], T.dims[size_t(irrep)]);
    if (c < 0) return Rat(0);
    return Rat(T.dims[size_t(irrep)]) * phi(Rat(c));
  }

  Rat artin(const CharTable& T, const std::vector<i64>& chi, i64 dim) const {
    i64 fixed0 = dim_fixed(T, chi, filtration_step(0));
    return swan_general(T, chi, dim) + Rat(dim - fixed0);
  }

 private:
  FiniteGroup W_;
  std::vector<int> inertia_;
  int frob_;
  std::vector<std::vector<int>> filt_;
};

inline WeilModel make_weil_model(FiniteGroup W, std::vector<int> inertia, int frob,
                                 std::vector<std::vector<int>> filtration) {
  return WeilModel(std::move(W), std::move(inertia), frob, std::move(filtration));
}

// ---- depth/level bookkeeping shared by the parameter layers ----

/** A representation of depth d factors through the level-l quotient iff l > d
 *  (levels are counted from 1; depth-0 objects need level 1). */
inline bool factors_through_level(const Rat& depth, int level) {
  if (level < 1) throw domain_error("factors_through_level: level must be >= 1");
  return Rat(level) > depth;
}

/** Smallest usable level for a given depth: floor(d) + 1. */
inline int min_level(const Rat& depth) {
  if (depth < Rat(0)) throw domain_error("min_level: negative depth");
  return int(rat_floor(depth)) + 1;
}

/** Ring precision at which degree-n objects of level r transfer between
 *  matching towers: 2^{n-1} r + 1. */
inline i64 close_field_level_bound(int n, i64 r) {
  if (n < 1 || r < 0) throw domain_error("close_field_level_bound: bad arguments");
  return ipow(2, n - 1) * r + 1;
}

/** The bound above is backed by an explicit construction only in the split
 *  (matrix algebra) case; for genuinely noncommutative forms it is a
 *  compatibility statement without a constructive witness. */
inline bool close_field_bound_is_constructive(int d) { return d == 1; }

/** Depth of a supercuspidal of GL_n with conductor exponent f: f/n - 1.
 *  The unramified GL_1 case (n=1, f=0) has depth 0. */
inline Rat depth_of_supercuspidal(int n, i64 f) {
  if (n == 1 && f == 0) return Rat(0);
  if (n < 1 || f < n) throw domain_error("depth_of_supercuspidal: conductor below n");
  return Rat(f, n) - Rat(1);
}

/** Period of the hereditary order attached to (n, f): n / gcd(n, f). */
inline i64 hereditary_period(int n, i64 f) {
  if (n < 1) throw domain_error("hereditary_period: bad n");
  return i64(n) / std::gcd(i64(n), f);
}

// ---- ramification profiles ----

/** The upper-numbering break data of a representation: a list of
 *  (break, dimension) jumps for the non-fixed part plus the dimension of the
 *  inertia-fixed subspace.  Breaks are nonnegative, strictly increasing; a
 *  break-0 jump is the tamely ramified part. */
struct RamificationProfile {
  std::vector<std::pair<Rat, i64>> jumps;
  i64 fixed_dim = 0;
  i64 total_dim = 0;

  RamificationProfile(std::vector<std::pair<Rat, i64>> j, i64 fixed, i64 total)
      : jumps(std::move(j)), fixed_dim(fixed), total_dim(total) {
    if (fixed_dim < 0 || total_dim < 1) throw domain_error("RamificationProfile: bad dimensions");
    std::sort(jumps.begin(), jumps.end());
    i64 s = fixed_dim;
    for (size_t i = 0; i < jumps.size(); ++i) {
      if (jumps[i].first < Rat(0) || jumps[i].second < 1)
        throw domain_error("RamificationProfile: bad jump");
      if (i > 0 && jumps[i].first == jumps[i - 1].first)
        throw domain_error("RamificationProfile: repeated break");
      s += jumps[i].second;
    }
    if (s != total_dim) throw domain_error("RamificationProfile: dimensions do not sum");
  }

  bool unramified() const { return jumps.empty(); }
  Rat max_break() const { return jumps.empty() ? Rat(0) : jumps.back().first; }
};

/** Profile of an irreducible character of a Weil model: for a ramified
 *  irreducible the whole space sits at the single upper break phi(c). */
inline RamificationProfile profile_of_irreducible(const WeilModel& M, const CharTable& T,
                                                  int irrep) {
  i64 dim = T.dims[size_t(irrep)];
  auto b = M.break_of(T, irrep);
  if (b.unramified) return RamificationProfile({}, dim, dim);
  return RamificationProfile({{b.depth, dim}}, 0, dim);
}

inline RamificationProfile profile_direct_sum(const RamificationProfile& a,
                                              const RamificationProfile& b) {
  std::map<Rat, i64> merged;
  for (auto& j : a.jumps) merged[j.first] += j.second;
  for (auto& j : b.jumps) merged[j.first] += j.second;
  std::vector<std::pair<Rat, i64>> jumps(merged.begin(), merged.end());
  return RamificationProfile(std::move(jumps), a.fixed_dim + b.fixed_dim,
                             a.total_dim + b.total_dim);
}

/** Swan conductor from a profile: sum of break * dimension over the jumps. */
inline Rat swan_conductor(const RamificationProfile& p) {
  Rat s(0);
  for (auto& j : p.jumps) s += j.first * Rat(j.second);
  return s;
}

/** Artin conductor: swan plus the codimension of the inertia-fixed part. */
inline Rat artin_conductor(const RamificationProfile& p) {
  return swan_conductor(p) + Rat(p.total_dim - p.fixed_dim);
}

/** Exponent of the epsilon factor's q^{-s} power; identical to the Artin
 *  conductor by definition. */
inline Rat epsilon_degree(const RamificationProfile& p) { return artin_conductor(p); }

/** Depth of the parameter carried by a profile: 0 when inertia acts
 *  trivially, otherwise swan / dim.  For the single-break profiles of
 *  irreducible pieces this equals the break, so the representation factors
 *  through the level-l quotient iff l > depth. */
inline Rat depth_of_parameter(const RamificationProfile& p) {
  if (p.unramified()) return Rat(0);
  return swan_conductor(p) / Rat(p.total_dim);
}

}  // namespace llpack
