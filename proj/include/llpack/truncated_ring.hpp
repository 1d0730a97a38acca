#pragma once

/**
 * Exact arithmetic in truncated local rings o_F / p_F^l.
 *
 * A ring is described by a LocalFieldSpec (residue characteristic p, residue
 * degree f, equal or mixed characteristic, ramification index e, Eisenstein
 * data for ramified mixed extensions) plus a precision l >= 1.
 *
 * Internal form: an element is sum_{i<E} a_i pi^i with E = min(e*, l) and
 * a_i in the unramified coefficient ring Z/p^{m_i}[x]/(lift of the residue
 * modulus), m_i = ceil((l-i)/e*).  Here e* = e for mixed characteristic and
 * e* = l for equal characteristic, where the Eisenstein relation degenerates
 * to pi^l = 0; with m_i = 1 throughout, the coefficients are residue-field
 * elements and the arithmetic is plain truncated F_q[u] arithmetic.  The
 * cardinality is q^l in every case because sum_i m_i = l.
 *
 * Elements also expose a canonical digit expansion sum_j D_j pi^j with D_j a
 * residue-field representative (integer-coefficient polynomial in the
 * generator with coefficients in [0,p)); this is the serialization form and
 * the common currency between rings of different characteristic.
 */

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "llpack/common.hpp"
#include "llpack/fq.hpp"

namespace llpack {

enum class FieldChar { Equal, Mixed };

struct LocalFieldSpec {
  i64 p = 2;
  int f = 1;
  FieldChar characteristic = FieldChar::Equal;
  int e = 1;
  // Eisenstein coefficients c_0..c_{e-1} (of pi^e + c_{e-1}pi^{e-1} + ... + c_0),
  // each an integer coefficient vector of length f over the unramified
  // coefficient ring.  Required iff mixed characteristic with e > 1.
  std::vector<std::vector<i64>> eisenstein;
  std::string uniformizer = "t";
  std::string name;  // optional display label

  std::string describe() const {
    std::ostringstream os;
    os << (characteristic == FieldChar::Equal ? "equal" : "mixed") << " p=" << p
       << " f=" << f << " e=" << e;
    return os.str();
  }
};

namespace detail {

inline i64 vp_int(i64 x, i64 p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace detail

class TruncatedRing : public std::enable_shared_from_this<TruncatedRing> {
 public:
  using Coeff = std::vector<i64>;  // length f, entries in [0, p^{m_i})

  TruncatedRing(LocalFieldSpec spec, int l) : spec_(std::move(spec)), l_(l), fq_(spec_.p, spec_.f) {
    if (l_ < 1) throw domain_error("make_ring: precision l must be >= 1");
    if (spec_.e < 1) throw domain_error("make_ring: ramification index e must be >= 1");
    if (spec_.characteristic == FieldChar::Equal) {
      estar_ = l_;
    } else {
      estar_ = spec_.e;
      if (spec_.e > 1) {
        if (int(spec_.eisenstein.size()) != spec_.e)
          throw domain_error("make_ring: eisenstein data must list c_0..c_{e-1}");
        // Exact integer-level validation: v_p(c_0) = 1, v_p(c_i) >= 1.
        for (int i = 0; i < spec_.e; ++i) {
          if (int(spec_.eisenstein[size_t(i)].size()) > spec_.f)
            throw domain_error("make_ring: eisenstein coefficient longer than f");
          i64 v = 64;
          for (i64 c : spec_.eisenstein[size_t(i)]) v = std::min(v, detail::vp_int(c, spec_.p, 64));
          if (i == 0 && v != 1)
            throw domain_error("make_ring: eisenstein constant term must have valuation exactly 1");
          if (i > 0 && v < 1)
            throw domain_error("make_ring: eisenstein coefficients must have valuation >= 1");
        }
      }
    }
    bigM_ = (l_ + estar_ - 1) / estar_;
    pM_ = ipow(spec_.p, bigM_);
    E_ = std::min(estar_, l_);
    mlev_.resize(size_t(E_));
    for (int i = 0; i < E_; ++i) mlev_[size_t(i)] = (l_ - i + estar_ - 1) / estar_;
    // internal Eisenstein coefficients at precision M
    eis_.assign(size_t(estar_ <= 2 * l_ ? estar_ : 0), Coeff(size_t(spec_.f), 0));
    if (spec_.characteristic == FieldChar::Mixed) {
      if (spec_.e == 1) {
        // unramified: pi = p itself; relation pi - p = 0 i.e. c_0 = -p
        if (!eis_.empty()) {
          eis_[0] = Coeff(size_t(spec_.f), 0);
          eis_[0][0] = ((-spec_.p) % pM_ + pM_) % pM_;
        }
      } else {
        for (int i = 0; i < spec_.e && i < int(eis_.size()); ++i) {
          Coeff c(size_t(spec_.f), 0);
          for (int j = 0; j < spec_.f && j < int(spec_.eisenstein[size_t(i)].size()); ++j)
            c[size_t(j)] = ((spec_.eisenstein[size_t(i)][size_t(j)] % pM_) + pM_) % pM_;
          eis_[size_t(i)] = c;
        }
      }
    }
    std::ostringstream os;
    os << spec_.describe() << " l=" << l_;
    signature_ = os.str();
  }

  const LocalFieldSpec& spec() const { return spec_; }
  int l() const { return l_; }
  i64 p() const { return spec_.p; }
  int f() const { return spec_.f; }
  i64 q() const { return fq_.q(); }
  int estar() const { return estar_; }
  int storage_len() const { return E_; }
  int level(int i) const { return mlev_[size_t(i)]; }
  int bigM() const { return bigM_; }
  const FqField& residue_field() const { return fq_; }
  const std::string& signature() const { return signature_; }

  /** Additive exponent of the ring: p^{ceil(l/e*)}. */
  i64 additive_exponent() const { return pM_; }

  i64 cardinality() const {
    i64 c = 1;
    for (int i = 0; i < E_; ++i) c *= ipow(spec_.p, spec_.f * mlev_[size_t(i)]);
    return c;
  }

  // ---- raw coefficient-vector arithmetic (length E_, GR entries length f) ----

  using Raw = std::vector<Coeff>;

  Raw raw_zero() const { return Raw(size_t(E_), Coeff(size_t(spec_.f), 0)); }

  Raw canonicalize(Raw a) const {
    a.resize(size_t(E_), Coeff(size_t(spec_.f), 0));
    for (int i = 0; i < E_; ++i) {
      i64 mod = ipow(spec_.p, mlev_[size_t(i)]);
      for (auto& c : a[size_t(i)]) c = ((c % mod) + mod) % mod;
      a[size_t(i)].resize(size_t(spec_.f), 0);
    }
    return a;
  }

  Coeff gr_add(const Coeff& a, const Coeff& b, i64 mod) const {
    Coeff r(size_t(spec_.f));
    for (int j = 0; j < spec_.f; ++j) r[size_t(j)] = (a[size_t(j)] + b[size_t(j)]) % mod;
    return r;
  }
  Coeff gr_neg(const Coeff& a, i64 mod) const {
    Coeff r(size_t(spec_.f));
    for (int j = 0; j < spec_.f; ++j) r[size_t(j)] = ((mod - a[size_t(j)]) % mod);
    return r;
  }
  Coeff gr_mul(const Coeff& a, const Coeff& b, i64 mod) const {
    std::vector<i64> c(size_t(2 * spec_.f - 1), 0);
    for (int i = 0; i < spec_.f; ++i)
      for (int j = 0; j < spec_.f; ++j)
        c[size_t(i + j)] = (c[size_t(i + j)] + mulmod(a[size_t(i)], b[size_t(j)], mod)) % mod;
    // reduce by monic lift of the residue modulus
    const std::vector<int>& md = fq_.modulus();
    for (int k = 2 * spec_.f - 2; k >= spec_.f; --k) {
      i64 cc = c[size_t(k)];
      if (cc == 0) continue;
      for (int i = 0; i < spec_.f; ++i) {
        size_t idx = size_t(k - spec_.f + i);
        c[idx] = ((c[idx] - mulmod(cc, md[size_t(i)], mod)) % mod + mod) % mod;
      }
      c[size_t(k)] = 0;
    }
    c.resize(size_t(spec_.f));
    return c;
  }
  /** Newton inverse of a GR unit (nonzero mod p). */
  Coeff gr_inv(const Coeff& a, i64 mod, int m) const {
    int a0 = fq_res(a);
    if (a0 == 0) throw domain_error("gr_inv: not a unit");
    Coeff y = coeff_from_fq(fq_.inv(a0));
    for (int it = 0; it < m + 2; ++it) {
      Coeff ay = gr_mul(a, y, mod);
      Coeff two = Coeff(size_t(spec_.f), 0);
      two[0] = 2 % mod;
      Coeff t = gr_add(two, gr_neg(ay, mod), mod);
      y = gr_mul(y, t, mod);
    }
    return y;
  }
  int fq_res(const Coeff& a) const {
    std::vector<int> d(size_t(spec_.f));
    for (int j = 0; j < spec_.f; ++j) d[size_t(j)] = int(a[size_t(j)] % spec_.p);
    return fq_.from_digits(d);
  }
  Coeff coeff_from_fq(int x) const {
    std::vector<int> d = fq_.digits(x);
    Coeff c(size_t(spec_.f));
    for (int j = 0; j < spec_.f; ++j) c[size_t(j)] = d[size_t(j)];
    return c;
  }
  i64 gr_vp(const Coeff& a, int cap) const {
    i64 v = cap;
    for (i64 c : a) v = std::min(v, detail::vp_int(c, spec_.p, cap));
    return v;
  }

  Raw raw_add(const Raw& a, const Raw& b) const {
    Raw r = raw_zero();
    for (int i = 0; i < E_; ++i) r[size_t(i)] = gr_add(a[size_t(i)], b[size_t(i)], pM_);
    return canonicalize(std::move(r));
  }
  Raw raw_neg(const Raw& a) const {
    Raw r = raw_zero();
    for (int i = 0; i < E_; ++i) r[size_t(i)] = gr_neg(a[size_t(i)], pM_);
    return canonicalize(std::move(r));
  }
  Raw raw_mul(const Raw& a, const Raw& b) const {
    int top = 2 * E_ - 1;
    std::vector<Coeff> c(size_t(top), Coeff(size_t(spec_.f), 0));
    for (int i = 0; i < E_; ++i)
      for (int j = 0; j < E_; ++j) {
        Coeff prod = gr_mul(a[size_t(i)], b[size_t(j)], pM_);
        c[size_t(i + j)] = gr_add(c[size_t(i + j)], prod, pM_);
      }
    // Eisenstein reduction pi^{e*} = -(c_0 + ... + c_{e*-1} pi^{e*-1})
    for (int k = int(c.size()) - 1; k >= estar_; --k) {
      Coeff cc = c[size_t(k)];
      bool zero = true;
      for (i64 v : cc)
        if (v != 0) zero = false;
      if (zero) continue;
      c[size_t(k)] = Coeff(size_t(spec_.f), 0);
      if (!eis_.empty()) {
        for (int i = 0; i < estar_; ++i) {
          Coeff t = gr_mul(cc, eis_[size_t(i)], pM_);
          size_t idx = size_t(k - estar_ + i);
          c[idx] = gr_add(c[idx], gr_neg(t, pM_), pM_);
        }
      }
      // with zero Eisenstein data (equal characteristic) the term just truncates
    }
    c.resize(size_t(E_), Coeff(size_t(spec_.f), 0));
    return canonicalize(std::move(c));
  }

  /** pi-adic valuation of a canonical raw vector; nullopt means >= l. */
  std::optional<int> raw_valuation(const Raw& a) const {
    i64 best = -1;
    for (int i = 0; i < E_; ++i) {
      i64 v = gr_vp(a[size_t(i)], mlev_[size_t(i)]);
      if (v >= mlev_[size_t(i)]) continue;  // zero at this level
      i64 val = i64(estar_) * v + i;
      if (best < 0 || val < best) best = val;
    }
    if (best < 0) return std::nullopt;
    return int(best);
  }

  /** Divide a canonical raw vector (valuation >= 1, taken at precision l_cur)
   *  by the uniformizer; result is valid at precision l_cur - 1. */
  Raw raw_div_pi(const Raw& a, int l_cur) const {
    if (l_cur < 2) throw domain_error("raw_div_pi: precision exhausted");
    Raw b = raw_zero();
    if (estar_ >= l_cur) {
      // no wrap: plain shift; position 0 must vanish at its level
      for (int i = 0; i + 1 < E_; ++i) b[size_t(i)] = a[size_t(i + 1)];
      b[size_t(E_ - 1)] = Coeff(size_t(spec_.f), 0);
    } else {
      int mc = (l_cur + estar_ - 1) / estar_;  // coefficient precision at l_cur
      i64 pmc = ipow(spec_.p, mc);
      // b_{e-1} = -(a_0/p) * (c_0/p)^{-1} at precision mc-1
      i64 pm1 = pmc / spec_.p;
      Coeff a0p(size_t(spec_.f)), c0p(size_t(spec_.f));
      for (int j = 0; j < spec_.f; ++j) {
        i64 aj = a[0][size_t(j)] % pmc;
        if (aj % spec_.p != 0) throw domain_error("raw_div_pi: element has valuation 0");
        a0p[size_t(j)] = (aj / spec_.p) % pm1;
        c0p[size_t(j)] = (eis_[0][size_t(j)] / spec_.p) % pm1;
      }
      Coeff u_inv = gr_inv(c0p, pm1, mc);
      Coeff btop = gr_neg(gr_mul(a0p, u_inv, pm1), pm1);
      b[size_t(estar_ - 1)] = btop;
      for (int j = 1; j < estar_; ++j) {
        Coeff t = gr_mul(btop, eis_[size_t(j)], pM_);
        Coeff aj = (j < E_) ? a[size_t(j)] : Coeff(size_t(spec_.f), 0);
        b[size_t(j - 1)] = gr_add(aj, t, pM_);
      }
    }
    return b;
  }

 private:
  LocalFieldSpec spec_;
  int l_;
  FqField fq_;
  int estar_ = 1;
  int bigM_ = 1;
  i64 pM_ = 2;
  int E_ = 1;
  std::vector<int> mlev_;
  std::vector<Coeff> eis_;
  std::string signature_;
};

using RingPtr = std::shared_ptr<const TruncatedRing>;

inline RingPtr make_ring(const LocalFieldSpec& spec, int l) {
  return std::make_shared<TruncatedRing>(spec, l);
}

class RElem {
 public:
  RElem() = default;
  RElem(RingPtr ring, TruncatedRing::Raw raw) : ring_(std::move(ring)), raw_(std::move(raw)) {
    raw_ = ring_->canonicalize(std::move(raw_));
  }

  const RingPtr& ring() const { return ring_; }
  const TruncatedRing::Raw& raw() const { return raw_; }

  bool is_zero() const {
    for (const auto& c : raw_)
      for (i64 v : c)
        if (v != 0) return false;
    return true;
  }

  std::optional<int> valuation() const { return ring_->raw_valuation(raw_); }

  bool is_unit() const {
    auto v = valuation();
    return v.has_value() && *v == 0;
  }

  /** Canonical digit expansion: l residue-field digits, little-endian in pi. */
  std::vector<int> digits() const {
    std::vector<int> out;
    TruncatedRing::Raw cur = raw_;
    int l = ring_->l();
    for (int j = 0; j < l; ++j) {
      int l_cur = l - j;
      // residue of position 0
      int d = ring_->fq_res(cur[0]);
      out.push_back(d);
      if (l_cur == 1) break;
      // subtract lift and divide by pi
      TruncatedRing::Raw lift = ring_->raw_zero();
      lift[0] = ring_->coeff_from_fq(d);
      i64 pmc = ipow(ring_->p(), (l_cur + ring_->estar() - 1) / ring_->estar());
      cur[0] = ring_->gr_add(cur[0], ring_->gr_neg(lift[0], pmc), pmc);
      cur = ring_->raw_div_pi(cur, l_cur);
    }
    while (int(out.size()) < l) out.push_back(0);
    return out;
  }

  std::string key() const {
    std::ostringstream os;
    for (int d : digits()) os << d << ",";
    return os.str();
  }

  friend bool operator==(const RElem& a, const RElem& b) {
    return a.ring_->signature() == b.ring_->signature() && a.raw_ == b.raw_;
  }
  friend bool operator!=(const RElem& a, const RElem& b) { return !(a == b); }

  friend RElem operator+(const RElem& a, const RElem& b) {
    a.check(b);
    return RElem(a.ring_, a.ring_->raw_add(a.raw_, b.raw_));
  }
  friend RElem operator-(const RElem& a, const RElem& b) {
    a.check(b);
    return RElem(a.ring_, a.ring_->raw_add(a.raw_, a.ring_->raw_neg(b.raw_)));
  }
  friend RElem operator-(const RElem& a) { return RElem(a.ring_, a.ring_->raw_neg(a.raw_)); }
  friend RElem operator*(const RElem& a, const RElem& b) {
    a.check(b);
    return RElem(a.ring_, a.ring_->raw_mul(a.raw_, b.raw_));
  }

  RElem pow(i64 e) const {
    if (e < 0) throw domain_error("RElem::pow: negative exponent");
    RElem r = one(ring_);
    RElem base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  /** Inverse of a unit (Newton iteration from the residue inverse). */
  RElem inv() const {
    if (!is_unit()) throw domain_error("RElem::inv: not a unit");
    int d0 = ring_->fq_res(raw_[0]);
    RElem y = from_residue(ring_, ring_->residue_field().inv(d0));
    RElem two = from_integer(ring_, 2);
    for (int it = 0; it < ring_->l() + 2; ++it) y = y * (two - *this * y);
    if (!((*this * y) == one(ring_))) throw domain_error("RElem::inv: iteration failed");
    return y;
  }

  static RElem zero(const RingPtr& r) { return RElem(r, r->raw_zero()); }
  static RElem one(const RingPtr& r) { return from_integer(r, 1); }
  static RElem from_integer(const RingPtr& r, i64 n) {
    auto raw = r->raw_zero();
    raw[0][0] = n;
    return RElem(r, std::move(raw));
  }
  /** Lift of a residue-field element (Teichmuller-style digit representative). */
  static RElem from_residue(const RingPtr& r, int x) {
    auto raw = r->raw_zero();
    raw[0] = r->coeff_from_fq(x);
    return RElem(r, std::move(raw));
  }
  static RElem uniformizer(const RingPtr& r) {
    auto raw = r->raw_zero();
    if (r->storage_len() > 1)
      raw[1][0] = 1;
    else if (r->spec().characteristic == FieldChar::Mixed && r->estar() == 1)
      raw[0][0] = r->p() % ipow(r->p(), r->bigM());
    // equal characteristic with l = 1: uniformizer is 0
    return RElem(r, std::move(raw));
  }
  /** The residue-field generator's lift (the class of x). */
  static RElem gen(const RingPtr& r) { return from_residue(r, r->residue_field().gen()); }

  static RElem from_digits(const RingPtr& r, const std::vector<int>& ds) {
    RElem acc = zero(r);
    RElem pi = uniformizer(r);
    RElem pk = one(r);
    for (size_t j = 0; j < ds.size() && int(j) < r->l(); ++j) {
      acc = acc + from_residue(r, ds[j]) * pk;
      pk = pk * pi;
    }
    return acc;
  }

  /** All ring elements in deterministic order (throws over the budget). */
  static std::vector<RElem> enumerate(const RingPtr& r, u64 budget = 2000000) {
    u64 card = u64(r->cardinality());
    if (card > budget) throw budget_error("RElem::enumerate: ring too large", budget);
    std::vector<RElem> out;
    out.reserve(card);
    std::vector<i64> mods;
    for (int i = 0; i < r->storage_len(); ++i)
      for (int j = 0; j < r->f(); ++j) mods.push_back(ipow(r->p(), r->level(i)));
    std::vector<i64> cur(mods.size(), 0);
    while (true) {
      auto raw = r->raw_zero();
      size_t idx = 0;
      for (int i = 0; i < r->storage_len(); ++i)
        for (int j = 0; j < r->f(); ++j) raw[size_t(i)][size_t(j)] = cur[idx++];
      out.emplace_back(r, std::move(raw));
      size_t k = 0;
      while (k < cur.size()) {
        if (++cur[k] < mods[k]) break;
        cur[k] = 0;
        ++k;
      }
      if (k == cur.size()) break;
    }
    return out;
  }

 private:
  void check(const RElem& b) const {
    if (ring_->signature() != b.ring_->signature())
      throw domain_error("RElem: mixed-ring operation");
  }

  RingPtr ring_;
  TruncatedRing::Raw raw_;
};

}  // namespace llpack
