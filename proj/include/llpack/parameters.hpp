#pragma once

/**
 * Discrete Langlands-type parameters for GL_n / SL_n over local fields,
 * kept symbolic: a parameter is a multiset of elliptic pieces
 * (irreducible Weil part) x (SL2 partition size) x (unramified twist),
 * with an optional matrix backing over a prime field for the centralizer
 * machinery.
 *
 * The matrix realization of a piece (sigma, a) plays Sp(a) through a pair
 * (semisimple weight operator, regular unipotent ladder) so that the
 * commutant of a realized parameter is exactly prod_i GL_{e_i} over the
 * piece multiplicities — the same answer the archetype has — and distinct
 * unramified twists are separated by a scalar sampler generator.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "llpack/char_table.hpp"
#include "llpack/common.hpp"
#include "llpack/finite_group.hpp"
#include "llpack/flin.hpp"
#include "llpack/inner_forms.hpp"

namespace llpack {

/** Symbolic element of C^x: integer valuation shift plus a finite-order unit tag. */
struct UnramifiedTwist {
  i64 val_shift = 0;        // 0 means the twist has absolute value one
  std::string unit_label;   // empty = trivial unit

  bool bounded() const { return val_shift == 0; }
  auto key() const { return std::tie(val_shift, unit_label); }
  friend bool operator==(const UnramifiedTwist& a, const UnramifiedTwist& b) {
    return a.key() == b.key();
  }
  friend bool operator<(const UnramifiedTwist& a, const UnramifiedTwist& b) {
    return a.key() < b.key();
  }
};

/**
 * One elliptic piece sigma x Sp(a), twisted.  weil_id names the irreducible
 * Weil part (dimension weil_dim); backing_irrep is its row in the backing
 * group's character table when the parameter is matrix-backed, else -1.
 */
struct EllipticPiece {
  std::string weil_id;
  int weil_dim = 1;
  int sl2_size = 1;
  UnramifiedTwist twist;
  int backing_irrep = -1;

  int dim() const { return weil_dim * sl2_size; }
  bool bounded() const { return twist.bounded(); }

  auto key() const {
    return std::make_tuple(dim(), weil_id, weil_dim, sl2_size, twist.val_shift,
                           twist.unit_label, backing_irrep);
  }
  friend bool operator==(const EllipticPiece& a, const EllipticPiece& b) {
    return a.key() == b.key();
  }
  friend bool operator<(const EllipticPiece& a, const EllipticPiece& b) {
    return a.key() < b.key();
  }

  std::string describe() const {
    std::string s = weil_id + "(m=" + std::to_string(weil_dim) + ")xSp(" +
                    std::to_string(sl2_size) + ")";
    if (twist.val_shift != 0) s += "@v" + std::to_string(twist.val_shift);
    if (!twist.unit_label.empty()) s += "@u:" + twist.unit_label;
    return s;
  }
};

/**
 * A parameter: multiset of pieces with multiplicities, total size n,
 * tagged by which group (GL side or SL side) it is for.  Optionally backed
 * by a finite Weil-like group whose irreducible representations realize the
 * Weil parts.  Construct through make_parameter, which normalizes.
 */
struct LanglandsParameter {
  int n = 0;
  bool sl_side = false;
  std::vector<std::pair<EllipticPiece, int>> pieces;  // (piece, multiplicity)
  std::optional<FiniteGroup> backing;
};

/** Merge equal pieces, sort canonically (dim, then label, then twist). Idempotent. */
inline LanglandsParameter normalize(const LanglandsParameter& phi) {
  std::map<EllipticPiece, i64> acc;
  for (const auto& [pc, mult] : phi.pieces) {
    if (mult <= 0) throw domain_error("normalize: multiplicities must be positive");
    acc[pc] += mult;
  }
  LanglandsParameter out;
  out.sl_side = phi.sl_side;
  out.backing = phi.backing;
  i64 total = 0;
  for (const auto& [pc, mult] : acc) {
    out.pieces.emplace_back(pc, int(mult));
    total += i64(pc.dim()) * mult;
  }
  if (total <= 0) throw domain_error("normalize: parameter must have positive size");
  out.n = int(total);
  return out;
}

inline LanglandsParameter make_parameter(std::vector<std::pair<EllipticPiece, int>> pieces,
                                         bool sl_side = false,
                                         std::optional<FiniteGroup> backing = std::nullopt) {
  for (const auto& [pc, mult] : pieces) {
    if (pc.weil_dim < 1 || pc.sl2_size < 1)
      throw domain_error("make_parameter: piece dimensions must be positive");
    if (mult < 1) throw domain_error("make_parameter: multiplicities must be positive");
    if (backing && pc.backing_irrep < 0)
      throw domain_error("make_parameter: backed parameters need an irrep index on every piece");
  }
  LanglandsParameter phi;
  phi.sl_side = sl_side;
  phi.backing = std::move(backing);
  phi.pieces = std::move(pieces);
  return normalize(phi);
}

/** Direct sum: concatenate the multisets (backing must agree when both are present). */
inline LanglandsParameter direct_sum(const LanglandsParameter& a, const LanglandsParameter& b) {
  if (a.sl_side != b.sl_side) throw domain_error("direct_sum: mixed group tags");
  if (a.backing && b.backing && a.backing->order() != b.backing->order())
    throw domain_error("direct_sum: backings differ");
  LanglandsParameter out = a;
  for (const auto& pm : b.pieces) out.pieces.push_back(pm);
  if (!out.backing) out.backing = b.backing;
  return normalize(out);
}

/** Sizes of the standard Levi the parameter lives on, as a nonincreasing partition of n. */
inline std::vector<i64> levi_support(const LanglandsParameter& phi) {
  std::vector<i64> parts;
  for (const auto& [pc, mult] : phi.pieces)
    for (int c = 0; c < mult; ++c) parts.push_back(pc.dim());
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

inline bool is_elliptic(const LanglandsParameter& phi) {
  return phi.pieces.size() == 1 && phi.pieces[0].second == 1;
}

inline bool is_bounded(const LanglandsParameter& phi) {
  for (const auto& [pc, mult] : phi.pieces)
    if (!pc.bounded()) return false;
  return true;
}

/**
 * The Langlands-quotient datum of phi on an inner form: the Levi
 * prod_i GL_{m_i}(D) with m_i = dim_i / d, plus one essentially
 * square-integrable label per block.  Requires the parameter to be relevant
 * for the form.
 */
struct LanglandsQuotientLabel {
  InnerFormLabel form;
  std::vector<i64> levi_blocks;         // m_i, matching sq_labels
  std::vector<std::string> sq_labels;   // one label per block, nonincreasing dim order
};

inline LanglandsQuotientLabel langlands_quotient_label(const LanglandsParameter& phi,
                                                       const InnerFormLabel& form) {
  if (form.n != phi.n)
    throw domain_error("langlands_quotient_label: form size differs from parameter size");
  auto parts = levi_support(phi);
  if (!is_relevant(parts, form))
    throw domain_error("langlands_quotient_label: parameter is not relevant for this form");
  // expand pieces in nonincreasing dim order, consistent with levi_support
  std::vector<std::pair<i64, std::string>> inst;
  for (const auto& [pc, mult] : phi.pieces)
    for (int c = 0; c < mult; ++c) inst.emplace_back(pc.dim(), pc.describe());
  std::stable_sort(inst.begin(), inst.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  LanglandsQuotientLabel out;
  out.form = form;
  for (const auto& [dm, lab] : inst) {
    out.levi_blocks.push_back(dm / form.d);
    out.sq_labels.push_back(lab);
  }
  return out;
}

/**
 * Matrix realization over F_ell.  weil_images[g] is the image of group
 * element g; sl2_semisimple and sl2_ladder realize the SL2 directions;
 * twist_sampler separates pieces with distinct unramified twists.  The
 * commutant of all_constraints() is exactly prod GL_{mult} over blocks.
 */
struct Realization {
  i64 ell = 0;
  int n = 0;
  std::vector<MatF> weil_images;
  MatF sl2_semisimple;
  MatF sl2_ladder;
  MatF twist_sampler;

  struct Block {
    int weil_dim = 1;   // m
    int sl2_size = 1;   // a
    int mult = 1;       // e
    int offset = 0;     // first row of the first instance
    int dim() const { return weil_dim * sl2_size; }
  };
  std::vector<Block> blocks;

  std::vector<MatF> all_constraints() const {
    std::vector<MatF> v = weil_images;
    v.push_back(sl2_semisimple);
    v.push_back(sl2_ladder);
    v.push_back(twist_sampler);
    return v;
  }
};

/**
 * Smallest valid realization prime: ell = 1 mod lcm(exponent of backing, 2n),
 * ell > |backing| and > lower.  2n gives room for the distinct SL2 weights.
 */
inline i64 realization_prime(const LanglandsParameter& phi, i64 lower = 0) {
  if (!phi.backing) throw domain_error("realization_prime: parameter has no matrix backing");
  i64 m = std::lcm(phi.backing->exponent(), i64(2) * phi.n);
  return next_split_prime(m, std::max<i64>({lower, phi.backing->order(), 2 * phi.n}));
}

inline Realization matrix_realization(const LanglandsParameter& phi, i64 ell) {
  if (!phi.backing) throw domain_error("matrix_realization: parameter has no matrix backing");
  const FiniteGroup& W = *phi.backing;
  if (!is_prime(ell)) throw domain_error("matrix_realization: modulus must be prime");
  if ((ell - 1) % W.exponent() != 0 || (ell - 1) % (2 * phi.n) != 0)
    throw domain_error("matrix_realization: need ell = 1 mod lcm(exponent, 2n)");
  if (ell <= W.order()) throw domain_error("matrix_realization: need ell > |W|");

  CharTable T = character_table(W, ell);
  std::vector<RepF> reps = irreducible_reps(W, T);
  for (const auto& [pc, mult] : phi.pieces) {
    if (pc.backing_irrep < 0 || pc.backing_irrep >= int(reps.size()))
      throw domain_error("matrix_realization: irrep index out of range");
    if (reps[size_t(pc.backing_irrep)].dim != pc.weil_dim)
      throw domain_error("matrix_realization: piece dimension disagrees with its irrep");
  }

  // distinct twists -> distinct scalars (powers of a full-order generator)
  std::map<UnramifiedTwist, i64> twist_index;
  for (const auto& [pc, mult] : phi.pieces) twist_index.emplace(pc.twist, 0);
  {
    i64 t = 0;
    for (auto& kv : twist_index) kv.second = t++;
    if (t >= ell - 1)
      throw domain_error("matrix_realization: too many distinct twists for this modulus");
  }
  // SL2 weights are powers of the full-order root: exponents a-1-2j lie in
  // (-n, n) and ell-1 >= 2n, so weights are distinct and parameter-independent
  // (direct sums realize as exact block sums at a common modulus).
  i64 root = primitive_root_mod(ell);
  i64 z = root;

  Realization R;
  R.ell = ell;
  R.n = phi.n;
  MatF id_w(ell, phi.n, phi.n), ss(ell, phi.n, phi.n), lad(ell, phi.n, phi.n),
      tw(ell, phi.n, phi.n);
  R.weil_images.assign(size_t(W.order()), id_w);

  int offset = 0;
  for (const auto& [pc, mult] : phi.pieces) {
    int m = pc.weil_dim, a = pc.sl2_size, nd = pc.dim();
    R.blocks.push_back({m, a, mult, offset});
    const RepF& rho = reps[size_t(pc.backing_irrep)];
    // per-instance pieces: rho(g) (x) I_a, I_m (x) diag(z^{a-1-2j}), I_m (x) (I + N)
    MatF s_piece(ell, nd, nd), l_piece(ell, nd, nd);
    for (int mu = 0; mu < m; ++mu)
      for (int j = 0; j < a; ++j) {
        int row = mu * a + j;
        i64 e = a - 1 - 2 * j;
        i64 zexp = ((e % (ell - 1)) + (ell - 1)) % (ell - 1);
        s_piece.at(row, row) = powmod(z, zexp, ell);
        l_piece.at(row, row) = 1;
        if (j + 1 < a) l_piece.at(mu * a + j + 1, row) = 1;  // ladder step down
      }
    i64 tw_scalar = powmod(root, twist_index.at(pc.twist), ell);
    for (int c = 0; c < mult; ++c) {
      int base = offset + c * nd;
      for (int g = 0; g < W.order(); ++g) {
        const MatF& Mg = rho(g);
        for (int mu = 0; mu < m; ++mu)
          for (int nu = 0; nu < m; ++nu) {
            i64 v = Mg.at(mu, nu);
            if (v == 0) continue;
            for (int j = 0; j < a; ++j)
              R.weil_images[size_t(g)].at(base + mu * a + j, base + nu * a + j) = v;
          }
      }
      for (int i = 0; i < nd; ++i) {
        ss.at(base + i, base + i) = s_piece.at(i, i);
        tw.at(base + i, base + i) = tw_scalar;
        for (int i2 = 0; i2 < nd; ++i2)
          if (l_piece.at(i2, i) != 0) lad.at(base + i2, base + i) = l_piece.at(i2, i);
      }
    }
    offset += nd * mult;
  }
  if (offset != phi.n) throw domain_error("matrix_realization: size bookkeeping failed");
  R.sl2_semisimple = ss;
  R.sl2_ladder = lad;
  R.twist_sampler = tw;
  return R;
}

// ---------------------------------------------------------------------------
// Archimedean parameters, fully symbolic.

/**
 * One archimedean piece.  Over the reals: dim 1 pieces are characters
 * sign^eps |.|^shift (eps in {0,1}); dim 2 pieces are the discrete-series
 * inductions indexed by an integer k >= 1 plus a shift.  Over the complexes
 * only dim 1 characters occur (labelled by k in Z and a shift).
 */
struct ArchPiece {
  int dim = 1;
  int sign = 0;        // dim-1 real pieces: 0 or 1
  int k = 0;           // dim-2 pieces: k >= 1; complex characters: any integer
  std::string shift;   // symbolic continuous coordinate; empty = 0

  auto key() const { return std::tie(dim, sign, k, shift); }
  friend bool operator==(const ArchPiece& a, const ArchPiece& b) { return a.key() == b.key(); }
  friend bool operator<(const ArchPiece& a, const ArchPiece& b) { return a.key() < b.key(); }
};

struct ArchimedeanParameter {
  bool complex_base = false;
  std::vector<ArchPiece> pieces;  // with multiplicity, not yet sorted
  int n = 0;
};

inline ArchimedeanParameter make_archimedean_parameter(std::vector<ArchPiece> pieces,
                                                       bool complex_base = false) {
  int n = 0;
  for (const auto& pc : pieces) {
    if (complex_base && pc.dim != 1)
      throw domain_error("archimedean parameter: complex base admits only characters");
    if (pc.dim != 1 && pc.dim != 2)
      throw domain_error("archimedean parameter: pieces have dimension 1 or 2");
    if (pc.dim == 1 && (pc.sign != 0 && pc.sign != 1))
      throw domain_error("archimedean parameter: character sign must be 0 or 1");
    if (pc.dim == 2 && pc.k < 1)
      throw domain_error("archimedean parameter: 2-dim pieces need k >= 1");
    n += pc.dim;
  }
  if (n == 0) throw domain_error("archimedean parameter: empty");
  ArchimedeanParameter phi;
  phi.complex_base = complex_base;
  phi.pieces = std::move(pieces);
  phi.n = n;
  return phi;
}

/**
 * Canonical form plus the counts that decide relevance: n1 one-dimensional
 * pieces and n2 two-dimensional ones.  The quaternionic form GL_{n/2}(H)
 * sees the parameter iff no one-dimensional piece occurs.
 */
struct ArchNormalForm {
  ArchimedeanParameter sorted;
  int n1 = 0;
  int n2 = 0;
  bool quaternion_relevant = false;
};

inline ArchNormalForm archimedean_normal_form(const ArchimedeanParameter& phi) {
  ArchNormalForm out;
  out.sorted = phi;
  std::sort(out.sorted.pieces.begin(), out.sorted.pieces.end());
  for (const auto& pc : phi.pieces) (pc.dim == 1 ? out.n1 : out.n2)++;
  out.quaternion_relevant = !phi.complex_base && out.n1 == 0 && out.n2 >= 1;
  return out;
}

}  // namespace llpack
