#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "mfx/error.hpp"
#include "mfx/linalg.hpp"
#include "mfx/spaces.hpp"

namespace mfx {

// fixed-weight space over F_{p^m}: reduction of a saturated char-0 space
struct SpaceF {
  Fq F;
  std::shared_ptr<SpaceQ> lift;
  MatF basis;  // reduced saturated rows; full rank by saturation
  Rref<Fq> rref;

  long level() const { return lift->params.level; }
  int weight() const { return lift->params.weight; }
  int prec() const { return lift->params.prec; }
  int dim() const { return basis.rows; }

  std::optional<std::vector<FqElem>> member(const std::vector<FqElem>& v, int valid_cols = -1) const {
    return coords_in(rref, v, valid_cols);
  }
  std::vector<FqElem> expand(const std::vector<FqElem>& coords) const { return vec_mat(coords, basis); }
};

inline MatF reduce_mat(const MatQ& m, const Fq& F) {
  MatF out(F, m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      const Rat& v = m.at(i, j);
      Int den = denominator(v);
      if (den % Int(F.p) == 0) fail(errc::not_p_integral, "matrix entry not p-integral");
      out.at(i, j) = F.mul(F.from_int(numerator(v)), F.inv(F.from_int(den)));
    }
  return out;
}

inline std::vector<FqElem> reduce_vec(const std::vector<Rat>& v, const Fq& F) {
  std::vector<FqElem> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Int den = denominator(v[i]);
    if (den % Int(F.p) == 0) fail(errc::not_p_integral, "entry not p-integral", (long long)i);
    out[i] = F.mul(F.from_int(numerator(v[i])), F.inv(F.from_int(den)));
  }
  return out;
}

inline SpaceF reduce_space(std::shared_ptr<SpaceQ> sp, const Fq& F) {
  require(sp->params.level % F.p != 0, errc::unsupported, "p divides the level");
  SpaceF out;
  out.F = F;
  out.lift = std::move(sp);
  out.basis = reduce_mat(out.lift->sat, F);
  out.rref = rref_t(out.basis);
  require(out.rref.r.rows == out.basis.rows, errc::internal,
          "reduction of a saturated basis lost rank");
  return out;
}

// ---------------------------------------------------------------------------
// graded space over F_{p^m}: sum over k <= kmax, k = kappa mod (p-1), of the
// reductions of the weight-k saturated lattices. Basis rows are kept in
// insertion order (weights ascending), so the weight-<=k slice is spanned by a
// coordinate prefix.

struct GradedF {
  long level = 1;
  Fq F;
  int kappa = 0;  // even class mod p-1 (0 when p in {2,3})
  int kmax = 0;
  int prec = 0;
  bool cuspidal = false;
  bool fast_level1 = false;  // level 1, p in {2,3}: basis is powers of Delta

  std::vector<int> class_weights;                   // ascending weights in class
  std::vector<std::shared_ptr<SpaceQ>> lifts;       // per class weight (generic path)
  std::vector<std::pair<int, int>> sources;         // (weight, sat row index)
  MatF src;                                         // reduced source rows
  MatF basis;                                       // insertion-ordered independent rows
  MatF combo;                                       // basis = combo * src
  std::vector<int> basis_weight;                    // ascending
  std::map<int, int> weight_profile;                // incremental dim per weight
  Rref<Fq> rref;

  int dim() const { return basis.rows; }

  std::optional<std::vector<FqElem>> member(const std::vector<FqElem>& v, int valid_cols = -1) const {
    return coords_in(rref, v, valid_cols);
  }
  std::vector<FqElem> expand(const std::vector<FqElem>& coords) const { return vec_mat(coords, basis); }

  int prefix_dim(int k) const {
    int n = 0;
    while (n < (int)basis_weight.size() && basis_weight[n] <= k) ++n;
    return n;
  }

  // basis (in coords) of the weight-<=k slice of a coordinate subspace
  MatF slice(const MatF& sub_coords, int k) const {
    int good = prefix_dim(k);
    int nbad = basis.rows - good;
    if (sub_coords.rows == 0 || nbad == 0) return rref_t(sub_coords).r;
    MatF proj(F, sub_coords.rows, nbad);
    for (int i = 0; i < sub_coords.rows; ++i)
      for (int j = 0; j < nbad; ++j) proj.at(i, j) = sub_coords.at(i, good + j);
    MatF K = left_kernel(proj);
    return rref_t(mat_mul(K, sub_coords)).r;
  }
  int slice_dim(const MatF& sub_coords, int k) const { return slice(sub_coords, k).rows; }
};

// working precision for a graded computation that must support U_p and T_r up
// to rmax on level-M forms of weight <= kmax
inline int graded_prec(long M, int kmax, int64_t p, int rmax) {
  int window = sturm_bound(kmax, M) + 1;
  int factor = std::max<int>((int)p, rmax);
  return factor * window + 1;
}

inline GradedF build_graded(long level, const Fq& F, int kappa, int kmax, int prec, bool cuspidal,
                            const FixturePack& pack) {
  require(level % F.p != 0, errc::unsupported, "p divides the level");
  GradedF g;
  g.level = level;
  g.F = F;
  g.kmax = kmax;
  g.prec = prec;
  g.cuspidal = cuspidal;
  int pm1 = F.p <= 3 ? 2 : (int)F.p - 1;
  g.kappa = F.p <= 3 ? 0 : (((kappa % pm1) + pm1) % pm1);
  require(kappa % 2 == 0, errc::unsupported, "even classes only");
  int step = F.p <= 3 ? 2 : (int)F.p - 1;
  int k0 = F.p <= 3 ? 0 : g.kappa;
  if (k0 == 0 && F.p > 3) {
    // the class of weight 0 contains 0, p-1, 2(p-1), ...
  }
  for (int k = k0; k <= kmax; k += step)
    if (k % 2 == 0 && !(cuspidal && k < 2)) g.class_weights.push_back(k);

  g.fast_level1 = level == 1 && F.p <= 3;
  std::vector<std::vector<FqElem>> src_rows;
  if (g.fast_level1) {
    // M_k(1, F_p) for p in {2,3} is spanned by powers of Delta (E4 = E6 = 1)
    SeriesF dbar = reduce_mod(eta_delta(prec), F);
    SeriesF pw(F, prec);
    pw.c[0] = F.one();
    for (int j = 0; 12 * j <= kmax; ++j) {
      if (j > 0) pw = qexp_mul(pw, dbar);
      if (cuspidal && j == 0) continue;
      src_rows.push_back(pw.c);
      g.sources.push_back({12 * j, j});
    }
  } else {
    auto atoms = std::make_shared<AtomSeries>(prec);
    for (int k : g.class_weights) {
      SpaceParams par{level, k, RingDesc::ZZ(), prec, cuspidal};
      auto sp = std::make_shared<SpaceQ>(build_space(par, pack, TopUp::Allowed, atoms));
      g.lifts.push_back(sp);
      MatF red = reduce_mat(sp->sat, F);
      for (int i = 0; i < red.rows; ++i) {
        src_rows.push_back(red.row(i));
        g.sources.push_back({k, i});
      }
    }
  }

  g.src = MatF(F, (int)src_rows.size(), prec);
  for (int i = 0; i < g.src.rows; ++i) g.src.set_row(i, src_rows[i]);

  // Incremental elimination in ascending weight. A fully reduced auxiliary
  // echelon decides independence; the frozen remainders (each of the form
  // src_i minus a combination of earlier sources) become the basis rows, so
  // prefix spans agree with the weight filtration, which slice() relies on.
  std::vector<std::vector<FqElem>> brows, crows;
  std::vector<std::vector<FqElem>> aux, auxc;
  std::vector<int> piv;
  for (int si = 0; si < g.src.rows; ++si) {
    std::vector<FqElem> row = g.src.row(si);
    std::vector<FqElem> cmb(g.src.rows, F.zero());
    cmb[si] = F.one();
    for (int bi = 0; bi < (int)aux.size(); ++bi) {
      FqElem c = row[piv[bi]];
      if (F.is_zero(c)) continue;
      for (int j = 0; j < prec; ++j) row[j] = F.sub(row[j], F.mul(c, aux[bi][j]));
      for (int j = 0; j < g.src.rows; ++j) cmb[j] = F.sub(cmb[j], F.mul(c, auxc[bi][j]));
    }
    int p = -1;
    for (int j = 0; j < prec; ++j)
      if (!F.is_zero(row[j])) {
        p = j;
        break;
      }
    if (p < 0) continue;
    FqElem inv = F.inv(row[p]);
    for (int j = 0; j < prec; ++j) row[j] = F.mul(row[j], inv);
    for (int j = 0; j < g.src.rows; ++j) cmb[j] = F.mul(cmb[j], inv);
    brows.push_back(row);
    crows.push_back(cmb);
    // keep the auxiliary echelon fully reduced (pivot cleared everywhere)
    for (int bi = 0; bi < (int)aux.size(); ++bi) {
      FqElem c = aux[bi][p];
      if (F.is_zero(c)) continue;
      for (int j = 0; j < prec; ++j) aux[bi][j] = F.sub(aux[bi][j], F.mul(c, row[j]));
      for (int j = 0; j < g.src.rows; ++j) auxc[bi][j] = F.sub(auxc[bi][j], F.mul(c, cmb[j]));
    }
    aux.push_back(std::move(row));
    auxc.push_back(std::move(cmb));
    piv.push_back(p);
    g.basis_weight.push_back(g.sources[si].first);
    g.weight_profile[g.sources[si].first] += 1;
  }
  g.basis = MatF(F, (int)brows.size(), prec);
  g.combo = MatF(F, (int)brows.size(), g.src.rows);
  for (int i = 0; i < (int)brows.size(); ++i) {
    g.basis.set_row(i, brows[i]);
    g.combo.set_row(i, crows[i]);
  }
  g.rref = rref_t(g.basis);
  require(g.rref.r.rows == g.basis.rows, errc::internal, "graded echelon rank");
  return g;
}

}  // namespace mfx
