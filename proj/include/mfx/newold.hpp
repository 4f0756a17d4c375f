#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfx/operators.hpp"

namespace mfx {

// ---------------------------------------------------------------------------
// subspaces in ambient coordinates

enum class SubTag { ellOld, ellNewU, ellNewTr, kerTr, Intersection, VplusAlpha, VminusAlpha, Component };

template <class Ctx>
struct Subspace {
  SubTag tag = SubTag::Intersection;
  Mat<Ctx> basis;  // rows = coordinates w.r.t. the ambient basis
  int dim() const { return basis.rows; }
};

using SubQ = Subspace<Qq>;
using SubF = Subspace<Fq>;

// clear denominators rowwise and saturate the row lattice
inline MatQ saturated_sub(const MatQ& rows) {
  if (rows.rows == 0) return rows;
  ZMat zk;
  for (int i = 0; i < rows.rows; ++i) {
    Int den = 1;
    for (int j = 0; j < rows.cols; ++j) den = lcm(den, denominator(rows.at(i, j)));
    std::vector<Int> row(rows.cols);
    for (int j = 0; j < rows.cols; ++j) row[j] = numerator(rows.at(i, j) * Rat(den));
    zk.push_back(std::move(row));
  }
  ZMat sat = saturate_rows(zk);
  MatQ out(Qq{false}, (int)sat.size(), rows.cols);
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) = Rat(sat[i][j]);
  return out;
}

// span of the embedded level-N rows together with their W_ell images
// (Prop. oldcusp: the ell-old cusp space is S_k(N) + W_ell S_k(N))
inline SubQ old_subspace(const SpaceQ& sp, long ell) {
  require(sp.params.level % ell == 0 && (sp.params.level / ell) % ell != 0, errc::bad_prime,
          "ell must exactly divide the level");
  std::vector<std::vector<Rat>> rows;
  for (size_t j = 0; j < sp.origin.size(); ++j) {
    bool away = true;
    for (const auto& a : sp.origin[j].atoms)
      if (a.source_level() % ell == 0) away = false;
    if (!away) continue;
    // the row and its W-image both lie in the old space; the W-image of an
    // away-from-ell product is again away from ell, so rows suffice once both
    // embeddings e, e*ell appear -- include the W-image explicitly anyway
    auto cs = sp.member(sp.presat.row(j));
    require(cs.has_value(), errc::internal, "presat row outside space");
    rows.push_back(*cs);
    auto wi = sp.atoms->w_image(sp.origin[j].atoms, ell);
    auto cw = sp.member(wi.c, std::min(wi.prec, sp.prec()));
    require(cw.has_value(), errc::internal, "W image outside space");
    rows.push_back(*cw);
  }
  MatQ m(Qq{false}, (int)rows.size(), sp.dim());
  for (int i = 0; i < (int)rows.size(); ++i) m.set_row(i, rows[i]);
  return {SubTag::ellOld, saturated_sub(m)};
}

inline SubF reduce_subspace(const SubQ& s, const Fq& F, SubTag tag) {
  // clear denominators row by row, then reduce
  MatQ cleared = s.basis;
  for (int i = 0; i < cleared.rows; ++i) {
    Int den = 1;
    for (int j = 0; j < cleared.cols; ++j) den = lcm(den, denominator(cleared.at(i, j)));
    for (int j = 0; j < cleared.cols; ++j) cleared.at(i, j) *= Rat(den);
  }
  return {tag, rref_t(reduce_mat(cleared, F)).r};
}

// saturated coordinate lattice of the left kernel of an operator matrix
inline SubQ kernel_saturated(const MatQ& m, SubTag tag) {
  MatQ K = left_kernel(m);
  if (K.rows == 0) return {tag, K};
  ZMat zk;
  for (int i = 0; i < K.rows; ++i) {
    Int den = 1;
    for (int j = 0; j < K.cols; ++j) den = lcm(den, denominator(K.at(i, j)));
    std::vector<Int> row(K.cols);
    for (int j = 0; j < K.cols; ++j) row[j] = numerator(K.at(i, j) * Rat(den));
    zk.push_back(std::move(row));
  }
  ZMat sat = saturate_rows(zk);
  MatQ out(Qq{false}, (int)sat.size(), K.cols);
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) = Rat(sat[i][j]);
  return {tag, out};
}

// ell-new via ker(S); char 0 kernels are saturated
inline SubQ new_subspace_U(const SpaceQ& sp, long ell, const OpQ& S) {
  return kernel_saturated(S.m, SubTag::ellNewU);
}

inline SubQ new_subspace_Tr(const SpaceQ& sp, long ell, const OpQ& trE, const OpQ& W) {
  MatQ trw = mat_mul(W.m, trE.m);
  MatQ k1 = left_kernel(trE.m), k2 = left_kernel(trw);
  MatQ inter = rowspace_intersect(k1, k2);
  if (inter.rows == 0) return {SubTag::ellNewTr, inter};
  ZMat zk;
  for (int i = 0; i < inter.rows; ++i) {
    Int den = 1;
    for (int j = 0; j < inter.cols; ++j) den = lcm(den, denominator(inter.at(i, j)));
    std::vector<Int> row(inter.cols);
    for (int j = 0; j < inter.cols; ++j) row[j] = numerator(inter.at(i, j) * Rat(den));
    zk.push_back(std::move(row));
  }
  ZMat sat = saturate_rows(zk);
  MatQ m(Qq{false}, (int)sat.size(), inter.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = Rat(sat[i][j]);
  return {SubTag::ellNewTr, m};
}

// char-p versions on a fixed-weight SpaceF or a GradedF, from operator matrices
inline SubF new_subspace_U_modp(const Fq& F, const MatF& S) {
  return {SubTag::ellNewU, rref_t(left_kernel(S)).r};
}

inline SubF new_subspace_Tr_modp(const Fq& F, const MatF& trE, const MatF& W) {
  MatF k1 = left_kernel(trE);
  MatF k2 = left_kernel(mat_mul(W, trE));
  return {SubTag::ellNewTr, rowspace_intersect(k1, k2)};
}

struct NewformThmReport {
  int dim_U = 0, dim_Tr = 0;
  bool equal = false;
};

inline NewformThmReport check_newformthm_modp(const Fq& F, const MatF& S, const MatF& trE, const MatF& W) {
  auto u = new_subspace_U_modp(F, S);
  auto t = new_subspace_Tr_modp(F, trE, W);
  return {u.dim(), t.dim(), same_rowspace(u.basis, t.basis)};
}

inline NewformThmReport check_newformthm_q(const SpaceQ& sp, long ell, const OpQ& S, const OpQ& trE, const OpQ& W) {
  auto u = new_subspace_U(sp, ell, S);
  auto t = new_subspace_Tr(sp, ell, trE, W);
  return {u.dim(), t.dim(), same_rowspace(u.basis, t.basis)};
}

// ---------------------------------------------------------------------------
// keyker: the three equivalent conditions on f + W_ell g for level-N forms,
// evaluated directly on q-expansions

template <class Ctx>
struct KeykerRecord {
  bool in_ker_S = false;
  bool in_ker_tr_trW = false;
  bool lambda_conds = false;
  int window = 0;  // coefficients actually compared
};

template <class Ctx>
KeykerRecord<Ctx> keyker_check(const Series<Ctx>& f, const Series<Ctx>& g, int k, long ell) {
  check_same_ring(f, g);
  const Ctx& R = f.R;
  auto lk = [&](int e) { return R.from_int(pow_int(Int(ell), (unsigned)e)); };
  auto scale = [&](const Series<Ctx>& s, const typename Ctx::E& c) { return qexp_scale(s, c); };
  // h = f + W g = f + ell^k g(q^ell)
  Series<Ctx> h = qexp_add(f, scale(apply_V(g, (int)ell).truncated(f.prec), lk(k)));
  // W h = ell^k f(q^ell) + ell^k g
  Series<Ctx> wh = qexp_add(scale(apply_V(f, (int)ell).truncated(f.prec), lk(k)), scale(g, lk(k)));
  // S h = ell^2 U^2 h - ell^k h
  Series<Ctx> u2h = apply_U(h, (int)(ell * ell));
  Series<Ctx> sh = qexp_sub(scale(u2h, R.mul(R.from_int(Int(ell)), R.from_int(Int(ell)))),
                            scale(h, lk(k)).truncated(u2h.prec));
  // Tr h = h + wt^{-1} ell U(W h);  wt^{-1} needs ell invertible for k > 0
  typename Ctx::E wtinv = field_inv(R, lk(k));
  Series<Ctx> uwh = apply_U(wh, (int)ell);
  Series<Ctx> trh = qexp_add(h.truncated(uwh.prec), scale(uwh, R.mul(R.from_int(Int(ell)), wtinv)));
  // Tr W h = W h + ell U h
  Series<Ctx> trwh = qexp_add(wh.truncated(uwh.prec), scale(apply_U(h, (int)ell), R.from_int(Int(ell))));
  // condition (3): ell T_ell f = -(ell+1) wt g and ell T_ell g = -(ell+1) f
  auto t_ell = [&](const Series<Ctx>& s) {
    int out_len = (s.prec - 1) / (int)ell + 1;
    Series<Ctx> out(R, out_len);
    typename Ctx::E rk1 = lk(k - 1);
    for (long n = 0; n < out_len; ++n) {
      auto v = s.c[(size_t)(ell * n)];
      if (n % ell == 0) v = R.add(v, R.mul(rk1, s.c[(size_t)(n / ell)]));
      out.c[n] = v;
    }
    return out;
  };
  Series<Ctx> c3a = qexp_add(scale(t_ell(f), R.from_int(Int(ell))),
                             scale(g, R.mul(R.from_int(Int(ell + 1)), lk(k))).truncated(t_ell(f).prec));
  Series<Ctx> c3b = qexp_add(scale(t_ell(g), R.from_int(Int(ell))),
                             scale(f, R.from_int(Int(ell + 1))).truncated(t_ell(g).prec));
  auto zero_to = [&](const Series<Ctx>& s) {
    for (int n = 0; n < s.prec; ++n)
      if (!R.is_zero(s.c[n])) return false;
    return true;
  };
  KeykerRecord<Ctx> rec;
  rec.window = sh.prec;
  rec.in_ker_S = zero_to(sh);
  rec.in_ker_tr_trW = zero_to(trh) && zero_to(trwh);
  rec.lambda_conds = zero_to(c3a) && zero_to(c3b);
  return rec;
}

// ---------------------------------------------------------------------------
// level raising

// lambda_k = -(ell+1) ell^{(k-2)/2} mod p
inline Int lambda_k(long ell, int k, const Int& p) {
  require(p % ell != 0 && is_prime(p), errc::bad_prime, "p must be a prime not dividing ell");
  require(k % 2 == 0 && k >= 2, errc::unsupported, "even k >= 2");
  Int v = -(Int(ell) + 1) * pow_int(Int(ell), (unsigned)((k - 2) / 2));
  return ((v % p) + p) % p;
}

// epsilon_k with t(Frob_ell) = eps * lambda_k; NotApplicable outside {+-lambda}
inline int epsilon_k(const Int& t_frob_ell, long ell, int k, const Int& p) {
  Int lam = lambda_k(ell, k, p);
  require(lam != 0, errc::not_applicable, "lambda = 0 has no sign");
  Int t = ((t_frob_ell % p) + p) % p;
  if (t == lam) return 1;
  if (t == (p - lam) % p) return -1;
  fail(errc::not_applicable, "t(Frob_ell) not in {+-lambda}");
}

// closed-form intersection on an eigencomponent (p odd, lambda != 0):
// { f + eps w_ell f : T_ell f = eps lambda f } -- note the paper's Theorem
// statement carries the opposite sign; the proof and the worked data give +.
struct OldNewModP {
  SubF old_sub;       // reductions of the old lattice
  SubF new_sub;       // ker S mod p
  SubF inter;         // old cap new
  int sum_codim = 0;  // codim of old + new in the ambient (restricted) space
};

inline OldNewModP intersect_old_new_modp(const Fq& F, const SubF& old_modp, const MatF& S_modp,
                                         const std::optional<MatF>& restrict_to = std::nullopt) {
  OldNewModP r;
  r.old_sub = old_modp;
  MatF newb = rref_t(left_kernel(S_modp)).r;
  if (restrict_to) {
    r.old_sub.basis = rowspace_intersect(old_modp.basis, *restrict_to);
    newb = rowspace_intersect(newb, *restrict_to);
  }
  r.new_sub = {SubTag::ellNewU, newb};
  r.inter = {SubTag::Intersection, rowspace_intersect(r.old_sub.basis, r.new_sub.basis)};
  int ambient = restrict_to ? restrict_to->rows : S_modp.rows;
  MatF sum(F, r.old_sub.basis.rows + newb.rows, S_modp.cols);
  for (int i = 0; i < r.old_sub.basis.rows; ++i) sum.set_row(i, r.old_sub.basis.row(i));
  for (int i = 0; i < newb.rows; ++i) sum.set_row(r.old_sub.basis.rows + i, newb.row(i));
  r.sum_codim = ambient - rank_of(sum);
  return r;
}

}  // namespace mfx
