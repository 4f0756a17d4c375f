#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mfx/linalg.hpp"
#include "mfx/spaces.hpp"
#include "mfx/spaces_modp.hpp"

namespace mfx {

// Operator matrices on a fixed basis; composition is matrix product, so once
// built there is no further precision loss.

struct OpQ {
  const SpaceQ* dom = nullptr;
  const SpaceQ* cod = nullptr;  // == dom for endomorphisms
  MatQ m;
  std::string name;
};

namespace detail {
// formal T_r image of a weight-k level-M expansion (good prime r)
inline std::vector<Rat> t_image(const std::vector<Rat>& c, long r, int k, int out_len) {
  std::vector<Rat> out(out_len);
  Rat rk1 = k == 0 ? Rat(1) / Rat(r) : Rat(pow_int(Int(r), (unsigned)(k - 1)));
  for (long n = 0; n < out_len; ++n) {
    Rat v = c[(size_t)(r * n)];
    if (n % r == 0) v += rk1 * c[(size_t)(n / r)];
    out[n] = v;
  }
  return out;
}
}  // namespace detail

// T_r for prime r not dividing the level; k = 0 needs 1/r
inline OpQ op_T(const SpaceQ& sp, long r) {
  require(is_prime(Int(r)), errc::bad_prime, "T_r needs prime r");
  require(sp.params.level % r != 0, errc::bad_prime, "r divides the level; use U_r");
  if (sp.params.weight == 0)
    require(sp.params.ring.kind == RingDesc::Kind::Rationals, errc::bad_prime,
            "T_r in weight 0 needs r invertible");
  int out_len = (sp.prec() - 1) / (int)r + 1;
  OpQ op{&sp, &sp, MatQ(Qq{false}, sp.dim(), sp.dim()), "T_" + std::to_string(r)};
  for (int i = 0; i < sp.dim(); ++i) {
    auto img = detail::t_image(sp.sat.row(i), r, sp.params.weight, out_len);
    auto cs = sp.member(img, out_len);
    require(cs.has_value(), errc::not_stable, "T_r image leaves the space");
    op.m.set_row(i, *cs);
  }
  return op;
}

// U_m for m dividing the level
inline OpQ op_U(const SpaceQ& sp, long m) {
  require(m >= 1 && sp.params.level % m == 0, errc::bad_prime, "U_m needs m | level here");
  int out_len = (sp.prec() - 1) / (int)m + 1;
  OpQ op{&sp, &sp, MatQ(Qq{false}, sp.dim(), sp.dim()), "U_" + std::to_string(m)};
  for (int i = 0; i < sp.dim(); ++i) {
    auto row = sp.sat.row(i);
    std::vector<Rat> img(out_len);
    for (long n = 0; n < out_len; ++n) img[n] = row[(size_t)(n * m)];
    auto cs = sp.member(img, out_len);
    require(cs.has_value(), errc::not_stable, "U_m image leaves the space");
    op.m.set_row(i, *cs);
  }
  return op;
}

// wt_m = m^k (scalar on a fixed weight)
inline OpQ op_wt(const SpaceQ& sp, long m) {
  require(m != 0, errc::non_unit, "wt_m needs a unit");
  OpQ op{&sp, &sp, mat_scale(MatQ::identity(Qq{false}, sp.dim()), Rat(pow_int(Int(m), (unsigned)sp.params.weight))),
         "wt_" + std::to_string(m)};
  return op;
}

// W_ell on the saturated basis, assembled from the per-atom images of the
// spanning rows and transported through sat = X * presat
inline OpQ op_W(const SpaceQ& sp, long ell) {
  require(is_prime(Int(ell)) && sp.params.level % ell == 0 && (sp.params.level / ell) % ell != 0,
          errc::bad_prime, "W_ell needs ell exactly dividing the level");
  OpQ op{&sp, &sp, MatQ(Qq{false}, sp.dim(), sp.dim()), "W_" + std::to_string(ell)};
  std::vector<std::vector<Rat>> wimg;
  wimg.reserve(sp.origin.size());
  for (const auto& row : sp.origin) wimg.push_back(sp.atoms->w_image(row.atoms, ell).c);
  for (int i = 0; i < sp.dim(); ++i) {
    std::vector<Rat> img(sp.prec(), Rat(0));
    for (int j = 0; j < sp.X.cols; ++j) {
      const Rat& c = sp.X.at(i, j);
      if (c == 0) continue;
      for (int n = 0; n < sp.prec(); ++n) img[n] += c * wimg[j][n];
    }
    auto cs = sp.member(img);
    require(cs.has_value(), errc::internal, "W image leaves the space");
    op.m.set_row(i, *cs);
  }
  return op;
}

// involution-normalized w_ell = ell^{-k/2} W_ell
inline OpQ op_w(const SpaceQ& sp, long ell) {
  require(sp.params.weight % 2 == 0, errc::non_unit, "w_ell needs even weight");
  OpQ w = op_W(sp, ell);
  w.name = "w_" + std::to_string(ell);
  w.m = mat_scale(w.m, Rat(1) / Rat(pow_int(Int(ell), (unsigned)(sp.params.weight / 2))));
  return w;
}

// Tr as an endomorphism matrix of the level-Nl space:
// Tr f = f + wt^{-1} ell U_ell W_ell f
inline OpQ tr_endo(const SpaceQ& sp, long ell, const OpQ& W, const OpQ& U) {
  Rat s = Rat(ell) / Rat(pow_int(Int(ell), (unsigned)sp.params.weight));
  OpQ op{&sp, &sp,
         mat_add(MatQ::identity(Qq{false}, sp.dim()), mat_scale(mat_mul(W.m, U.m), s)),
         "Tr"};
  return op;
}

// Tr with codomain the companion level-N space
inline OpQ op_trace(const SpaceQ& sp, long ell, const SpaceQ& spN, const OpQ& trE) {
  require(spN.params.level == sp.params.level / ell && spN.params.weight == sp.params.weight,
          errc::unsupported, "companion space mismatch");
  OpQ op{&sp, &spN, MatQ(Qq{false}, sp.dim(), spN.dim()), "Tr"};
  for (int i = 0; i < sp.dim(); ++i) {
    auto img = sp.expand(trE.m.row(i));
    auto cs = spN.member(img, std::min(sp.prec(), spN.prec()));
    require(cs.has_value(), errc::internal, "trace image not at lower level");
    op.m.set_row(i, *cs);
  }
  return op;
}

// S = ell^2 U_ell^2 - wt_ell
inline OpQ op_S(const SpaceQ& sp, long ell, const OpQ& U) {
  OpQ op{&sp, &sp,
         mat_sub(mat_scale(mat_mul(U.m, U.m), Rat(ell) * Rat(ell)),
                 mat_scale(MatQ::identity(Qq{false}, sp.dim()), Rat(pow_int(Int(ell), (unsigned)sp.params.weight)))),
         "S"};
  return op;
}

// embedding matrix of the level-N space into the level-Nl space
inline OpQ embed_matrix(const SpaceQ& spN, const SpaceQ& sp) {
  OpQ op{&spN, &sp, MatQ(Qq{false}, spN.dim(), sp.dim()), "emb"};
  for (int i = 0; i < spN.dim(); ++i) {
    auto cs = sp.member(spN.sat.row(i), std::min(spN.prec(), sp.prec()));
    require(cs.has_value(), errc::internal, "level-N form missing at level Nl");
    op.m.set_row(i, *cs);
  }
  return op;
}

// V_ell-embedding matrix: level-N row -> coordinates of its q -> q^ell image
inline OpQ vembed_matrix(const SpaceQ& spN, const SpaceQ& sp, long ell) {
  OpQ op{&spN, &sp, MatQ(Qq{false}, spN.dim(), sp.dim()), "Vemb"};
  for (int i = 0; i < spN.dim(); ++i) {
    auto row = spN.sat.row(i);
    std::vector<Rat> img(sp.prec(), Rat(0));
    for (int n = 0; (long)n * ell < sp.prec() && n < spN.prec(); ++n) img[(size_t)n * ell] = row[n];
    int window = std::min<long>(sp.prec(), (long)spN.prec() * ell);
    auto cs = sp.member(img, (int)window);
    require(cs.has_value(), errc::internal, "V_ell image missing at level Nl");
    op.m.set_row(i, *cs);
  }
  return op;
}

// ---------------------------------------------------------------------------
// char-p operators (fixed weight and graded)

struct OpF {
  MatF m;
  std::string name;
};

inline OpF reduce_op(const OpQ& op, const Fq& F) {
  // NotPIntegral here signals that the working modulus is too small
  return {reduce_mat(op.m, F), op.name};
}

// graded operators: built row by row from expansions, membership certified on
// the valid window
template <class Gr>
OpF graded_T(const Gr& g, long r) {
  require(is_prime(Int(r)) && g.level % r != 0 && r != g.F.p, errc::bad_prime, "bad T_r prime");
  int out_len = (g.prec - 1) / (int)r + 1;
  OpF op{MatF(g.F, g.dim(), g.dim()), "T_" + std::to_string(r)};
  for (int i = 0; i < g.dim(); ++i) {
    auto row = g.basis.row(i);
    int k = g.basis_weight[i];
    FqElem rk1 = g.F.pow(g.F.from_int(Int(r)), Int(k == 0 ? 0 : k - 1));
    if (k == 0) rk1 = g.F.inv(g.F.from_int(Int(r)));
    std::vector<FqElem> img(out_len, g.F.zero());
    for (long n = 0; n < out_len; ++n) {
      FqElem v = row[(size_t)(r * n)];
      if (n % r == 0) v = g.F.add(v, g.F.mul(rk1, row[(size_t)(n / r)]));
      img[n] = v;
    }
    auto cs = g.member(img, out_len);
    require(cs.has_value(), errc::not_stable, "T_r image leaves the graded span");
    op.m.set_row(i, *cs);
  }
  return op;
}

template <class Gr>
OpF graded_U(const Gr& g, long m) {
  require(m >= 1 && (g.level % m == 0 || m == g.F.p), errc::bad_prime, "U_m needs m | level or m = p");
  int out_len = (g.prec - 1) / (int)m + 1;
  OpF op{MatF(g.F, g.dim(), g.dim()), "U_" + std::to_string(m)};
  for (int i = 0; i < g.dim(); ++i) {
    auto row = g.basis.row(i);
    std::vector<FqElem> img(out_len, g.F.zero());
    for (long n = 0; n < out_len; ++n) img[n] = row[(size_t)(n * m)];
    auto cs = g.member(img, out_len);
    require(cs.has_value(), errc::not_stable, "U_m image leaves the graded span (raise kmax)");
    op.m.set_row(i, *cs);
  }
  return op;
}

// wt_ell on a graded class: ell^k is constant mod p across the class
inline OpF graded_wt(const GradedF& g, long ell) {
  FqElem s = g.F.pow(g.F.from_int(Int(ell)), Int(g.class_weights.empty() ? 0 : g.class_weights.front()));
  if (!g.class_weights.empty())
    for (int k : g.class_weights)
      require(g.F.pow(g.F.from_int(Int(ell)), Int(k)) == s, errc::internal, "wt not class-constant");
  return {mat_scale(MatF::identity(g.F, g.dim()), s), "wt_" + std::to_string(ell)};
}

// W_ell on a graded space via the per-weight char-0 operators; the reduced
// image of each source row is combined through the echelon combo matrix
inline OpF graded_W(const GradedF& g, long ell, std::vector<OpQ>* lift_ops = nullptr) {
  require(!g.fast_level1, errc::unsupported, "W_ell needs ell dividing the level");
  OpF op{MatF(g.F, g.dim(), g.dim()), "W_" + std::to_string(ell)};
  // reduced W image per source row
  std::vector<std::vector<FqElem>> srcW(g.src.rows);
  std::map<int, OpQ> wk;  // per weight index
  for (int si = 0; si < g.src.rows; ++si) {
    auto [k, idx] = g.sources[si];
    int wi = -1;
    for (int t = 0; t < (int)g.class_weights.size(); ++t)
      if (g.class_weights[t] == k) wi = t;
    require(wi >= 0, errc::internal, "weight index");
    if (!wk.count(wi)) wk.emplace(wi, op_W(*g.lifts[wi], ell));
    const OpQ& W = wk.at(wi);
    auto img = g.lifts[wi]->expand(W.m.row(idx));
    srcW[si] = reduce_vec(img, g.F);
  }
  for (int i = 0; i < g.dim(); ++i) {
    std::vector<FqElem> img(g.prec, g.F.zero());
    for (int j = 0; j < g.src.rows; ++j) {
      const FqElem& c = g.combo.at(i, j);
      if (g.F.is_zero(c)) continue;
      for (int n = 0; n < g.prec; ++n) img[n] = g.F.add(img[n], g.F.mul(c, srcW[j][n]));
    }
    auto cs = g.member(img);
    require(cs.has_value(), errc::internal, "W image leaves the graded span");
    op.m.set_row(i, *cs);
  }
  if (lift_ops)
    for (auto& [wi, w] : wk) lift_ops->push_back(w);
  return op;
}

inline OpF graded_S(const GradedF& g, long ell, const OpF& U) {
  FqElem l2 = g.F.mul(g.F.from_int(Int(ell)), g.F.from_int(Int(ell)));
  OpF wt = graded_wt(g, ell);
  return {mat_sub(mat_scale(mat_mul(U.m, U.m), l2), wt.m), "S"};
}

// Tr as an endomorphism of the graded level-Nl space
inline OpF graded_tr_endo(const GradedF& g, long ell, const OpF& W, const OpF& U) {
  FqElem wtinv = g.F.inv(g.F.pow(g.F.from_int(Int(ell)), Int(g.class_weights.empty() ? 0 : g.class_weights.front())));
  FqElem s = g.F.mul(g.F.from_int(Int(ell)), wtinv);
  return {mat_add(MatF::identity(g.F, g.dim()), mat_scale(mat_mul(W.m, U.m), s)), "Tr"};
}

// embedding of the level-N graded space into the level-Nl one
inline OpF graded_embed(const GradedF& gN, const GradedF& g) {
  OpF op{MatF(g.F, gN.dim(), g.dim()), "emb"};
  for (int i = 0; i < gN.dim(); ++i) {
    auto cs = g.member(gN.basis.row(i), std::min(gN.prec, g.prec));
    require(cs.has_value(), errc::internal, "level-N graded row missing at level Nl");
    op.m.set_row(i, *cs);
  }
  return op;
}

// Tr with codomain the level-N graded space
inline OpF graded_trace(const GradedF& g, const OpF& trE, const GradedF& gN) {
  OpF op{MatF(g.F, g.dim(), gN.dim()), "Tr"};
  for (int i = 0; i < g.dim(); ++i) {
    auto img = g.expand(trE.m.row(i));
    auto cs = gN.member(img, std::min(g.prec, gN.prec));
    require(cs.has_value(), errc::internal, "trace image not at lower level");
    op.m.set_row(i, *cs);
  }
  return op;
}

}  // namespace mfx
