#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mfx/newold.hpp"
#include "mfx/operators.hpp"
#include "mfx/polyfactor.hpp"

namespace mfx {

// matrix of an operator restricted to a subspace (rows = coords in ambient)
inline MatF restrict_op(const Fq& F, const MatF& sub, const Rref<Fq>& sub_rref, const MatF& op) {
  MatF out(F, sub.rows, sub.rows);
  for (int i = 0; i < sub.rows; ++i) {
    auto img = vec_mat(sub.row(i), op);
    auto cs = coords_in(sub_rref, img);
    require(cs.has_value(), errc::not_stable, "operator does not stabilize the subspace");
    out.set_row(i, *cs);
  }
  return out;
}

// images of subspace rows under an ambient operator, as a subspace
inline MatF image_of(const MatF& sub, const MatF& op) { return rref_t(mat_mul(sub, op)).r; }

// kernel of an ambient operator restricted to a subspace, in ambient coords
inline MatF kernel_in(const Fq& F, const MatF& sub, const MatF& op) {
  if (sub.rows == 0) return sub;
  MatF K = left_kernel(mat_mul(sub, op));
  return rref_t(mat_mul(K, sub)).r;
}

// ---------------------------------------------------------------------------
// K(N) = ker U_p inside a graded space

struct KSpace {
  const GradedF* g = nullptr;
  MatF basis;  // coords in the graded basis
  Rref<Fq> rref;
  int dim() const { return basis.rows; }
};

inline KSpace k_space(const GradedF& g, const OpF& Up) {
  KSpace k;
  k.g = &g;
  k.basis = rref_t(left_kernel(Up.m)).r;
  k.rref = rref_t(k.basis);
  return k;
}

// ---------------------------------------------------------------------------
// eigensystem decomposition of a Hecke-stable subspace

struct Eigensystem {
  std::map<long, FqElem> values;  // t(Frob_r) for r in the probe set
  std::string label;              // deterministic: "r:v r:v ..."
};

struct Component {
  Eigensystem sys;
  MatF basis;  // coords in the ambient (graded) basis
};

inline std::string eigLabel(const Fq& F, const std::map<long, FqElem>& vals) {
  std::string s;
  for (auto& [r, v] : vals) s += (s.empty() ? "" : " ") + std::to_string(r) + ":" + F.to_string(v);
  return s;
}

// simultaneous generalized eigenspace decomposition for the commuting family
// {T_r}; the probe primes and their ambient matrices are supplied by the caller
inline std::vector<Component> decompose(const Fq& F, const MatF& space,
                                        const std::vector<std::pair<long, const MatF*>>& ops) {
  // check that all char polys split over F first
  for (auto& [r, op] : ops) {
    auto rr = rref_t(space);
    MatF M = restrict_op(F, space, rr, *op);
    auto cr = charpoly_roots(F, charpoly(M));
    require(cr.irreducible_excess == 0, errc::unsupported,
            "eigenvalues require the degree-" + std::to_string(cr.splitting_degree) +
                " extension; enlarge the field");
  }
  std::vector<Component> comps{{Eigensystem{}, rref_t(space).r}};
  for (auto& [r, op] : ops) {
    std::vector<Component> next;
    for (auto& c : comps) {
      auto rr = rref_t(c.basis);
      MatF M = restrict_op(F, c.basis, rr, *op);
      auto cp = charpoly(M);
      auto roots = charpoly_roots(F, cp).roots;
      int found = 0;
      for (auto& a : roots) {
        MatF shifted = mat_sub(M, mat_scale(MatF::identity(F, M.rows), a));
        MatF gen = left_kernel(mat_pow(shifted, (unsigned)M.rows));
        if (gen.rows == 0) continue;
        Component nc;
        nc.sys = c.sys;
        nc.sys.values[r] = a;
        nc.basis = rref_t(mat_mul(gen, c.basis)).r;
        found += nc.basis.rows;
        next.push_back(std::move(nc));
      }
      require(found == c.basis.rows, errc::internal, "eigenspaces do not fill the component");
    }
    comps = std::move(next);
  }
  for (auto& c : comps) c.sys.label = eigLabel(F, c.sys.values);
  std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    return a.sys.label < b.sys.label;
  });
  return comps;
}

// ---------------------------------------------------------------------------
// local Hecke algebra data on a component

struct LocalAlgebra {
  int dim = 0;                         // dimension of the unital matrix algebra
  std::map<long, int> nilpotency;      // index of (T_r - value) on the component
  bool commutative = true;
};

inline LocalAlgebra local_algebra(const Fq& F, const Component& comp,
                                  const std::vector<std::pair<long, const MatF*>>& ops, int degree) {
  LocalAlgebra out;
  auto rr = rref_t(comp.basis);
  int n = comp.basis.rows;
  if (n == 0) return out;
  std::vector<std::pair<long, MatF>> gens;
  for (auto& [r, op] : ops) gens.push_back({r, restrict_op(F, comp.basis, rr, *op)});
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j)
      if (!(mat_mul(gens[i].second, gens[j].second) == mat_mul(gens[j].second, gens[i].second)))
        out.commutative = false;
  // nilpotency index of T_r - value
  for (auto& [r, G] : gens) {
    auto it = comp.sys.values.find(r);
    require(it != comp.sys.values.end(), errc::internal, "missing eigenvalue");
    MatF N = mat_sub(G, mat_scale(MatF::identity(F, n), it->second));
    MatF P = MatF::identity(F, n);
    int idx = 0;
    while (!P.is_zero() && idx <= n) {
      P = mat_mul(P, N);
      ++idx;
    }
    out.nilpotency[r] = idx;
  }
  // span of words of length <= degree in the generators (unital)
  auto flatten = [&](const MatF& m) {
    std::vector<FqElem> v;
    v.reserve(m.a.size());
    for (auto& e : m.a) v.push_back(e);
    return v;
  };
  std::vector<std::vector<FqElem>> span_rows;
  MatF spanm(F, 0, n * n);
  auto add_to_span = [&](const MatF& m) {
    std::vector<FqElem> v = flatten(m);
    MatF trial(F, spanm.rows + 1, n * n);
    for (int i = 0; i < spanm.rows; ++i) trial.set_row(i, spanm.row(i));
    trial.set_row(spanm.rows, v);
    if (rank_of(trial) > spanm.rows) {
      spanm = rref_t(trial).r;
      return true;
    }
    return false;
  };
  add_to_span(MatF::identity(F, n));
  std::vector<MatF> frontier{MatF::identity(F, n)};
  for (int len = 1; len <= degree && !frontier.empty(); ++len) {
    std::vector<MatF> next;
    for (auto& m : frontier)
      for (auto& [r, G] : gens) {
        MatF prod = mat_mul(m, G);
        if (add_to_span(prod)) next.push_back(prod);
      }
    frontier = std::move(next);
  }
  out.dim = spanm.rows;
  return out;
}

// ---------------------------------------------------------------------------
// filtrations of K(Nl)_t

struct SliceTable {
  std::vector<int> weights;
  std::vector<int> dims;
};

template <class Gr>
SliceTable slice_table(const Gr& g, const MatF& sub) {
  SliceTable t;
  std::set<int> ws(g.basis_weight.begin(), g.basis_weight.end());
  for (int k : ws) {
    t.weights.push_back(k);
    t.dims.push_back(g.slice_dim(sub, k));
  }
  return t;
}

struct Filtration {
  enum class Style { Standard, Monsky } style = Style::Standard;
  MatF bottom, middle, top;  // 0 c bottom c middle c top, coords in the graded basis
  SliceTable bottom_t, middle_t, top_t;
  bool nested = false;
  bool hecke_stable = false;
  std::vector<std::pair<int, bool>> tr_surj_per_weight;    // Tr: K_{<=k} -> K(N)_{<=k}
  std::vector<std::pair<int, bool>> trw_surj_per_weight;   // TrW: (ker Tr)_{<=k} -> K(N)_{<=k}
};

struct GradedOps {
  OpF Up, Uell, W, S, trE;  // on the level-Nl graded space
  std::vector<std::pair<long, MatF>> hecke;  // T_r matrices
  long ell = 0;
};

// common data: K_t, (ker Tr)_t, K^new_t for a component of K(Nl)
struct KComponent {
  MatF K;       // component basis inside ker U_p (graded coords)
  MatF kerTr;   // ker Tr cap K
  MatF Knew;    // ker S cap K
};

inline KComponent k_component(const Fq& F, const MatF& comp_basis, const GradedOps& ops) {
  KComponent kc;
  kc.K = comp_basis;
  kc.kerTr = kernel_in(F, kc.K, ops.trE.m);
  kc.Knew = kernel_in(F, kc.K, ops.S.m);
  return kc;
}

inline bool contains_rowspace(const MatF& big, const MatF& small) {
  if (small.rows == 0) return true;
  MatF stacked(big.R, big.rows + small.rows, big.cols);
  for (int i = 0; i < big.rows; ++i) stacked.set_row(i, big.row(i));
  for (int i = 0; i < small.rows; ++i) stacked.set_row(big.rows + i, small.row(i));
  return rank_of(stacked) == rank_of(big);
}

// standard filtration 0 c K^new_t c (ker Tr)_t c K_t with per-weight
// right-exactness certificates into the level-N component
inline Filtration standard_filtration(const GradedF& g, const GradedF& gN, const Fq& F,
                                      const KComponent& kc, const MatF& KN_t,
                                      const GradedOps& ops, const OpF& trace_to_N,
                                      const std::vector<std::pair<long, MatF>>& heckeN) {
  Filtration f;
  f.style = Filtration::Style::Standard;
  f.bottom = kc.Knew;
  f.middle = kc.kerTr;
  f.top = kc.K;
  f.bottom_t = slice_table(g, f.bottom);
  f.middle_t = slice_table(g, f.middle);
  f.top_t = slice_table(g, f.top);
  f.nested = contains_rowspace(f.middle, f.bottom) && contains_rowspace(f.top, f.middle);
  f.hecke_stable = true;
  for (auto& [r, T] : ops.hecke)
    for (const MatF* sub : {&f.bottom, &f.middle, &f.top})
      if (sub->rows && !contains_rowspace(*sub, image_of(*sub, T))) f.hecke_stable = false;
  // per-weight surjectivity of Tr and TrW onto K(N)_t
  MatF trw = mat_mul(ops.W.m, trace_to_N.m);
  for (int k : f.top_t.weights) {
    MatF Kk = g.slice(f.top, k);
    MatF img = rref_t(mat_mul(Kk, trace_to_N.m)).r;
    MatF target = gN.slice(KN_t, k);
    f.tr_surj_per_weight.push_back({k, contains_rowspace(img, target) && contains_rowspace(target, img)});
    MatF Mk = g.slice(f.middle, k);
    MatF img2 = rref_t(mat_mul(Mk, trw)).r;
    f.trw_surj_per_weight.push_back({k, contains_rowspace(img2, target) && contains_rowspace(target, img2)});
  }
  return f;
}

// Monsky filtration 0 c K(N)_t c (ker Tr)_t c K_t, only for ell = -1 mod p
inline Filtration monsky_filtration(const GradedF& g, const Fq& F, const KComponent& kc,
                                    const MatF& KN_embedded, const GradedOps& ops) {
  require((ops.ell + 1) % F.p == 0, errc::bad_congruence,
          "Monsky filtration needs ell = -1 mod p");
  Filtration f;
  f.style = Filtration::Style::Monsky;
  f.bottom = KN_embedded;
  f.middle = kc.kerTr;
  f.top = kc.K;
  f.bottom_t = slice_table(g, f.bottom);
  f.middle_t = slice_table(g, f.middle);
  f.top_t = slice_table(g, f.top);
  f.nested = contains_rowspace(f.middle, f.bottom) && contains_rowspace(f.top, f.middle);
  f.hecke_stable = true;
  for (auto& [r, T] : ops.hecke)
    for (const MatF* sub : {&f.bottom, &f.middle, &f.top})
      if (sub->rows && !contains_rowspace(*sub, image_of(*sub, T))) f.hecke_stable = false;
  return f;
}

// ---------------------------------------------------------------------------
// Prop. monskyfiltruth at truncation: the decidable fragment of
//   0 -> ker T_ell|K(N)_t -> K^new_t -> K^Monsky_t -> 0

struct MonskyTruthReport {
  bool kernel_exact = false;       // K^new cap K(N) == ker T_ell|K(N), as subspaces
  bool equivariant = false;        // connecting map commutes with every T_r
  bool annihilators_equal = false; // same vanishing words of length <= deg
  int words_tested = 0;
  int algebra_dim_new = 0, algebra_dim_monsky = 0;
  std::vector<std::pair<int, int>> slice_defect;  // (k, surjectivity defect)
  int top_defect = 0;
};

// quotient matrices of the T_r action on (ker Tr)_t / K(N)_t
inline MatF quotient_matrix(const Fq& F, const MatF& quot_reps, const MatF& bottom, const MatF& T) {
  int nq = quot_reps.rows, nb = bottom.rows;
  MatF full(F, nq + nb, quot_reps.cols);
  for (int i = 0; i < nq; ++i) full.set_row(i, quot_reps.row(i));
  for (int i = 0; i < nb; ++i) full.set_row(nq + i, bottom.row(i));
  auto rr = rref_t(full);
  MatF out(F, nq, nq);
  for (int i = 0; i < nq; ++i) {
    auto img = vec_mat(quot_reps.row(i), T);
    auto cs = coords_in(rr, img);
    require(cs.has_value(), errc::not_stable, "operator leaves middle + bottom");
    for (int j = 0; j < nq; ++j) out.at(i, j) = (*cs)[j];
  }
  return out;
}

inline std::vector<std::vector<int>> monomial_words(int gens, int maxlen) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // multisets as non-decreasing index sequences
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    if (!cur.empty()) out.push_back(cur);
    if (remaining == 0) return;
    for (int i = start; i < gens; ++i) {
      cur.push_back(i);
      rec(i, remaining - 1);
      cur.pop_back();
    }
  };
  rec(0, maxlen);
  return out;
}

inline MonskyTruthReport monskyfiltruth_check(const GradedF& g, const GradedF& gN, const Fq& F,
                                              const KComponent& kc, const MatF& KN_t_atN,
                                              const MatF& KN_embedded, const OpF& embedN,
                                              const GradedOps& ops,
                                              const std::vector<std::pair<long, MatF>>& heckeN,
                                              int word_degree = 8) {
  MonskyTruthReport rep;
  // ker T_ell on K(N)_t, computed at level N with the good-prime formula
  MatF TellN(F, 0, 0);
  for (auto& [r, m] : heckeN)
    if (r == ops.ell) TellN = m;
  require(TellN.rows > 0, errc::internal, "T_ell at level N missing");
  MatF kerTell_atN = kernel_in(F, KN_t_atN, TellN);
  MatF kerTell = rref_t(mat_mul(kerTell_atN, embedN.m)).r;  // embedded into level Nl
  // (i) kernel-exactness as subspaces: K^new cap K(N) == ker T_ell|K(N)
  MatF inter = rowspace_intersect(kc.Knew, KN_embedded);
  rep.kernel_exact = same_rowspace(inter, kerTell);
  // per-slice surjectivity defect of K^new -> Monsky = (ker Tr)/K(N)
  for (int k : slice_table(g, kc.K).weights) {
    int d_new = g.slice_dim(kc.Knew, k);
    int d_ker = g.slice_dim(kerTell, k);
    int d_mid = g.slice_dim(kc.kerTr, k);
    int d_bot = g.slice_dim(KN_embedded, k);
    int defect = (d_ker + (d_mid - d_bot)) - d_new;
    rep.slice_defect.push_back({k, defect});
    rep.top_defect = defect;
  }
  // (ii) equivariance of the connecting map: T_r on K^new pushed to the
  // quotient equals the quotient action applied to the image
  // quotient representatives: extend K(N)_t to (ker Tr)_t
  std::vector<std::vector<FqElem>> reps;
  {
    MatF accum = KN_embedded;
    for (int i = 0; i < kc.kerTr.rows; ++i) {
      MatF trial(F, accum.rows + 1, accum.cols);
      for (int j = 0; j < accum.rows; ++j) trial.set_row(j, accum.row(j));
      trial.set_row(accum.rows, kc.kerTr.row(i));
      if (rank_of(trial) > accum.rows) {
        reps.push_back(kc.kerTr.row(i));
        accum = trial;
      }
    }
  }
  MatF quot(F, (int)reps.size(), g.dim());
  for (int i = 0; i < quot.rows; ++i) quot.set_row(i, reps[i]);
  rep.equivariant = true;
  auto newrr = rref_t(kc.Knew);
  // connecting map: K^new row -> coords in quotient
  int nq = quot.rows, nb = KN_embedded.rows;
  MatF full(F, nq + nb, g.dim());
  for (int i = 0; i < nq; ++i) full.set_row(i, quot.row(i));
  for (int i = 0; i < nb; ++i) full.set_row(nq + i, KN_embedded.row(i));
  auto fullrr = rref_t(full);
  auto to_quot = [&](const std::vector<FqElem>& v) {
    auto cs = coords_in(fullrr, v);
    require(cs.has_value(), errc::internal, "element outside ker Tr");
    return std::vector<FqElem>(cs->begin(), cs->begin() + nq);
  };
  MatF conn(F, kc.Knew.rows, nq);
  for (int i = 0; i < kc.Knew.rows; ++i) conn.set_row(i, to_quot(kc.Knew.row(i)));
  for (auto& [r, T] : ops.hecke) {
    MatF Tnew = restrict_op(F, kc.Knew, newrr, T);
    MatF Tq = quotient_matrix(F, quot, KN_embedded, T);
    if (!(mat_mul(Tnew, conn) == mat_mul(conn, Tq))) rep.equivariant = false;
  }
  // (iii) annihilator words and algebra dimensions
  std::vector<MatF> gens_new, gens_q;
  for (auto& [r, T] : ops.hecke) {
    gens_new.push_back(restrict_op(F, kc.Knew, newrr, T));
    gens_q.push_back(quotient_matrix(F, quot, KN_embedded, T));
  }
  auto words = monomial_words((int)gens_new.size(), word_degree);
  rep.words_tested = (int)words.size();
  rep.annihilators_equal = true;
  for (auto& w : words) {
    MatF a = MatF::identity(F, kc.Knew.rows), b = MatF::identity(F, nq);
    for (int gi : w) {
      a = mat_mul(a, gens_new[gi]);
      b = mat_mul(b, gens_q[gi]);
    }
    if (a.is_zero() != b.is_zero()) rep.annihilators_equal = false;
  }
  // algebra dims via the span of word matrices
  auto algdim = [&](const std::vector<MatF>& gens, int n) {
    if (n == 0) return 0;
    MatF spanm(F, 0, n * n);
    auto add = [&](const MatF& m) {
      MatF trial(F, spanm.rows + 1, n * n);
      for (int i = 0; i < spanm.rows; ++i) trial.set_row(i, spanm.row(i));
      std::vector<FqElem> v;
      for (auto& e : m.a) v.push_back(e);
      trial.set_row(spanm.rows, v);
      if (rank_of(trial) > spanm.rows) {
        spanm = rref_t(trial).r;
        return true;
      }
      return false;
    };
    add(MatF::identity(F, n));
    std::vector<MatF> frontier{MatF::identity(F, n)};
    for (int len = 1; len <= word_degree && !frontier.empty(); ++len) {
      std::vector<MatF> next;
      for (auto& m : frontier)
        for (auto& gmat : gens) {
          MatF prod = mat_mul(m, gmat);
          if (add(prod)) next.push_back(prod);
        }
      frontier = std::move(next);
    }
    return spanm.rows;
  };
  rep.algebra_dim_new = algdim(gens_new, kc.Knew.rows);
  rep.algebra_dim_monsky = algdim(gens_q, nq);
  return rep;
}

// ---------------------------------------------------------------------------
// Surj / NZDiv style data for an operator word on K(N)_t

struct SurjNzReport {
  std::vector<std::pair<int, bool>> surj_per_weight;  // T K_{<=k} covers K_{<=k-shift}?
  bool nzdiv = false;
};

inline SurjNzReport surj_nzdiv(const GradedF& gN, const Fq& F, const MatF& KN_t, const MatF& word,
                               const std::vector<std::pair<long, MatF>>& heckeN, int word_degree) {
  SurjNzReport rep;
  for (int k : slice_table(gN, KN_t).weights) {
    MatF Kk = gN.slice(KN_t, k);
    MatF img = rref_t(mat_mul(Kk, word)).r;
    MatF target = gN.slice(KN_t, k);
    rep.surj_per_weight.push_back({k, same_rowspace(img, target)});
  }
  // NZDiv on the truncated algebra: left-multiplication by the word is
  // injective on the span of tested word matrices
  auto rr = rref_t(KN_t);
  MatF wrest = restrict_op(F, KN_t, rr, word);
  std::vector<MatF> gens;
  for (auto& [r, T] : heckeN) gens.push_back(restrict_op(F, KN_t, rr, T));
  int n = KN_t.rows;
  std::vector<MatF> alg{MatF::identity(F, n)};
  std::vector<MatF> frontier = alg;
  MatF spanm(F, 0, n * n);
  auto add = [&](const MatF& m) {
    MatF trial(F, spanm.rows + 1, n * n);
    for (int i = 0; i < spanm.rows; ++i) trial.set_row(i, spanm.row(i));
    std::vector<FqElem> v;
    for (auto& e : m.a) v.push_back(e);
    trial.set_row(spanm.rows, v);
    if (rank_of(trial) > spanm.rows) {
      spanm = rref_t(trial).r;
      return true;
    }
    return false;
  };
  add(alg[0]);
  for (int len = 1; len <= word_degree && !frontier.empty(); ++len) {
    std::vector<MatF> next;
    for (auto& m : frontier)
      for (auto& gmat : gens) {
        MatF prod = mat_mul(m, gmat);
        if (add(prod)) {
          next.push_back(prod);
          alg.push_back(prod);
        }
      }
    frontier = std::move(next);
  }
  rep.nzdiv = n > 0 && !wrest.is_zero();
  for (auto& m : alg) {
    if (m.is_zero()) continue;
    if (mat_mul(m, wrest).is_zero()) rep.nzdiv = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// duality basis m(a,b) dual to x^a y^b under <T, f> = a_1(T f)

struct DualBasis {
  int degree = 0;
  std::vector<std::pair<int, int>> words;  // (a, b), a+b <= degree
  MatF duals;                              // row per word: coords in the K basis
  bool shifts_ok = false;
};

inline DualBasis duality_basis(const GradedF& g, const Fq& F, const MatF& K, const MatF& X,
                               const MatF& Y, int degree) {
  DualBasis out;
  out.degree = degree;
  for (int s = 0; s <= degree; ++s)
    for (int b = 0; b <= s; ++b) out.words.push_back({s - b, b});
  int nw = (int)out.words.size();
  int n = K.rows;
  require(n >= nw, errc::pairing_degenerate, "kmax too small for the requested degree");
  auto rr = rref_t(K);
  MatF Xr = restrict_op(F, K, rr, X), Yr = restrict_op(F, K, rr, Y);
  // word matrices
  std::map<std::pair<int, int>, MatF> wm;
  wm[{0, 0}] = MatF::identity(F, n);
  for (auto& [a, b] : out.words) {
    if (a == 0 && b == 0) continue;
    if (a > 0)
      wm[{a, b}] = mat_mul(wm.at({a - 1, b}), Xr);
    else
      wm[{a, b}] = mat_mul(wm.at({a, b - 1}), Yr);
  }
  // a_1 of the expansion of each K basis row
  std::vector<FqElem> a1(n);
  for (int i = 0; i < n; ++i) {
    auto exp = g.expand(K.row(i));
    a1[i] = exp[1];
  }
  // pairing P[w][j] = a_1( word applied to K_j )
  MatF P(F, nw, n);
  for (int wi = 0; wi < nw; ++wi) {
    const MatF& m = wm.at(out.words[wi]);
    for (int j = 0; j < n; ++j) {
      FqElem s = F.zero();
      for (int t = 0; t < n; ++t) s = F.add(s, F.mul(m.at(j, t), a1[t]));
      P.at(wi, j) = s;
    }
  }
  require(rank_of(P) == nw, errc::pairing_degenerate, "pairing not perfect at this truncation");
  // solve duals: v_w with P * v_w = e_w, i.e. right-solve; use rref of P^T
  auto prr = rref_t(P.transpose());  // rows indexed by K coords, cols by words
  out.duals = MatF(F, nw, n);
  for (int wi = 0; wi < nw; ++wi) {
    std::vector<FqElem> e(nw, F.zero());
    e[wi] = F.one();
    auto cs = coords_in(prr, e);
    require(cs.has_value(), errc::pairing_degenerate, "dual solve failed");
    out.duals.set_row(wi, *cs);
  }
  // shift relations x m(a,b) = m(a-1,b), y m(a,b) = m(a,b-1), zero at the edge
  out.shifts_ok = true;
  auto widx = [&](int a, int b) {
    for (int i = 0; i < nw; ++i)
      if (out.words[i] == std::make_pair(a, b)) return i;
    return -1;
  };
  for (int wi = 0; wi < nw; ++wi) {
    auto [a, b] = out.words[wi];
    auto xi = vec_mat(out.duals.row(wi), Xr);
    auto yi = vec_mat(out.duals.row(wi), Yr);
    std::vector<FqElem> ex(n, F.zero()), ey(n, F.zero());
    if (a >= 1) ex = out.duals.row(widx(a - 1, b));
    if (b >= 1) ey = out.duals.row(widx(a, b - 1));
    if (xi != ex || yi != ey) out.shifts_ok = false;
  }
  return out;
}

}  // namespace mfx
