#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfx/dims.hpp"
#include "mfx/error.hpp"
#include "mfx/fixtures.hpp"
#include "mfx/linalg.hpp"
#include "mfx/rings.hpp"
#include "mfx/series.hpp"

namespace mfx {

struct SpaceParams {
  long level = 1;
  int weight = 0;
  RingDesc ring = RingDesc::QQ();
  int prec = 0;
  bool cuspidal = true;
};

// spanning rows are products of atoms, each with a closed-form W_ell image
struct Atom {
  enum class Kind { E4, E6, Delta, Phi, Fixture } kind;
  long e = 1;                          // embedding q -> q^e
  long phi_r = 0;                      // Phi: source prime r
  const NewformFixture* fx = nullptr;  // Fixture
  int weight() const {
    switch (kind) {
      case Kind::E4: return 4;
      case Kind::E6: return 6;
      case Kind::Delta: return 12;
      case Kind::Phi: return 2;
      case Kind::Fixture: return fx->weight;
    }
    return 0;
  }
  long source_level() const {
    switch (kind) {
      case Kind::Phi: return phi_r;
      case Kind::Fixture: return fx->level;
      default: return 1;
    }
  }
};

struct Provenance {
  enum class Tag { Level1Monomial, OldEmbed, NewformFixture, EchelonDerived } tag =
      Tag::EchelonDerived;
  long divisor = 1;
  std::string label;
};

struct SpanRow {
  std::vector<Atom> atoms;  // product; empty = constant 1
  Provenance prov;
};

// ---------------------------------------------------------------------------
// series cache for atoms at a fixed working precision

class AtomSeries {
 public:
  explicit AtomSeries(int prec) : prec_(prec) {}

  const SeriesQ& get(const Atom& a) {
    auto key = std::make_tuple((int)a.kind, a.e, a.phi_r, a.fx ? a.fx->label : std::string());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    SeriesQ base = base_series(a);
    SeriesQ s = a.e == 1 ? base : apply_V(base.truncated((prec_ - 1) / (int)a.e + 1), (int)a.e).truncated(prec_);
    return cache_.emplace(key, std::move(s)).first->second;
  }

  SeriesQ product(const std::vector<Atom>& atoms) {
    SeriesQ r(Qq{true}, prec_);
    r.c[0] = 1;
    for (const auto& a : atoms) r = qexp_mul(r, get(a));
    return r;
  }

  // W_ell image of a product row: product of per-atom images (W_ell is an
  // algebra automorphism over Q); stays integral since each atom image does
  SeriesQ w_image(const std::vector<Atom>& atoms, long ell) {
    SeriesQ r(Qq{true}, prec_);
    r.c[0] = 1;
    for (const auto& a : atoms) r = qexp_mul(r, w_atom(a, ell));
    return r;
  }

  int prec() const { return prec_; }

 private:
  SeriesQ base_series(const Atom& a) {
    switch (a.kind) {
      case Atom::Kind::E4: return eisenstein(4, prec_, EisNorm::ConstantOne, true);
      case Atom::Kind::E6: return eisenstein(6, prec_, EisNorm::ConstantOne, true);
      case Atom::Kind::Delta: return eta_delta(prec_);
      case Atom::Kind::Phi: return eisenstein2_level((int)a.phi_r, prec_);
      case Atom::Kind::Fixture: return a.fx->series(prec_);
    }
    fail(errc::internal, "atom");
  }

  SeriesQ w_atom(const Atom& a, long ell) {
    long d = a.source_level();
    if (d % ell == 0) {
      // U_ell eigen-row: W = -ell * a_ell(source) * same row
      Rat eig;
      if (a.kind == Atom::Kind::Phi)
        eig = 1;  // U_ell phi_ell = phi_ell
      else
        eig = Rat(a.fx->a(ell));
      return qexp_scale(get(a), Rat(-ell) * eig);
    }
    // away from ell: pair rule at the atom's own weight
    if (a.e % ell == 0) {
      Atom partner = a;
      partner.e = a.e / ell;
      return get(partner);
    }
    Atom partner = a;
    partner.e = a.e * ell;
    return qexp_scale(get(partner), Rat(pow_int(Int(ell), (unsigned)a.weight())));
  }

  int prec_;
  std::map<std::tuple<int, long, long, std::string>, SeriesQ> cache_;
};

// ---------------------------------------------------------------------------
// saturation of a span of genuine forms, by truncated Smith form plus lift

struct Saturated {
  ZMat rows;  // saturated integral basis, full precision
  int used_cols = 0;
};

inline ZMat series_to_zmat(const std::vector<SeriesQ>& rows) {
  ZMat out;
  for (const auto& r : rows) {
    std::vector<Int> v(r.prec);
    for (int n = 0; n < r.prec; ++n) {
      require(denominator(r.c[n]) == 1, errc::non_integral_series, "span row not integral");
      v[n] = numerator(r.c[n]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

// At primes away from the level, sturm+1 columns certify integrality of the
// lift; at primes dividing the level the window grows until the lift is
// integral through the working precision.
inline Saturated saturate_span(const std::vector<SeriesQ>& span, int k, long M) {
  require(!span.empty(), errc::internal, "empty span");
  int prec = span[0].prec;
  ZMat zspan = series_to_zmat(span);
  int c0 = std::min(prec, sturm_bound(k, M) + 1);
  MatQ mspan(Qq{false}, (int)span.size(), prec);
  for (int i = 0; i < (int)span.size(); ++i)
    for (int n = 0; n < prec; ++n) mspan.at(i, n) = Rat(zspan[i][n]);
  while (true) {
    ZMat small;
    for (auto& r : zspan) small.emplace_back(r.begin(), r.begin() + c0);
    ZMat sat_small = saturate_rows(small);
    if (sat_small.empty()) return {};
    // lift: coords of each saturated row in the span (on c0 columns), applied at full precision
    MatQ msmall(Qq{false}, (int)small.size(), c0);
    for (int i = 0; i < (int)small.size(); ++i)
      for (int j = 0; j < c0; ++j) msmall.at(i, j) = Rat(small[i][j]);
    auto rr = rref_t(msmall);
    bool ok = true;
    ZMat out;
    for (auto& srow : sat_small) {
      std::vector<Rat> v(c0);
      for (int j = 0; j < c0; ++j) v[j] = Rat(srow[j]);
      auto cs = coords_in(rr, v);
      require(cs.has_value(), errc::internal, "saturation row not in span");
      std::vector<Rat> full = vec_mat(*cs, mspan);
      std::vector<Int> zrow(prec);
      for (int n = 0; n < prec && ok; ++n) {
        if (denominator(full[n]) != 1) ok = false;
        else zrow[n] = numerator(full[n]);
      }
      if (!ok) break;
      out.push_back(std::move(zrow));
    }
    if (ok) return {out, c0};
    ++c0;
    require(c0 <= prec, errc::precision_too_low, "saturation did not stabilize within precision");
  }
}

// ---------------------------------------------------------------------------

struct SpaceQ {
  SpaceParams params;
  MatQ sat;        // saturated basis rows (integral entries)
  MatQ presat;     // spanning rows used to build the space
  std::vector<SpanRow> origin;  // one per presat row
  MatQ X;          // sat = X * presat
  Rref<Qq> sat_rref;
  Rref<Qq> presat_rref;
  bool complete = false;
  int dim_target = 0;
  std::shared_ptr<AtomSeries> atoms;

  int dim() const { return sat.rows; }
  int prec() const { return params.prec; }

  SeriesQ row_series(int i) const {
    SeriesQ f(Qq{params.ring.kind == RingDesc::Kind::Integers}, params.prec);
    for (int n = 0; n < params.prec; ++n) f.c[n] = sat.at(i, n);
    return f;
  }

  // coordinates in the saturated basis; vector valid through valid_cols
  std::optional<std::vector<Rat>> member(const std::vector<Rat>& v, int valid_cols = -1) const {
    return coords_in(sat_rref, v, valid_cols);
  }
  std::optional<std::vector<Rat>> member(const SeriesQ& f) const {
    require(f.prec >= sturm_bound(params.weight, params.level) + 1, errc::precision_too_low,
            "membership needs at least the Sturm window");
    return coords_in(sat_rref, f.c, std::min(f.prec, params.prec));
  }

  std::vector<Rat> expand(const std::vector<Rat>& coords) const {
    return vec_mat(coords, sat);
  }
};

namespace detail {

// Victor Miller monomials for M_k(1) / S_k(1): E4^a E6^b Delta^j, echelonized.
// Returned rows are already an integral echelon basis with unit pivots.
inline std::vector<std::vector<Atom>> vm_monomials(int k, bool cuspidal) {
  std::vector<std::vector<Atom>> rows;
  if (k < 0 || k % 2) return rows;
  if (k == 0) {
    if (!cuspidal) rows.push_back({});
    return rows;
  }
  if (k == 2) return rows;
  for (int j = 0; 12 * j <= k; ++j) {
    int r = k - 12 * j;
    if (r == 2) continue;
    int b = (r % 4 == 2) ? 1 : 0;
    int a = (r - 6 * b) / 4;
    if (cuspidal && j == 0) continue;
    std::vector<Atom> at;
    for (int t = 0; t < j; ++t) at.push_back({Atom::Kind::Delta, 1});
    for (int t = 0; t < a; ++t) at.push_back({Atom::Kind::E4, 1});
    for (int t = 0; t < b; ++t) at.push_back({Atom::Kind::E6, 1});
    rows.push_back(std::move(at));
  }
  return rows;
}

inline std::vector<Atom> embed_atoms(std::vector<Atom> atoms, long e) {
  for (auto& a : atoms) a.e *= e;
  return atoms;
}

// G_j: level-1 form with a_0 = 1 of weight j >= 4
inline std::vector<Atom> level1_unit(int j) {
  int b = (j % 4 == 2) ? 1 : 0;
  int a = (j - 6 * b) / 4;
  std::vector<Atom> at;
  for (int t = 0; t < a; ++t) at.push_back({Atom::Kind::E4, 1});
  for (int t = 0; t < b; ++t) at.push_back({Atom::Kind::E6, 1});
  return at;
}

// cusp generator of the prime-level ring recursion
inline const NewformFixture* cusp_generator(long ell, const FixturePack& pack) {
  int w = ell == 3 ? 6 : 4;
  auto cands = pack.at(ell, w);
  require(!cands.empty(), errc::incomplete_fixtures,
          "missing level-" + std::to_string(ell) + " weight-" + std::to_string(w) + " generator fixture");
  return cands[0];
}

// spanning atom-products for M_j(Gamma0(ell)), ell in {3,5}:
//   M_j = <G_j(q), G_j(q^ell)> + Delta_ell * M_{j-w}
inline void m_span_prime(long ell, int j, const FixturePack& pack, int delta_pow,
                         std::vector<std::vector<Atom>>& out) {
  if (j < 0 || j % 2) return;
  const NewformFixture* dl = cusp_generator(ell, pack);
  int w = dl->weight;
  auto with_delta = [&](std::vector<Atom> at) {
    for (int t = 0; t < delta_pow; ++t) at.push_back({Atom::Kind::Fixture, 1, 0, dl});
    return at;
  };
  if (j == 0) {
    out.push_back(with_delta({}));
    return;
  }
  if (j == 2) {
    out.push_back(with_delta({{Atom::Kind::Phi, 1, ell}}));
    return;
  }
  out.push_back(with_delta(level1_unit(j)));
  out.push_back(with_delta(embed_atoms(level1_unit(j), ell)));
  m_span_prime(ell, j - w, pack, delta_pow + 1, out);
}

// spanning atom-products for M_j(Gamma0(15)):
//   M_j = Eis_j + e2 * M_{j-2},  Eis via E_j(q^e) (j>=4) / phi rows (j=2)
inline void m_span_15(int j, const FixturePack& pack, int e2_pow,
                      std::vector<std::vector<Atom>>& out) {
  if (j < 0 || j % 2) return;
  auto e2s = pack.at(15, 2);
  require(!e2s.empty(), errc::incomplete_fixtures, "missing level-15 weight-2 generator fixture");
  const NewformFixture* e2 = e2s[0];
  auto with_e2 = [&](std::vector<Atom> at) {
    for (int t = 0; t < e2_pow; ++t) at.push_back({Atom::Kind::Fixture, 1, 0, e2});
    return at;
  };
  if (j == 0) {
    out.push_back(with_e2({}));
    return;
  }
  if (j == 2) {
    for (long r : {3L, 5L})
      for (long e : {1L, 15 / r})
        out.push_back(with_e2({{Atom::Kind::Phi, e, r}}));
    out.push_back(with_e2({{Atom::Kind::Fixture, 1, 0, e2}}));
    return;
  }
  // Eisenstein block E_j(q^e): represent E_j as a level-1 unit G_j; the span
  // of G_j(q^e) over e | 15 plus cusp rows covers Eis_j
  for (long e : {1L, 3L, 5L, 15L}) out.push_back(with_e2(embed_atoms(level1_unit(j), e)));
  m_span_15(j - 2, pack, e2_pow + 1, out);
}

inline std::vector<std::vector<Atom>> ring_span(long M, int k, const FixturePack& pack, bool cuspidal) {
  std::vector<std::vector<Atom>> rows;
  if (M == 1) {
    return vm_monomials(k, cuspidal);
  } else if (M == 3 || M == 5) {
    const NewformFixture* dl = cusp_generator(M, pack);
    int w = dl->weight;
    if (cuspidal) {
      m_span_prime(M, k - w, pack, 1, rows);
    } else {
      m_span_prime(M, k, pack, 0, rows);
    }
  } else if (M == 15) {
    if (cuspidal) {
      m_span_15(k - 2, pack, 1, rows);
    } else {
      m_span_15(k, pack, 0, rows);
    }
  } else {
    fail(errc::unsupported, "ring generators not available for level " + std::to_string(M));
  }
  return rows;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// space builders

// saturated echelon basis of M_k(1) or S_k(1) from E4/E6/Delta monomials
inline SpaceQ build_level1(int k, bool cuspidal, int prec,
                           std::shared_ptr<AtomSeries> atoms = nullptr) {
  require(prec >= sturm_bound(k, 1) + 1, errc::precision_too_low, "prec below Sturm window");
  SpaceQ sp;
  sp.params = {1, k, RingDesc::ZZ(), prec, cuspidal};
  sp.atoms = atoms ? atoms : std::make_shared<AtomSeries>(prec);
  require(sp.atoms->prec() >= prec, errc::precision_too_low, "atom cache precision");
  auto monos = detail::vm_monomials(k, cuspidal);
  DimData dd = dim_data(1, k);
  sp.dim_target = cuspidal ? dd.dim_Sk : dd.dim_Mk;
  std::vector<SeriesQ> rows;
  sp.origin.clear();
  for (auto& mo : monos) {
    rows.push_back(sp.atoms->product(mo).truncated(prec));
    sp.origin.push_back({mo, {Provenance::Tag::Level1Monomial, 1, "vm"}});
  }
  sp.presat = MatQ(Qq{false}, (int)rows.size(), prec);
  for (int i = 0; i < (int)rows.size(); ++i) sp.presat.set_row(i, rows[i].c);
  if (rows.empty()) {
    sp.sat = MatQ(Qq{false}, 0, prec);
    sp.complete = sp.dim_target == 0;
    return sp;
  }
  auto satd = saturate_span(rows, k, 1);
  sp.sat = MatQ(Qq{false}, (int)satd.rows.size(), prec);
  for (int i = 0; i < (int)satd.rows.size(); ++i)
    for (int n = 0; n < prec; ++n) sp.sat.at(i, n) = Rat(satd.rows[i][n]);
  sp.sat_rref = rref_t(sp.sat);
  sp.presat_rref = rref_t(sp.presat);
  sp.complete = sp.sat.rows == sp.dim_target;
  require(sp.complete, errc::internal, "level-1 basis incomplete");
  // X: sat rows in presat coordinates
  sp.X = MatQ(Qq{false}, sp.sat.rows, sp.presat.rows);
  for (int i = 0; i < sp.sat.rows; ++i) {
    auto cs = coords_in(sp.presat_rref, sp.sat.row(i));
    require(cs.has_value(), errc::internal, "saturated row outside span");
    sp.X.set_row(i, *cs);
  }
  return sp;
}

enum class TopUp { Allowed, FixturesOnly };

// Space of S_k(Gamma0(M)) or M_k(Gamma0(M)) over Z (saturated basis), built
// from divisor embeddings of level-1 monomials and newform fixtures, topped up
// with ring-generated rows when fixtures do not cover a Galois orbit.
inline SpaceQ build_space(const SpaceParams& params, const FixturePack& pack,
                          TopUp topup = TopUp::Allowed,
                          std::shared_ptr<AtomSeries> atoms = nullptr) {
  long M = params.level;
  int k = params.weight;
  int prec = params.prec;
  require(prec >= sturm_bound(k, M) + 1, errc::precision_too_low, "prec below Sturm window");
  require(k % 2 == 0 && k >= 0, errc::unsupported, "even weights only");
  for (long p = 2; p * p <= M; ++p)
    require(M % (p * p) != 0, errc::unsupported, "level must be squarefree");
  if (M == 1) return build_level1(k, params.cuspidal, prec, atoms);

  SpaceQ sp;
  sp.params = params;
  sp.atoms = atoms ? atoms : std::make_shared<AtomSeries>(prec);
  DimData dd = dim_data(M, k);
  sp.dim_target = params.cuspidal ? dd.dim_Sk : dd.dim_Mk;

  std::vector<SeriesQ> rows;
  auto add_row = [&](std::vector<Atom> at, Provenance prov) {
    rows.push_back(sp.atoms->product(at).truncated(prec));
    sp.origin.push_back({std::move(at), std::move(prov)});
  };

  if (k == 0) {
    if (!params.cuspidal) add_row({}, {Provenance::Tag::Level1Monomial, 1, "1"});
  } else {
    // d = 1: level-1 embeddings (cusp monomials; Eisenstein units for the M-variant)
    for (long e = 1; e <= M; ++e) {
      if (M % e) continue;
      for (auto& mo : detail::vm_monomials(k, true))
        add_row(detail::embed_atoms(mo, e),
                {e == 1 ? Provenance::Tag::Level1Monomial : Provenance::Tag::OldEmbed, 1, "vm"});
      if (!params.cuspidal && k >= 4)
        add_row(detail::embed_atoms(detail::level1_unit(k), e),
                {e == 1 ? Provenance::Tag::Level1Monomial : Provenance::Tag::OldEmbed, 1, "eis"});
    }
    if (!params.cuspidal && k == 2) {
      for (long r = 2; r <= M; ++r) {
        if (M % r != 0 || !is_prime(Int(r))) continue;
        for (long e = 1; e <= M / r; ++e)
          if ((M / r) % e == 0)
            add_row({{Atom::Kind::Phi, e, r}},
                    {Provenance::Tag::EchelonDerived, r, "phi" + std::to_string(r)});
      }
    }
    // d > 1: fixture embeddings (skip fixtures without enough coefficients)
    for (long d = 2; d <= M; ++d) {
      if (M % d) continue;
      for (const auto* fx : pack.at(d, k)) {
        for (long e = 1; e <= M / d; ++e) {
          if ((M / d) % e) continue;
          if ((long)fx->max_n() < (prec - 1) / e) {
            require(topup == TopUp::Allowed, errc::precision_too_low,
                    fx->label + ": too few coefficients for prec " + std::to_string(prec));
            continue;
          }
          add_row({{Atom::Kind::Fixture, e, 0, fx}},
                  {e == 1 ? Provenance::Tag::NewformFixture : Provenance::Tag::OldEmbed, d, fx->label});
        }
      }
    }
  }

  // rank check; top up from ring generators when short
  auto rank_now = [&]() {
    if (rows.empty()) return 0;
    MatQ m(Qq{false}, (int)rows.size(), std::min(prec, sturm_bound(k, M) + 1));
    for (int i = 0; i < (int)rows.size(); ++i)
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i].c[j];
    return rank_of(m);
  };
  int have = rank_now();
  if (have < sp.dim_target) {
    require(topup == TopUp::Allowed, errc::incomplete_fixtures,
            "fixtures cover " + std::to_string(have) + " of " + std::to_string(sp.dim_target) +
                " dimensions at level " + std::to_string(M) + " weight " + std::to_string(k));
    auto extra = detail::ring_span(M, k, pack, params.cuspidal);
    size_t base = rows.size();
    for (auto& at : extra)
      add_row(std::move(at), {Provenance::Tag::EchelonDerived, M, "ring"});
    have = rank_now();
    require(have == sp.dim_target, errc::incomplete_fixtures,
            "ring generators rank " + std::to_string(have) + " of " + std::to_string(sp.dim_target));
    (void)base;
  }
  require(have == sp.dim_target, errc::internal, "rank exceeds dimension formula");

  if (rows.empty()) {
    sp.sat = MatQ(Qq{false}, 0, prec);
    sp.presat = MatQ(Qq{false}, 0, prec);
    sp.complete = sp.dim_target == 0;
    return sp;
  }

  auto satd = saturate_span(rows, k, M);
  sp.sat = MatQ(Qq{false}, (int)satd.rows.size(), prec);
  for (int i = 0; i < sp.sat.rows; ++i)
    for (int n = 0; n < prec; ++n) sp.sat.at(i, n) = Rat(satd.rows[i][n]);
  require(sp.sat.rows == sp.dim_target, errc::internal, "saturation changed rank");
  sp.presat = MatQ(Qq{false}, (int)rows.size(), prec);
  for (int i = 0; i < (int)rows.size(); ++i) sp.presat.set_row(i, rows[i].c);
  sp.sat_rref = rref_t(sp.sat);
  sp.presat_rref = rref_t(sp.presat);
  sp.complete = true;
  sp.X = MatQ(Qq{false}, sp.sat.rows, sp.presat.rows);
  for (int i = 0; i < sp.sat.rows; ++i) {
    auto cs = coords_in(sp.presat_rref, sp.sat.row(i));
    require(cs.has_value(), errc::internal, "saturated row outside span");
    sp.X.set_row(i, *cs);
  }
  return sp;
}

// elementary divisors of the sublattice spanned by the given forms inside the
// saturated lattice of the space (the congruence-index data)
inline std::vector<Int> sublattice_divisors(const SpaceQ& sp, const std::vector<SeriesQ>& forms) {
  ZMat coords;
  for (const auto& f : forms) {
    auto cs = sp.member(f);
    require(cs.has_value(), errc::invariant_violation, "form not in space");
    std::vector<Int> row;
    for (auto& c : *cs) {
      require(denominator(c) == 1, errc::not_p_integral, "form not in the integral lattice");
      row.push_back(numerator(c));
    }
    coords.push_back(std::move(row));
  }
  return smith_divisors(coords);
}

}  // namespace mfx
