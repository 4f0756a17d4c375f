#pragma once

#include <map>
#include <vector>

#include "mfx/error.hpp"
#include "mfx/rings.hpp"

namespace mfx {

// univariate polynomials over F_{p^m}: coefficient vectors, low to high
using FqPoly = std::vector<FqElem>;

inline FqPoly poly_trim(const Fq& F, FqPoly f) {
  while (!f.empty() && F.is_zero(f.back())) f.pop_back();
  return f;
}
inline int poly_deg(const FqPoly& f) { return (int)f.size() - 1; }

inline FqPoly poly_sub(const Fq& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), F.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  return poly_trim(F, r);
}

inline FqPoly poly_mul(const Fq& F, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, F.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (F.is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  return poly_trim(F, r);
}

inline FqPoly poly_monic(const Fq& F, FqPoly f) {
  f = poly_trim(F, f);
  if (f.empty()) return f;
  FqElem inv = F.inv(f.back());
  for (auto& c : f) c = F.mul(c, inv);
  return f;
}

inline std::pair<FqPoly, FqPoly> poly_divmod(const Fq& F, FqPoly a, const FqPoly& b) {
  require(!b.empty(), errc::internal, "poly division by zero");
  FqElem lead_inv = F.inv(b.back());
  a = poly_trim(F, a);
  if (a.size() < b.size()) return {{}, a};
  FqPoly q(a.size() - b.size() + 1, F.zero());
  for (int i = (int)a.size() - (int)b.size(); i >= 0; --i) {
    FqElem c = F.mul(a[i + b.size() - 1], lead_inv);
    if (F.is_zero(c)) continue;
    q[i] = c;
    for (size_t j = 0; j < b.size(); ++j) a[i + j] = F.sub(a[i + j], F.mul(c, b[j]));
  }
  return {poly_trim(F, q), poly_trim(F, a)};
}

inline FqPoly poly_gcd(const Fq& F, FqPoly a, FqPoly b) {
  a = poly_trim(F, a);
  b = poly_trim(F, b);
  while (!b.empty()) {
    auto [q, r] = poly_divmod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(F, a);
}

inline FqPoly poly_powmod(const Fq& F, FqPoly base, Int e, const FqPoly& mod) {
  FqPoly r{F.one()};
  base = poly_divmod(F, base, mod).second;
  while (e > 0) {
    if ((e & 1) != 0) r = poly_divmod(F, poly_mul(F, r, base), mod).second;
    base = poly_divmod(F, poly_mul(F, base, base), mod).second;
    e >>= 1;
  }
  return r;
}

inline FqElem poly_eval(const Fq& F, const FqPoly& f, const FqElem& x) {
  FqElem r = F.zero();
  for (int i = (int)f.size() - 1; i >= 0; --i) r = F.add(F.mul(r, x), f[i]);
  return r;
}

inline FqPoly poly_derivative(const Fq& F, const FqPoly& f) {
  FqPoly r;
  for (size_t i = 1; i < f.size(); ++i) r.push_back(F.mul(f[i], F.from_int(Int((long long)i))));
  return poly_trim(F, r);
}

// p-th root of f(x) = g(x^p): coefficientwise inverse Frobenius
inline FqPoly poly_pth_root(const Fq& F, const FqPoly& f) {
  FqPoly g;
  Int e = pow_int(Int(F.p), (unsigned)(F.m >= 1 ? F.m - 1 : 0));
  for (size_t i = 0; i < f.size(); i += (size_t)F.p) g.push_back(F.pow(f[i], e));
  return poly_trim(F, g);
}

// squarefree part (char p aware)
inline FqPoly poly_squarefree(const Fq& F, FqPoly f) {
  f = poly_monic(F, f);
  if (poly_deg(f) <= 1) return f;
  FqPoly d = poly_derivative(F, f);
  if (d.empty()) return poly_squarefree(F, poly_pth_root(F, f));
  FqPoly g = poly_gcd(F, f, d);
  FqPoly part = poly_divmod(F, f, g).first;  // squarefree
  if (poly_deg(g) == 0) return poly_monic(F, part);
  // g may still hold p-th powers and repeated factors
  FqPoly rest = poly_squarefree(F, g);
  FqPoly prod = poly_gcd(F, part, rest);
  FqPoly merged = poly_mul(F, part, poly_divmod(F, rest, prod).first);
  return poly_monic(F, merged);
}

// distinct-degree factorization of a squarefree monic f: list of (d, product)
inline std::vector<std::pair<int, FqPoly>> poly_ddf(const Fq& F, FqPoly f) {
  std::vector<std::pair<int, FqPoly>> out;
  Int q = F.order();
  FqPoly x{F.zero(), F.one()};
  FqPoly h = x;
  int d = 0;
  while (poly_deg(f) >= 1) {
    ++d;
    if (2 * d > poly_deg(f)) {
      out.push_back({poly_deg(f), f});
      break;
    }
    h = poly_powmod(F, h, q, f);
    FqPoly g = poly_gcd(F, poly_sub(F, h, x), f);
    if (poly_deg(g) >= 1) {
      out.push_back({d, g});
      f = poly_divmod(F, f, g).first;
      h = poly_divmod(F, h, f).second;
    }
  }
  return out;
}

// all roots in F of a polynomial (exhaustive; the desk fields are tiny)
inline std::vector<FqElem> poly_roots(const Fq& F, const FqPoly& f0) {
  std::vector<FqElem> roots;
  FqPoly f = poly_trim(F, f0);
  if (f.empty()) fail(errc::internal, "roots of zero polynomial");
  for (const auto& a : F.all_elements())
    if (F.is_zero(poly_eval(F, f, a))) roots.push_back(a);
  return roots;
}

struct CharpolyRoots {
  // root -> multiplicity in the full (non-squarefree) polynomial is not
  // tracked; the generalized eigenspace uses (M - a)^dim anyway
  std::vector<FqElem> roots;        // distinct roots in the base field
  int irreducible_excess = 0;       // total degree of factors without base-field roots
  int splitting_degree = 1;         // lcm of factor degrees (extension needed to split)
};

inline CharpolyRoots charpoly_roots(const Fq& F, const FqPoly& cp) {
  CharpolyRoots out;
  FqPoly sf = poly_squarefree(F, cp);
  auto parts = poly_ddf(F, sf);
  for (auto& [d, g] : parts) {
    if (d == 1) {
      for (auto& r : poly_roots(F, g)) out.roots.push_back(r);
    } else {
      out.irreducible_excess += poly_deg(g);
      out.splitting_degree = (int)std::lcm((long)out.splitting_degree, (long)d);
    }
  }
  return out;
}

}  // namespace mfx
