#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "mfx/error.hpp"
#include "mfx/rings.hpp"

namespace mfx {

// rationals as a context, tagged Z or Q so Z-series stay honest
struct Qq {
  bool zz = false;
  using E = Rat;
  bool operator==(const Qq& o) const { return zz == o.zz; }
  Rat zero() const { return 0; }
  Rat one() const { return 1; }
  Rat from_int(const Int& n) const { return Rat(n); }
  Rat add(const Rat& a, const Rat& b) const { return a + b; }
  Rat sub(const Rat& a, const Rat& b) const { return a - b; }
  Rat mul(const Rat& a, const Rat& b) const { return a * b; }
  Rat neg(const Rat& a) const { return -a; }
  bool is_zero(const Rat& a) const { return a == 0; }
};

// Truncated q-expansion: coefficients a_0 .. a_{prec-1} are known, nothing
// beyond. Equality is only meaningful up to a stated precision.
template <class Ctx>
struct Series {
  using E = typename Ctx::E;
  Ctx R;
  int prec = 0;
  std::vector<E> c;

  Series() = default;
  Series(Ctx ring, int prec_) : R(std::move(ring)), prec(prec_), c(prec_, R.zero()) {
    require(prec_ >= 1, errc::precision_too_low, "prec >= 1");
  }
  Series(Ctx ring, std::vector<E> coeffs) : R(std::move(ring)), prec((int)coeffs.size()), c(std::move(coeffs)) {}

  const E& a(int n) const {
    static E z;
    return n < prec ? c[n] : (z = R.zero());
  }

  Series truncated(int new_prec) const {
    require(new_prec <= prec, errc::precision_too_low, "cannot extend precision");
    Series out(R, new_prec);
    std::copy(c.begin(), c.begin() + new_prec, out.c.begin());
    return out;
  }
};

using SeriesQ = Series<Qq>;
using SeriesF = Series<Fq>;
using SeriesZ = Series<Zpb>;

template <class Ctx>
void check_same_ring(const Series<Ctx>& f, const Series<Ctx>& g) {
  require(f.R == g.R, errc::ring_mismatch, "series over different rings");
}

// coefficientwise sum; result precision min(f.prec, g.prec)
template <class Ctx>
Series<Ctx> qexp_add(const Series<Ctx>& f, const Series<Ctx>& g) {
  check_same_ring(f, g);
  int prec = std::min(f.prec, g.prec);
  Series<Ctx> out(f.R, prec);
  for (int n = 0; n < prec; ++n) out.c[n] = f.R.add(f.c[n], g.c[n]);
  return out;
}

template <class Ctx>
Series<Ctx> qexp_sub(const Series<Ctx>& f, const Series<Ctx>& g) {
  check_same_ring(f, g);
  int prec = std::min(f.prec, g.prec);
  Series<Ctx> out(f.R, prec);
  for (int n = 0; n < prec; ++n) out.c[n] = f.R.sub(f.c[n], g.c[n]);
  return out;
}

template <class Ctx>
Series<Ctx> qexp_scale(const Series<Ctx>& f, const typename Ctx::E& s) {
  Series<Ctx> out(f.R, f.prec);
  for (int n = 0; n < f.prec; ++n) out.c[n] = f.R.mul(f.c[n], s);
  return out;
}

// Cauchy product truncated to min precision
template <class Ctx>
Series<Ctx> qexp_mul(const Series<Ctx>& f, const Series<Ctx>& g) {
  check_same_ring(f, g);
  int prec = std::min(f.prec, g.prec);
  Series<Ctx> out(f.R, prec);
  for (int i = 0; i < prec; ++i) {
    if (f.R.is_zero(f.c[i])) continue;
    for (int j = 0; j + i < prec; ++j) {
      if (f.R.is_zero(g.c[j])) continue;
      out.c[i + j] = f.R.add(out.c[i + j], f.R.mul(f.c[i], g.c[j]));
    }
  }
  return out;
}

template <class Ctx>
Series<Ctx> qexp_pow(const Series<Ctx>& f, unsigned e) {
  Series<Ctx> r(f.R, f.prec);
  r.c[0] = f.R.one();
  Series<Ctx> b = f;
  while (e) {
    if (e & 1) r = qexp_mul(r, b);
    b = qexp_mul(b, b);
    e >>= 1;
  }
  return r;
}

// a_n(U_m f) = a_{mn}(f); result precision ceil(prec / m)
template <class Ctx>
Series<Ctx> apply_U(const Series<Ctx>& f, int m) {
  require(m >= 1, errc::invariant_violation, "U_m needs m >= 1");
  if (m == 1) return f;
  int prec = (f.prec - 1) / m + 1;
  Series<Ctx> out(f.R, prec);
  for (int n = 0; n < prec; ++n) out.c[n] = f.c[(size_t)n * m];
  return out;
}

// f(q) -> f(q^m); result precision prec * m
template <class Ctx>
Series<Ctx> apply_V(const Series<Ctx>& f, int m) {
  require(m >= 1, errc::invariant_violation, "V_m needs m >= 1");
  if (m == 1) return f;
  Series<Ctx> out(f.R, f.prec * m);
  for (int n = 0; n < f.prec; ++n) out.c[(size_t)n * m] = f.c[n];
  return out;
}

// equality through min(prec, P) coefficients; never an absolute equality
template <class Ctx>
bool equal_to_prec(const Series<Ctx>& f, const Series<Ctx>& g, int P) {
  check_same_ring(f, g);
  require(P <= f.prec && P <= g.prec, errc::precision_too_low, "equal_to_prec beyond known coefficients");
  for (int n = 0; n < P; ++n)
    if (!f.R.is_zero(f.R.sub(f.c[n], g.c[n]))) return false;
  return true;
}

inline bool is_integral(const SeriesQ& f) {
  for (const auto& v : f.c)
    if (denominator(v) != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// reduction to Z/p^b or F_{p^m}; rejects at the first non-p-integral index

inline SeriesZ reduce_mod(const SeriesQ& f, const Zpb& R) {
  SeriesZ out(R, f.prec);
  for (int n = 0; n < f.prec; ++n) {
    Int den = denominator(f.c[n]);
    if (den % R.p == 0) fail(errc::not_p_integral, "coefficient a_" + std::to_string(n), n);
    Int num = numerator(f.c[n]);
    out.c[n] = R.mul(R.from_int(num), R.inv(R.from_int(den)));
  }
  return out;
}

inline SeriesF reduce_mod(const SeriesQ& f, const Fq& F) {
  SeriesF out(F, f.prec);
  Int p(F.p);
  for (int n = 0; n < f.prec; ++n) {
    Int den = denominator(f.c[n]);
    if (den % p == 0) fail(errc::not_p_integral, "coefficient a_" + std::to_string(n), n);
    out.c[n] = F.mul(F.from_int(numerator(f.c[n])), F.inv(F.from_int(den)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// classical generators

// prod_{n>=1} (1 - q^n) via the pentagonal number theorem
inline SeriesQ euler_product(int prec) {
  SeriesQ out(Qq{true}, prec);
  out.c[0] = 1;
  for (long k = 1;; ++k) {
    long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
    if (g1 >= prec && g2 >= prec) break;
    Rat s = (k % 2 == 0) ? 1 : -1;
    if (g1 < prec) out.c[g1] += s;
    if (g2 < prec) out.c[g2] += s;
  }
  return out;
}

// prod_d eta(q^d)^{c_d} including the q^{sum(d c_d)/24} prefactor; the total
// eta-exponent weight must make the prefactor integral
inline SeriesQ eta_quotient(const std::vector<std::pair<int, int>>& parts, int prec) {
  long shift24 = 0;
  for (auto [d, e] : parts) shift24 += (long)d * e;
  require(shift24 % 24 == 0, errc::invariant_violation, "eta quotient exponent not divisible by 24");
  long shift = shift24 / 24;
  SeriesQ r(Qq{true}, prec);
  r.c[0] = 1;
  for (auto [d, e] : parts) {
    SeriesQ base = apply_V(euler_product((prec - 1) / d + 1), d).truncated(prec);
    r = qexp_mul(r, qexp_pow(base, (unsigned)e));
  }
  SeriesQ out(Qq{true}, prec);
  for (int n = 0; n + shift < prec; ++n) out.c[n + shift] = r.c[n];
  return out;
}

// Delta = q prod (1-q^n)^24
inline SeriesQ eta_delta(int prec) { return eta_quotient({{1, 24}}, prec); }

inline std::vector<Rat> bernoulli_numbers(int n) {
  std::vector<Rat> B(n + 1);
  B[0] = 1;
  std::vector<Int> binom(n + 2, 0);
  for (int m = 1; m <= n; ++m) {
    // C(m+1, k) computed row by row
    Rat s = 0;
    Int ck = 1;  // C(m+1, 0)
    for (int k = 0; k < m; ++k) {
      s += Rat(ck) * B[k];
      ck = ck * (m + 1 - k) / (k + 1);
    }
    B[m] = -s / Rat(m + 1);
  }
  return B;
}

inline Int sigma_k(int n, int k) {
  Int s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) s += pow_int(Int(d), (unsigned)k);
  return s;
}

enum class EisNorm { ConstantOne, LeadingOne };

// E_k with a_0 = 1 (constant-normalized) or a_1 = 1; exact over Q.
// For integral = true the constant-normalized series must be integral.
inline SeriesQ eisenstein(int k, int prec, EisNorm norm = EisNorm::ConstantOne, bool integral = false) {
  require(k >= 2 && k % 2 == 0, errc::unsupported, "Eisenstein weight must be even >= 2");
  auto B = bernoulli_numbers(k);
  Rat factor = Rat(-2 * k) / B[k];
  SeriesQ out(Qq{!integral ? false : true}, prec);
  out.c[0] = 1;
  for (int n = 1; n < prec; ++n) out.c[n] = factor * Rat(sigma_k(n, k - 1));
  if (norm == EisNorm::LeadingOne) {
    // a_1 = 1 normalization: -B_k/2k * E_k
    Rat s = Rat(1) / factor;
    for (auto& v : out.c) v *= s;
    out.R.zz = false;
  } else if (integral) {
    for (int n = 0; n < prec; ++n)
      require(denominator(out.c[n]) == 1, errc::non_integral_series, "E_" + std::to_string(k) + " not integral");
  }
  return out;
}

// weight-2 Eisenstein E2(q) - d E2(q^d), normalized to a_0 = 1; integral for d > 1
inline SeriesQ eisenstein2_level(int d, int prec) {
  require(d > 1, errc::unsupported, "weight-2 Eisenstein needs level > 1");
  SeriesQ out(Qq{true}, prec);
  out.c[0] = 1;
  for (int n = 1; n < prec; ++n) {
    Int v = -24 * sigma_k(n, 1);
    if (n % d == 0) v += 24 * Int(d) * sigma_k(n / d, 1);
    Rat w = Rat(v) / Rat(1 - d);
    require(denominator(w) == 1, errc::internal, "phi_d not integral");
    out.c[n] = w;
  }
  return out;
}

// floor(k * mu / 12): coefficients beyond this index cannot distinguish two
// weight-k forms on Gamma0(M)
inline int sturm_bound(int k, int M) {
  require(k >= 0 && k % 2 == 0 && M >= 1, errc::unsupported, "sturm_bound needs even k >= 0, M >= 1");
  long mu = M;
  for (int r = 2; r <= M; ++r)
    if (M % r == 0 && is_prime(Int(r))) mu = mu / r * (r + 1);
  return (int)((long)k * mu / 12);
}

}  // namespace mfx
