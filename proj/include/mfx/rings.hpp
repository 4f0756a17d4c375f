#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "mfx/error.hpp"

namespace mfx {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int pow_int(Int base, unsigned e) {
  Int r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline Rat pow_rat(const Rat& base, long e) {
  Rat b = e < 0 ? Rat(1) / base : base;
  unsigned long n = e < 0 ? -e : e;
  Rat r = 1;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long p_valuation(Int n, const Int& p) {
  if (n == 0) return -1;  // infinity; callers treat -1 as "zero"
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// ---------------------------------------------------------------------------
// arithmetic over F_p for small p (fits int64 with p^2 < 2^63)

inline int64_t mod_pos(int64_t a, int64_t p) {
  int64_t r = a % p;
  return r < 0 ? r + p : r;
}

inline int64_t mod_pow(int64_t b, int64_t e, int64_t p) {
  int64_t r = 1 % p;
  b = mod_pos(b, p);
  while (e) {
    if (e & 1) r = (__int128)r * b % p;
    b = (__int128)b * b % p;
    e >>= 1;
  }
  return r;
}

inline int64_t mod_inv(int64_t a, int64_t p) {
  a = mod_pos(a, p);
  require(a != 0, errc::non_unit, "inverse of 0 mod " + std::to_string(p));
  int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr) {
    int64_t q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  require(r == 1, errc::non_unit, std::to_string(a) + " not invertible mod " + std::to_string(p));
  return mod_pos(t, p);
}

// ---------------------------------------------------------------------------
// F_{p^m}: elements are polynomials in the generator, length-m coefficient
// vectors over F_p, reduced modulo a fixed monic irreducible modulus.

using FqElem = std::vector<int64_t>;

struct Fq {
  using E = FqElem;
  int64_t p = 2;
  int m = 1;
  std::vector<int64_t> modulus;  // monic, degree m: coeffs c0..c_{m-1} of x^m + ...

  Fq() = default;
  Fq(int64_t p_, int m_ = 1) : p(p_), m(m_) {
    require(is_prime(Int(p_)), errc::invariant_violation, "p must be prime");
    if (m > 1) modulus = least_irreducible(p_, m_);
  }

  bool operator==(const Fq& o) const { return p == o.p && m == o.m && modulus == o.modulus; }

  FqElem zero() const { return FqElem(m, 0); }
  FqElem one() const {
    FqElem e(m, 0);
    e[0] = 1 % p;
    return e;
  }
  FqElem gen() const {
    FqElem e(m, 0);
    if (m == 1)
      e[0] = 1 % p;
    else
      e[1] = 1;
    return e;
  }
  FqElem from_int(const Int& n) const {
    FqElem e(m, 0);
    e[0] = (int64_t)(((n % p) + p) % p);
    return e;
  }
  bool is_zero(const FqElem& a) const {
    for (auto c : a)
      if (c) return false;
    return true;
  }
  FqElem add(const FqElem& a, const FqElem& b) const {
    FqElem r(m);
    for (int i = 0; i < m; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  FqElem sub(const FqElem& a, const FqElem& b) const {
    FqElem r(m);
    for (int i = 0; i < m; ++i) r[i] = mod_pos(a[i] - b[i], p);
    return r;
  }
  FqElem neg(const FqElem& a) const {
    FqElem r(m);
    for (int i = 0; i < m; ++i) r[i] = mod_pos(-a[i], p);
    return r;
  }
  FqElem mul(const FqElem& a, const FqElem& b) const {
    if (m == 1) return FqElem{(int64_t)((__int128)a[0] * b[0] % p)};
    std::vector<int64_t> prod(2 * m - 1, 0);
    for (int i = 0; i < m; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + (__int128)a[i] * b[j]) % p;
    }
    // reduce by modulus: x^m = -(c_{m-1} x^{m-1} + ... + c_0)
    for (int d = 2 * m - 2; d >= m; --d) {
      int64_t c = prod[d];
      if (!c) continue;
      prod[d] = 0;
      for (int i = 0; i < m; ++i) prod[d - m + i] = mod_pos(prod[d - m + i] - (__int128)c * modulus[i] % p, p);
    }
    return FqElem(prod.begin(), prod.begin() + m);
  }
  FqElem inv(const FqElem& a) const {
    require(!is_zero(a), errc::non_unit, "inverse of 0 in F_q");
    if (m == 1) return FqElem{mod_inv(a[0], p)};
    // a^(q-2) by square and multiply
    Int e = pow_int(Int(p), (unsigned)m) - 2;
    FqElem r = one(), b = a;
    while (e > 0) {
      if ((e & 1) != 0) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  FqElem pow(FqElem b, Int e) const {
    FqElem r = one();
    while (e > 0) {
      if ((e & 1) != 0) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  Int order() const { return pow_int(Int(p), (unsigned)m); }

  // enumerate all field elements in deterministic (lexicographic) order
  std::vector<FqElem> all_elements() const {
    require(order() <= 1 << 16, errc::unsupported, "field too large to enumerate");
    std::vector<FqElem> out;
    FqElem e(m, 0);
    while (true) {
      out.push_back(e);
      int i = 0;
      while (i < m && ++e[i] == p) e[i++] = 0;
      if (i == m) break;
    }
    return out;
  }

  std::string to_string(const FqElem& a) const {
    if (m == 1) return std::to_string(a[0]);
    std::string s = "[";
    for (int i = 0; i < m; ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + "]";
  }

  // least lexicographic monic irreducible of degree m over F_p
  // (coefficient vector c0..c_{m-1} ordered lexicographically)
  static std::vector<int64_t> least_irreducible(int64_t p, int m) {
    std::vector<int64_t> c(m, 0);
    while (true) {
      if (poly_irreducible(p, c)) return c;
      int i = 0;
      while (i < m && ++c[i] == p) c[i++] = 0;
      require(i < m, errc::internal, "no irreducible found");
    }
  }

  // irreducibility of x^m + c_{m-1}x^{m-1} + ... + c_0 over F_p: no roots of
  // x^{p^d} - x for proper divisors, and x^{p^m} == x mod f
  static bool poly_irreducible(int64_t p, const std::vector<int64_t>& c) {
    int m = (int)c.size();
    auto mulmod = [&](const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
      std::vector<int64_t> prod(2 * m - 1, 0);
      for (int i = 0; i < m; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + (__int128)a[i] * b[j]) % p;
      }
      for (int d = 2 * m - 2; d >= m; --d) {
        int64_t t = prod[d];
        if (!t) continue;
        prod[d] = 0;
        for (int i = 0; i < m; ++i) prod[d - m + i] = mod_pos(prod[d - m + i] - (__int128)t * c[i] % p, p);
      }
      return std::vector<int64_t>(prod.begin(), prod.begin() + m);
    };
    auto frob = [&](std::vector<int64_t> a, int times) {
      // a -> a^{p^times} mod f
      for (int t = 0; t < times; ++t) {
        std::vector<int64_t> r(m, 0);
        r[0] = 1;
        std::vector<int64_t> b = a;
        int64_t e = p;
        while (e) {
          if (e & 1) r = mulmod(r, b);
          b = mulmod(b, b);
          e >>= 1;
        }
        a = r;
      }
      return a;
    };
    std::vector<int64_t> x(m, 0);
    if (m == 1) return true;
    x[1] = 1;
    // x^{p^m} == x
    if (frob(x, m) != x) return false;
    // gcd-degree test via x^{p^d} != x for maximal proper divisors d = m/q
    for (int q = 2; q <= m; ++q) {
      if (m % q) continue;
      bool prime_q = true;
      for (int t = 2; t * t <= q; ++t)
        if (q % t == 0) prime_q = false;
      if (!prime_q) continue;
      if (frob(x, m / q) == x) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Z/p^b: residues stored in [0, p^b)

struct Zpb {
  using E = Int;
  Int p = 2;
  int b = 1;
  Int q = 2;  // p^b

  Zpb() = default;
  Zpb(Int p_, int b_) : p(std::move(p_)), b(b_) {
    require(is_prime(p), errc::invariant_violation, "p must be prime");
    require(b >= 1, errc::invariant_violation, "b >= 1");
    q = pow_int(p, (unsigned)b);
  }
  bool operator==(const Zpb& o) const { return p == o.p && b == o.b; }

  Int zero() const { return 0; }
  Int one() const { return 1 % q; }
  Int from_int(const Int& n) const { return ((n % q) + q) % q; }
  Int add(const Int& a, const Int& c) const { return (a + c) % q; }
  Int sub(const Int& a, const Int& c) const { return ((a - c) % q + q) % q; }
  Int neg(const Int& a) const { return (q - a) % q; }
  Int mul(const Int& a, const Int& c) const { return a * c % q; }
  bool is_zero(const Int& a) const { return a == 0; }
  bool is_unit(const Int& a) const { return a % p != 0; }
  Int inv(const Int& a) const {
    require(is_unit(a), errc::non_unit, "not a unit in Z/p^b");
    // extended gcd over Z
    Int t = 0, nt = 1, r = q, nr = a;
    while (nr != 0) {
      Int quo = r / nr;
      t -= quo * nt;
      std::swap(t, nt);
      r -= quo * nr;
      std::swap(r, nr);
    }
    return ((t % q) + q) % q;
  }
};

// ---------------------------------------------------------------------------
// runtime ring descriptor (Integers | Rationals | ZmodPB | FiniteField)

struct RingDesc {
  enum class Kind { Integers, Rationals, ZmodPB, FiniteField } kind = Kind::Integers;
  Int p = 0;
  int b = 1;   // ZmodPB exponent
  int m = 1;   // FiniteField degree
  std::vector<int64_t> modulus;  // FiniteField modulus (degree-m tail, monic)

  static RingDesc ZZ() { return {Kind::Integers, 0, 1, 1, {}}; }
  static RingDesc QQ() { return {Kind::Rationals, 0, 1, 1, {}}; }
  static RingDesc Zmod(Int p, int b) {
    require(is_prime(p), errc::invariant_violation, "p must be prime");
    require(b >= 1, errc::invariant_violation, "b >= 1");
    return {Kind::ZmodPB, std::move(p), b, 1, {}};
  }
  static RingDesc GF(int64_t p, int m = 1) {
    Fq f(p, m);
    return {Kind::FiniteField, Int(p), 1, m, f.modulus};
  }

  bool operator==(const RingDesc& o) const {
    return kind == o.kind && p == o.p && b == o.b && m == o.m && modulus == o.modulus;
  }
  bool has_char_p() const { return kind == Kind::ZmodPB || kind == Kind::FiniteField; }

  std::string name() const {
    switch (kind) {
      case Kind::Integers: return "Z";
      case Kind::Rationals: return "Q";
      case Kind::ZmodPB: return b == 1 ? "Z/" + p.str() : "Z/" + p.str() + "^" + std::to_string(b);
      case Kind::FiniteField: return m == 1 ? "F" + p.str() : "F" + p.str() + "^" + std::to_string(m);
    }
    return "?";
  }
};

}  // namespace mfx
