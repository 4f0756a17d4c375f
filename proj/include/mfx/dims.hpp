#pragma once

#include <numeric>

#include "mfx/error.hpp"
#include "mfx/rings.hpp"

namespace mfx {

struct DimData {
  long mu = 1;
  int eps2 = 1, eps3 = 1, epsInf = 1;
  int genus = 0;
  int dim_Sk = 0, dim_Mk = 0;
};

// quadratic-character values chi_{-1}(r), chi_{-3}(r) at primes
inline int chi_m1(long r) { return r == 2 ? 0 : (r % 4 == 1 ? 1 : -1); }
inline int chi_m3(long r) { return r == 3 ? 0 : (r % 3 == 1 ? 1 : -1); }

inline long euler_phi(long n) {
  long r = n;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

// classical Gamma0(M) dimension data, squarefree M, even k
inline DimData dim_data(long M, int k) {
  require(M >= 1, errc::unsupported, "level >= 1");
  require(k >= 0 && k % 2 == 0, errc::unsupported, "odd weight");
  for (long p = 2; p * p <= M; ++p)
    require(M % (p * p) != 0, errc::unsupported, "level must be squarefree");
  DimData d;
  d.mu = M;
  d.eps2 = 1;
  d.eps3 = 1;
  for (long r = 2; r <= M; ++r) {
    if (M % r) continue;
    bool prime = true;
    for (long t = 2; t * t <= r; ++t)
      if (r % t == 0) prime = false;
    if (!prime) continue;
    d.mu = d.mu / r * (r + 1);
    d.eps2 *= 1 + chi_m1(r);
    d.eps3 *= r == 3 ? 1 : 1 + chi_m3(r);
  }
  d.epsInf = 0;
  for (long t = 1; t <= M; ++t)
    if (M % t == 0) d.epsInf += (int)euler_phi(std::gcd(t, M / t));
  long g12 = 12 + d.mu - 3 * d.eps2 - 4 * d.eps3 - 6 * d.epsInf;
  require(g12 % 12 == 0, errc::internal, "genus formula");
  d.genus = (int)(g12 / 12);
  if (k == 0) {
    d.dim_Sk = 0;
    d.dim_Mk = 1;
  } else if (k == 2) {
    d.dim_Sk = d.genus;
    d.dim_Mk = d.dim_Sk + d.epsInf - 1;
  } else {
    d.dim_Sk = (k - 1) * (d.genus - 1) + (k / 4) * d.eps2 + (k / 3) * d.eps3 + (k / 2 - 1) * d.epsInf;
    d.dim_Mk = d.dim_Sk + d.epsInf;
  }
  return d;
}

}  // namespace mfx
