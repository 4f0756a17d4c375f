#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mfx/dims.hpp"
#include "mfx/error.hpp"
#include "mfx/rings.hpp"
#include "mfx/series.hpp"

namespace mfx {

// Normalized eigenform data from an external pack. Integer-coefficient orbits
// carry exact a_n; mod-p^b orbits carry residues.
struct NewformFixture {
  std::string label;
  long level = 1;
  int weight = 0;
  RingDesc coeff_ring = RingDesc::ZZ();
  std::vector<Int> an;               // a_1 .. a_P
  std::map<long, int> al_signs;      // prime || level -> +-1
  std::string provenance;

  int max_n() const { return (int)an.size(); }
  Int a(long n) const {
    require(n >= 1 && n <= (long)an.size(), errc::precision_too_low,
            label + ": a_" + std::to_string(n) + " beyond stored range");
    return an[n - 1];
  }

  // q-expansion over Q (integral); a_0 = 0
  SeriesQ series(int prec) const {
    require(coeff_ring.kind == RingDesc::Kind::Integers, errc::unsupported, "series of mod-p^b fixture");
    require(prec - 1 <= (int)an.size(), errc::precision_too_low,
            label + ": fixture has " + std::to_string(an.size()) + " coefficients, need " + std::to_string(prec - 1));
    SeriesQ f(Qq{true}, prec);
    for (int n = 1; n < prec; ++n) f.c[n] = Rat(an[n - 1]);
    return f;
  }
};

namespace detail {
inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace detail

// validators ----------------------------------------------------------------

inline void validate_fixture(const NewformFixture& f) {
  auto bad = [&](const std::string& name, long long idx = -1) {
    fail(errc::invariant_violation, f.label + ": " + name, idx);
  };
  if (f.level < 1) bad("level");
  for (long p = 2; p * p <= f.level; ++p)
    if (f.level % (p * p) == 0) bad("level not squarefree");
  if (f.weight < 2 || f.weight % 2) bad("weight must be even >= 2");
  if (f.an.empty() || f.an[0] != 1) bad("a_1 = 1 required", 1);
  bool modular_ring = f.coeff_ring.kind == RingDesc::Kind::ZmodPB;
  Int q = modular_ring ? pow_int(f.coeff_ring.p, (unsigned)f.coeff_ring.b) : Int(0);
  auto eqz = [&](const Int& x) { return modular_ring ? (x % q == 0) : (x == 0); };

  long P = (long)f.an.size();
  // multiplicativity at coprime pairs
  for (long m = 2; m * 2 <= P; ++m)
    for (long n = m + 1; m * n <= P; ++n) {
      if (std::gcd(m, n) != 1) continue;
      if (!eqz(f.a(m * n) - f.a(m) * f.a(n))) bad("multiplicativity", m * n);
    }
  // Hecke recurrence at good prime powers; U-recurrence at bad primes
  for (long r = 2; r * r <= P; ++r) {
    if (!is_prime(Int(r))) continue;
    Int rk1 = pow_int(Int(r), (unsigned)(f.weight - 1));
    for (long s = 2, rs = r * r; rs <= P; ++s, rs *= r) {
      Int expect = f.a(rs / r) * f.a(r);
      if (f.level % r != 0) expect -= rk1 * f.a(rs / (r * r));
      if (!eqz(f.a(rs) - expect)) bad("hecke_recurrence", rs);
    }
  }
  // AL consistency at primes exactly dividing the level
  for (long r = 2; r <= f.level; ++r) {
    if (f.level % r != 0 || !is_prime(Int(r))) continue;
    auto it = f.al_signs.find(r);
    if (it == f.al_signs.end()) bad("al_sign missing at " + std::to_string(r));
    if (it->second != 1 && it->second != -1) bad("al_sign value");
    if (r <= P) {
      Int expect = -Int(it->second) * pow_int(Int(r), (unsigned)((f.weight - 2) / 2));
      if (!eqz(f.a(r) - expect)) bad("al_consistency", r);
    }
  }
  for (auto& [r, s] : f.al_signs)
    if (f.level % r != 0) bad("al_sign at prime not dividing level");
  // Weil bound and the sharper (r+1) r^{(k-2)/2} bound at good primes (integer fixtures)
  if (!modular_ring) {
    for (long r = 2; r <= P; ++r) {
      if (!is_prime(Int(r)) || f.level % r == 0) continue;
      Int a2 = f.a(r) * f.a(r);
      Int rk2 = pow_int(Int(r), (unsigned)(f.weight - 2));
      if (a2 > 4 * r * rk2) bad("weil_bound", r);
      if (a2 >= (r + 1) * (r + 1) * rk2) bad("weil_strict_bound", r);
    }
  }
}

// stored AL sign, re-derived from a_{l'} and checked
inline int al_sign(const NewformFixture& f, long ellp) {
  require(f.level % ellp == 0 && is_prime(Int(ellp)), errc::not_applicable, "prime must divide level");
  auto it = f.al_signs.find(ellp);
  require(it != f.al_signs.end(), errc::inconsistent, f.label + ": no stored sign at " + std::to_string(ellp));
  if ((long)f.an.size() >= ellp) {
    Int lk = pow_int(Int(ellp), (unsigned)((f.weight - 2) / 2));
    Int derived = -f.a(ellp);
    require(derived == Int(it->second) * lk ||
                (f.coeff_ring.kind == RingDesc::Kind::ZmodPB &&
                 (derived - Int(it->second) * lk) % pow_int(f.coeff_ring.p, (unsigned)f.coeff_ring.b) == 0),
            errc::inconsistent, f.label + ": stored AL sign disagrees with a_" + std::to_string(ellp));
  }
  return it->second;
}

// parser ---------------------------------------------------------------------

inline NewformFixture parse_fixture(const std::string& text) {
  NewformFixture f;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  bool saw_an = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(errc::parse_error, "expected key = value", lineno);
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    try {
      if (key == "label") {
        f.label = val;
      } else if (key == "level") {
        f.level = std::stol(val);
      } else if (key == "weight") {
        f.weight = std::stoi(val);
      } else if (key == "provenance") {
        f.provenance = val;
      } else if (key == "coeff_ring") {
        if (val == "Z") {
          f.coeff_ring = RingDesc::ZZ();
        } else if (val.rfind("Z/", 0) == 0) {
          std::string rest = val.substr(2);
          auto car = rest.find('^');
          Int p(car == std::string::npos ? rest : rest.substr(0, car));
          int b = car == std::string::npos ? 1 : std::stoi(rest.substr(car + 1));
          f.coeff_ring = RingDesc::Zmod(p, b);
        } else {
          fail(errc::parse_error, "unknown coeff_ring " + val, lineno);
        }
      } else if (key == "al_signs") {
        std::istringstream ss(val);
        std::string tok;
        while (ss >> tok) {
          auto colon = tok.find(':');
          if (colon == std::string::npos) fail(errc::parse_error, "al_signs token " + tok, lineno);
          long r = std::stol(tok.substr(0, colon));
          std::string sv = tok.substr(colon + 1);
          if (sv != "+1" && sv != "-1") fail(errc::parse_error, "al sign must be +1 or -1", lineno);
          f.al_signs[r] = sv == "+1" ? 1 : -1;
        }
      } else if (key == "an") {
        saw_an = true;
        std::stringstream ss(val);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          tok = detail::trim(tok);
          if (tok.empty()) fail(errc::parse_error, "empty an token", lineno);
          if (tok.find('.') != std::string::npos) fail(errc::parse_error, "no floating point tokens", lineno);
          auto slash = tok.find('/');
          if (slash == std::string::npos) {
            f.an.emplace_back(tok);
          } else {
            require(f.coeff_ring.kind == RingDesc::Kind::ZmodPB, errc::parse_error,
                    "residue/modulus token in integer fixture");
            Int res(tok.substr(0, slash)), mod(tok.substr(slash + 1));
            Int q = pow_int(f.coeff_ring.p, (unsigned)f.coeff_ring.b);
            require(mod == q, errc::parse_error, "modulus token disagrees with coeff_ring");
            f.an.push_back(((res % q) + q) % q);
          }
        }
      } else {
        fail(errc::parse_error, "unknown key " + key, lineno);
      }
    } catch (const error&) {
      throw;
    } catch (const std::exception& e) {
      fail(errc::parse_error, std::string(e.what()), lineno);
    }
  }
  require(saw_an, errc::parse_error, "missing an line");
  require(!f.label.empty(), errc::parse_error, "missing label");
  validate_fixture(f);
  return f;
}

// pack -----------------------------------------------------------------------

struct FixturePack {
  std::vector<NewformFixture> all;
  std::map<std::pair<long, int>, std::vector<const NewformFixture*>> by_level_weight;

  void index() {
    by_level_weight.clear();
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    for (const auto& f : all) by_level_weight[{f.level, f.weight}].push_back(&f);
  }

  std::vector<const NewformFixture*> at(long level, int weight) const {
    auto it = by_level_weight.find({level, weight});
    return it == by_level_weight.end() ? std::vector<const NewformFixture*>{} : it->second;
  }
};

inline FixturePack load_pack(const std::string& dir) {
  FixturePack pack;
  std::vector<std::filesystem::path> files;
  require(std::filesystem::exists(dir), errc::parse_error, "fixture directory not found: " + dir);
  for (auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".nf") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (auto& path : files) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      pack.all.push_back(parse_fixture(ss.str()));
    } catch (const error& e) {
      fail(e.code(), path.filename().string() + ": " + e.what(), e.index());
    }
  }
  for (size_t i = 0; i < pack.all.size(); ++i)
    for (size_t j = i + 1; j < pack.all.size(); ++j)
      require(pack.all[i].label != pack.all[j].label, errc::invariant_violation,
              "duplicate label " + pack.all[i].label);
  pack.index();
  return pack;
}

// dim S_k^new(M) for squarefree M by inclusion-exclusion over divisors
inline int dim_new(long M, int k) {
  int total = 0;
  for (long d = 1; d <= M; ++d) {
    if (M % d) continue;
    long c = M / d;
    int mult = 1;
    for (long r = 2; r <= c; ++r)
      if (c % r == 0 && is_prime(Int(r))) mult *= -2;
    total += mult * dim_data(d, k).dim_Sk;
  }
  return total;
}

struct PackReportRow {
  long level;
  int weight;
  int new_dim;
  int have;
};

// completeness report of a pack against a required (level, weight) matrix
inline std::vector<PackReportRow> validate_pack(const FixturePack& pack,
                                                const std::vector<std::pair<long, int>>& required) {
  std::vector<PackReportRow> out;
  for (auto [M, k] : required) {
    PackReportRow row{M, k, dim_new(M, k), (int)pack.at(M, k).size()};
    out.push_back(row);
  }
  return out;
}

}  // namespace mfx
