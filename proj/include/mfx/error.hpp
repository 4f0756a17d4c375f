#pragma once

#include <stdexcept>
#include <string>

namespace mfx {

enum class errc {
  ring_mismatch,
  not_p_integral,
  non_integral_series,
  precision_too_low,
  incomplete_fixtures,
  bad_prime,
  not_stable,
  non_unit,
  bad_congruence,
  parse_error,
  invariant_violation,
  pairing_degenerate,
  inconsistent,
  not_applicable,
  unsupported,
  internal,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::ring_mismatch: return "RingMismatch";
    case errc::not_p_integral: return "NotPIntegral";
    case errc::non_integral_series: return "NonIntegralSeries";
    case errc::precision_too_low: return "PrecisionTooLow";
    case errc::incomplete_fixtures: return "IncompleteFixtures";
    case errc::bad_prime: return "BadPrime";
    case errc::not_stable: return "NotStable";
    case errc::non_unit: return "NonUnit";
    case errc::bad_congruence: return "BadCongruence";
    case errc::parse_error: return "ParseError";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::pairing_degenerate: return "PairingDegenerate";
    case errc::inconsistent: return "Inconsistent";
    case errc::not_applicable: return "NotApplicable";
    case errc::unsupported: return "Unsupported";
    case errc::internal: return "Internal";
  }
  return "?";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what, long long index = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        index_(index) {}

  errc code() const { return code_; }
  // offending index for NotPIntegral / InvariantViolation, -1 otherwise
  long long index() const { return index_; }

 private:
  errc code_;
  long long index_;
};

[[noreturn]] inline void fail(errc code, const std::string& what, long long index = -1) {
  throw error(code, what, index);
}

inline void require(bool cond, errc code, const std::string& what, long long index = -1) {
  if (!cond) fail(code, what, index);
}

}  // namespace mfx
