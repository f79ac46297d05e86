#pragma once

// Test-only reference computations. Exact rationals throughout; nothing here
// calls into the library's arithmetic.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_rational usd(const std::string& decimal) {
  // "0.0048" -> 48/10000
  const auto dot = decimal.find('.');
  if (dot == std::string::npos) return cpp_rational(cpp_int(decimal));
  std::string digits = decimal.substr(0, dot) + decimal.substr(dot + 1);
  // cpp_int reads a leading zero as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  cpp_int den = 1;
  for (std::size_t i = dot + 1; i < decimal.size(); ++i) den *= 10;
  return cpp_rational(cpp_int(digits), den);
}

// Round half away from zero to an integer.
inline cpp_int round_half_away(const cpp_rational& x) {
  const cpp_int num = boost::multiprecision::numerator(x);
  const cpp_int den = boost::multiprecision::denominator(x);
  const cpp_int mag = num < 0 ? cpp_int(-num) : num;
  cpp_int q = mag / den;
  if ((mag % den) * 2 >= den) q += 1;
  return num < 0 ? cpp_int(-q) : q;
}

inline std::int64_t to_i64(const cpp_int& v) { return v.convert_to<std::int64_t>(); }

// LCOAI per inference in micro-dollars for a single-period, undiscounted
// scenario: round((capex + fixed + rate * V) / V * 10^6).
inline std::int64_t per_inference_micros(const cpp_rational& capex_usd, const cpp_rational& rate_usd,
                                         std::uint64_t volume, const cpp_rational& fixed_usd = 0) {
  const cpp_rational total = capex_usd + fixed_usd + rate_usd * cpp_rational(cpp_int(volume));
  return to_i64(round_half_away(total / cpp_rational(cpp_int(volume)) * 1000000));
}

// Straight-line CAPEX over `life_months`, summed month by month over the
// first `horizon_months` months.
inline cpp_rational straight_line_charged(const cpp_rational& amount, int life_months, int horizon_months) {
  cpp_rational sum = 0;
  for (int m = 1; m <= horizon_months; ++m) {
    if (m <= life_months) sum += amount / life_months;
  }
  return sum;
}

// Smallest V on the grid {step, 2*step, ...} <= limit at which
// (capex_hi + rate_hi*V) < (capex_lo + rate_lo*V). Returns 0 when none.
inline std::uint64_t scan_crossover(const cpp_rational& capex_hi, const cpp_rational& rate_hi,
                                    const cpp_rational& capex_lo, const cpp_rational& rate_lo, std::uint64_t step,
                                    std::uint64_t limit) {
  for (std::uint64_t v = step; v <= limit; v += step) {
    const cpp_rational vv{cpp_int(v)};
    if (capex_hi + rate_hi * vv < capex_lo + rate_lo * vv) return v;
  }
  return 0;
}

}  // namespace oracle
