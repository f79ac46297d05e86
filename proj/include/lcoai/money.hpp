#pragma once

// Exact fixed-point currency. Every amount is an integer count of
// micro-dollars; the only rounding rule anywhere is half away from zero.

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "lcoai/errors.hpp"

namespace lcoai {

inline constexpr std::int64_t kMicrosPerUnit = 1'000'000;
inline constexpr int kMicroDigits = 6;

namespace detail {

using wide = __int128;

inline std::int64_t narrow(wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw Overflow("amount exceeds the micro-dollar range");
  }
  return static_cast<std::int64_t>(v);
}

// num / den rounded half away from zero. den must be positive.
inline wide div_round(wide num, wide den) {
  wide q = num / den;
  wide r = num % den;
  if (r < 0) r = -r;
  if (2 * r >= den) q += (num < 0) ? -1 : 1;
  return q;
}

inline wide div_floor(wide num, wide den) {
  wide q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Overflow("amount exceeds the micro-dollar range");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Overflow("amount exceeds the micro-dollar range");
  return out;
}

// Parses "[-]digits[.digits]" into a count of 10^-6 units. At most six
// fractional digits are accepted; anything finer is below resolution.
inline std::int64_t parse_micros(std::string_view text) {
  const std::string shown(text);
  if (text.empty()) throw ParseError("", "empty decimal");
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw ParseError("", "malformed decimal '" + shown + "'");
  if (dot != std::string_view::npos && frac.empty()) throw ParseError("", "malformed decimal '" + shown + "'");
  if (frac.size() > kMicroDigits) {
    throw ParseError("", "decimal '" + shown + "' has more than 6 fractional digits (below micro-dollar resolution)");
  }
  wide acc = 0;
  for (char c : whole) {
    if (c < '0' || c > '9') throw ParseError("", "malformed decimal '" + shown + "'");
    acc = acc * 10 + (c - '0');
    if (acc > std::numeric_limits<std::int64_t>::max()) throw Overflow("decimal '" + shown + "' out of range");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(kMicroDigits); ++i) {
    int digit = 0;
    if (i < frac.size()) {
      const char c = frac[i];
      if (c < '0' || c > '9') throw ParseError("", "malformed decimal '" + shown + "'");
      digit = c - '0';
    }
    acc = acc * 10 + digit;
  }
  return narrow(negative ? -acc : acc);
}

// Canonical decimal text for a micro count: no trailing fractional zeros.
inline std::string micros_to_decimal(std::int64_t micros) {
  const bool negative = micros < 0;
  const auto magnitude = negative ? -static_cast<wide>(micros) : static_cast<wide>(micros);
  auto whole = static_cast<unsigned long long>(magnitude / kMicrosPerUnit);
  auto frac = static_cast<unsigned long long>(magnitude % kMicrosPerUnit);
  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, kMicroDigits - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

}  // namespace detail

// Exact non-negative-denominator fraction, always stored reduced.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InvalidArgument("ratio with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }
  static Ratio integer(std::int64_t n) { return {n, 1}; }

  // "0.7" -> 7/10.
  static Ratio parse(std::string_view text) { return {detail::parse_micros(text), kMicrosPerUnit}; }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }
  long double to_long_double() const noexcept { return static_cast<long double>(num_) / den_; }

  std::string to_decimal_string() const {
    if (kMicrosPerUnit % den_ == 0) return detail::micros_to_decimal(num_ * (kMicrosPerUnit / den_));
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    return static_cast<detail::wide>(a.num_) * b.den_ <=> static_cast<detail::wide>(b.num_) * a.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

class PerInferenceRate;

class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) noexcept { return Money(micros); }
  static Money from_usd(std::int64_t dollars) { return Money(detail::checked_mul(dollars, kMicrosPerUnit)); }
  static Money from_cents(std::int64_t cents) { return Money(detail::checked_mul(cents, kMicrosPerUnit / 100)); }
  // Exact decimal USD text, e.g. "50000" or "-12.345678".
  static Money parse(std::string_view usd) { return Money(detail::parse_micros(usd)); }

  constexpr std::int64_t micros() const noexcept { return micros_; }
  std::string to_decimal_string() const { return detail::micros_to_decimal(micros_); }

  // Round to whole cents, half away from zero.
  Money round_to_cents() const {
    return Money(detail::narrow(detail::div_round(micros_, kMicrosPerUnit / 100) * (kMicrosPerUnit / 100)));
  }

  // this * ratio, rounded half away from zero at micro-dollar granularity.
  Money scaled(const Ratio& k) const {
    return Money(detail::narrow(detail::div_round(static_cast<detail::wide>(micros_) * k.num(), k.den())));
  }

  // Divide across a count of inferences; rounded half away from zero.
  PerInferenceRate per(std::uint64_t inferences) const;

  Money& operator+=(Money o) {
    micros_ = detail::checked_add(micros_, o.micros_);
    return *this;
  }
  Money& operator-=(Money o) {
    micros_ = detail::checked_add(micros_, detail::checked_mul(o.micros_, -1));
    return *this;
  }
  friend Money operator+(Money a, Money b) { return a += b; }
  friend Money operator-(Money a, Money b) { return a -= b; }
  friend Money operator-(Money a) { return Money(detail::checked_mul(a.micros_, -1)); }
  friend Money operator*(Money a, std::int64_t n) { return Money(detail::checked_mul(a.micros_, n)); }
  friend Money operator*(std::int64_t n, Money a) { return a * n; }

  friend constexpr auto operator<=>(const Money&, const Money&) = default;

 private:
  explicit constexpr Money(std::int64_t micros) noexcept : micros_(micros) {}
  std::int64_t micros_ = 0;
};

// Micro-dollars charged per single inference. Never negative.
class PerInferenceRate {
 public:
  constexpr PerInferenceRate() = default;

  static PerInferenceRate from_micros(std::int64_t micros) { return PerInferenceRate(micros); }
  static PerInferenceRate parse(std::string_view usd) { return PerInferenceRate(detail::parse_micros(usd)); }

  constexpr std::int64_t micros() const noexcept { return micros_; }
  std::string to_decimal_string() const { return detail::micros_to_decimal(micros_); }

  Money times(std::uint64_t inferences) const {
    if (inferences > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw Overflow("inference count out of range");
    }
    return Money::from_micros(detail::checked_mul(micros_, static_cast<std::int64_t>(inferences)));
  }
  // Reporting unit: cost of 1,000 inferences, exact.
  Money per_thousand() const { return Money::from_micros(detail::checked_mul(micros_, 1000)); }

  PerInferenceRate scaled(const Ratio& k) const {
    return PerInferenceRate(detail::narrow(detail::div_round(static_cast<detail::wide>(micros_) * k.num(), k.den())));
  }

  friend constexpr auto operator<=>(const PerInferenceRate&, const PerInferenceRate&) = default;

 private:
  explicit PerInferenceRate(std::int64_t micros) : micros_(micros) {
    if (micros < 0) throw InvalidArgument("per-inference rate must be non-negative");
  }
  std::int64_t micros_ = 0;
};

inline PerInferenceRate Money::per(std::uint64_t inferences) const {
  if (inferences == 0) throw UndefinedMetric("division by zero inferences");
  return PerInferenceRate::from_micros(
      detail::narrow(detail::div_round(micros_, static_cast<detail::wide>(inferences))));
}

}  // namespace lcoai
