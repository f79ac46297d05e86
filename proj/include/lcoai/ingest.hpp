#pragma once

// Valid-inference counting from newline-delimited JSON telemetry:
//
//   {"ts":"2025-03-01T12:00:00Z","kind":"inference","status":"ok"}
//
// Only ok inferences count. Health checks, admin and background calls are
// non-productive; errored inferences are excluded separately.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lcoai/errors.hpp"
#include "lcoai/scenario.hpp"

namespace lcoai {

using UtcInstant = std::chrono::sys_time<std::chrono::microseconds>;

enum class RecordKind { inference, health_check, admin, background };
enum class RecordStatus { ok, error };

namespace detail {

inline int read_digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) throw std::invalid_argument("truncated");
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + n, value);
  if (ec != std::errc{} || ptr != s.data() + pos + n) throw std::invalid_argument("digits expected");
  return value;
}

inline void expect(std::string_view s, std::size_t pos, std::string_view allowed) {
  if (pos >= s.size() || allowed.find(s[pos]) == std::string_view::npos) throw std::invalid_argument("bad separator");
}

}  // namespace detail

// RFC 3339 date-time, e.g. "2025-01-31T23:59:59.5+02:00". Fractions finer
// than a microsecond are truncated.
inline std::optional<UtcInstant> parse_rfc3339(std::string_view s) {
  using namespace std::chrono;
  try {
    const int y = detail::read_digits(s, 0, 4);
    detail::expect(s, 4, "-");
    const int mo = detail::read_digits(s, 5, 2);
    detail::expect(s, 7, "-");
    const int d = detail::read_digits(s, 8, 2);
    detail::expect(s, 10, "Tt ");
    const int hh = detail::read_digits(s, 11, 2);
    detail::expect(s, 13, ":");
    const int mm = detail::read_digits(s, 14, 2);
    detail::expect(s, 16, ":");
    const int ss = detail::read_digits(s, 17, 2);
    std::size_t pos = 19;
    std::int64_t frac_us = 0;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      const std::size_t begin = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == begin) return std::nullopt;
      for (std::size_t i = 0; i < 6; ++i) {
        frac_us = frac_us * 10 + (begin + i < pos ? s[begin + i] - '0' : 0);
      }
    }
    if (pos >= s.size()) return std::nullopt;
    minutes offset{0};
    if (s[pos] == 'Z' || s[pos] == 'z') {
      ++pos;
    } else {
      detail::expect(s, pos, "+-");
      const int sign = s[pos] == '-' ? -1 : 1;
      const int oh = detail::read_digits(s, pos + 1, 2);
      detail::expect(s, pos + 3, ":");
      const int om = detail::read_digits(s, pos + 4, 2);
      if (oh > 23 || om > 59) return std::nullopt;
      offset = minutes(sign * (oh * 60 + om));
      pos += 6;
    }
    if (pos != s.size()) return std::nullopt;
    const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    // Leap second 60 is tolerated and folds into the next minute.
    if (!date.ok() || hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    const auto local = sys_days{date} + hours{hh} + minutes{mm} + seconds{ss} + microseconds{frac_us};
    return time_point_cast<microseconds>(local - offset);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline std::optional<RecordKind> parse_record_kind(std::string_view s) {
  if (s == "inference") return RecordKind::inference;
  if (s == "health_check") return RecordKind::health_check;
  if (s == "admin") return RecordKind::admin;
  if (s == "background") return RecordKind::background;
  return std::nullopt;
}

inline std::optional<RecordStatus> parse_record_status(std::string_view s) {
  if (s == "ok") return RecordStatus::ok;
  if (s == "error") return RecordStatus::error;
  return std::nullopt;
}

struct InferenceRecord {
  UtcInstant timestamp;
  RecordKind kind;
  RecordStatus status;
  std::size_t line = 0;  // 1-based source line
};

struct SkippedLine {
  std::size_t line;
  std::string reason;
};

struct ParsedLog {
  std::vector<InferenceRecord> records;
  std::vector<SkippedLine> skipped;  // lenient mode only
};

enum class ParseMode { strict, lenient };

// One record from one line. Throws LogParseError.
inline InferenceRecord parse_log_line(std::string_view text, std::size_t line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw LogParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw LogParseError(line, "record must be a JSON object");
  auto field = [&](const char* name) -> std::string {
    const auto it = j.find(name);
    if (it == j.end()) throw LogParseError(line, std::string("missing field \"") + name + "\"");
    if (!it->is_string()) throw LogParseError(line, std::string("field \"") + name + "\" must be a string");
    return it->get<std::string>();
  };
  const auto ts_text = field("ts");
  const auto kind_text = field("kind");
  const auto status_text = field("status");

  const auto ts = parse_rfc3339(ts_text);
  if (!ts) throw LogParseError(line, "invalid RFC 3339 timestamp '" + ts_text + "'");
  const auto kind = parse_record_kind(kind_text);
  if (!kind) throw LogParseError(line, "unknown kind '" + kind_text + "'");
  const auto status = parse_record_status(status_text);
  if (!status) throw LogParseError(line, "unknown status '" + status_text + "'");
  return {*ts, *kind, *status, line};
}

// Single pass over the stream. Blank lines are ignored. Strict mode throws
// on the first malformed line; lenient mode records it in `skipped`.
inline ParsedLog parse_log(std::istream& in, ParseMode mode = ParseMode::strict) {
  ParsedLog out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.records.push_back(parse_log_line(text, line));
    } catch (const LogParseError& e) {
      if (mode == ParseMode::strict) throw;
      out.skipped.push_back({line, e.what()});
    }
  }
  return out;
}

inline ParsedLog parse_log(std::string_view text, ParseMode mode = ParseMode::strict) {
  std::istringstream in{std::string(text)};
  return parse_log(in, mode);
}

// Calendar-month arithmetic anchored at a start instant. Day-of-month is
// clamped, so Jan 31 + 1 month is Feb 28 (or 29).
inline UtcInstant add_months(UtcInstant start, int months) {
  using namespace std::chrono;
  const auto day_start = floor<days>(start);
  const auto time_of_day = start - day_start;
  const year_month_day ymd{day_start};
  const year_month ym = year_month{ymd.year(), ymd.month()} + std::chrono::months{months};
  const auto last = year_month_day_last{ym.year(), month_day_last{ym.month()}}.day();
  const auto d = std::min(ymd.day(), last);
  return sys_days{ym / d} + time_of_day;
}

// Whole calendar months elapsed from start to t; t must not precede start.
inline int elapsed_months(UtcInstant start, UtcInstant t) {
  using namespace std::chrono;
  const year_month_day a{floor<days>(start)};
  const year_month_day b{floor<days>(t)};
  int k = (static_cast<int>(b.year()) - static_cast<int>(a.year())) * 12 +
          (static_cast<int>(static_cast<unsigned>(b.month())) - static_cast<int>(static_cast<unsigned>(a.month())));
  while (k > 0 && add_months(start, k) > t) --k;
  return k;
}

struct CountOptions {
  // Count errored inferences as valid instead of excluding them.
  bool failed_inferences_valid = false;
};

// Tallies partition the records: valid (in range), excluded_nonproductive,
// excluded_failed, out_of_range (ok inferences outside the horizon).
struct VolumeCount {
  std::uint64_t valid = 0;
  std::uint64_t excluded_nonproductive = 0;
  std::uint64_t excluded_failed = 0;
  std::uint64_t out_of_range = 0;
  std::vector<std::uint64_t> period_buckets;  // valid count per horizon period

  std::uint64_t total() const noexcept { return valid + excluded_nonproductive + excluded_failed + out_of_range; }

  VolumeCount& operator+=(const VolumeCount& o) {
    if (period_buckets.size() != o.period_buckets.size()) {
      throw InvalidArgument("cannot merge volume counts over different horizons");
    }
    valid += o.valid;
    excluded_nonproductive += o.excluded_nonproductive;
    excluded_failed += o.excluded_failed;
    out_of_range += o.out_of_range;
    for (std::size_t i = 0; i < period_buckets.size(); ++i) period_buckets[i] += o.period_buckets[i];
    return *this;
  }
  friend VolumeCount operator+(VolumeCount a, const VolumeCount& b) { return a += b; }
  friend bool operator==(const VolumeCount&, const VolumeCount&) = default;

  VolumeProjection projection() const { return VolumeProjection(period_buckets); }
};

inline VolumeCount count_valid(const std::vector<InferenceRecord>& records, const Horizon& horizon,
                               UtcInstant start, CountOptions options = {}) {
  VolumeCount c;
  c.period_buckets.assign(static_cast<std::size_t>(horizon.periods()), 0);
  for (const auto& r : records) {
    if (r.kind != RecordKind::inference) {
      ++c.excluded_nonproductive;
      continue;
    }
    if (r.status == RecordStatus::error && !options.failed_inferences_valid) {
      ++c.excluded_failed;
      continue;
    }
    if (r.timestamp < start) {
      ++c.out_of_range;
      continue;
    }
    const int period = elapsed_months(start, r.timestamp) / horizon.period_length_months();
    if (period >= horizon.periods()) {
      ++c.out_of_range;
      continue;
    }
    ++c.valid;
    ++c.period_buckets[static_cast<std::size_t>(period)];
  }
  return c;
}

}  // namespace lcoai
