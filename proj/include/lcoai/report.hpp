#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lcoai/errors.hpp"
#include "lcoai/money.hpp"

namespace lcoai {

enum class TableFormat { markdown, csv };

inline TableFormat parse_table_format(std::string_view s) {
  if (s == "markdown" || s == "md") return TableFormat::markdown;
  if (s == "csv") return TableFormat::csv;
  throw InvalidArgument("unknown table format '" + std::string(s) + "'");
}

// "10000000" -> "10,000,000"
inline std::string group_thousands(std::string digits) {
  const std::size_t first = (!digits.empty() && digits.front() == '-') ? 1 : 0;
  for (auto i = static_cast<std::ptrdiff_t>(digits.size()) - 3; i > static_cast<std::ptrdiff_t>(first); i -= 3) {
    digits.insert(static_cast<std::size_t>(i), 1, ',');
  }
  return digits;
}

inline std::string format_count(std::uint64_t n) { return group_thousands(std::to_string(n)); }

namespace detail {

// |micros| rounded half away to `decimals` places, as "whole.frac".
inline std::string fixed_decimals(std::int64_t micros, int decimals, bool grouping) {
  wide scale = 1;
  for (int i = decimals; i < kMicroDigits; ++i) scale *= 10;
  wide units = div_round(micros, scale);
  if (units < 0) units = -units;
  wide den = 1;
  for (int i = 0; i < decimals; ++i) den *= 10;
  std::string whole = std::to_string(static_cast<unsigned long long>(units / den));
  if (grouping) whole = group_thousands(whole);
  if (decimals == 0) return whole;
  std::string frac = std::to_string(static_cast<unsigned long long>(units % den));
  frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
  return whole + "." + frac;
}

}  // namespace detail

// "$50,000.00", "-$1.25"
inline std::string format_usd(Money m, int decimals = 2, bool grouping = true) {
  const std::string body = detail::fixed_decimals(m.micros(), decimals, grouping);
  const bool negative = m.micros() < 0 && body.find_first_not_of("0.,") != std::string::npos;
  return (negative ? "-$" : "$") + body;
}

// Per-inference rates print with four decimals ("$0.0048"), more only when
// the rate has significant digits beyond them ("$0.00075").
inline std::string format_rate_plain(PerInferenceRate r) {
  int decimals = 4;
  while (decimals < kMicroDigits) {
    std::int64_t step = 1;
    for (int i = decimals; i < kMicroDigits; ++i) step *= 10;
    if (r.micros() % step == 0) break;
    ++decimals;
  }
  return detail::fixed_decimals(r.micros(), decimals, false);
}

inline std::string format_rate(PerInferenceRate r) { return "$" + format_rate_plain(r); }

// Plain two-decimal amount for machine-readable series, e.g. "204.80".
inline std::string format_cents_plain(Money m) {
  const std::string body = detail::fixed_decimals(m.micros(), 2, false);
  return (m.micros() < 0 && body.find_first_not_of("0.") != std::string::npos ? "-" : "") + body;
}

class ReportTable {
 public:
  explicit ReportTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns_.size()) {
      throw InvalidArgument("row has " + std::to_string(row.size()) + " cells, table has " +
                            std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  std::string render(TableFormat format) const {
    return format == TableFormat::markdown ? render_markdown() : render_csv();
  }

  // GitHub pipe table.
  std::string render_markdown() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
      out += '|';
      for (const auto& c : cells) {
        out += ' ';
        for (char ch : c) {
          if (ch == '|') out += '\\';
          out += (ch == '\n' || ch == '\r') ? ' ' : ch;
        }
        out += " |";
      }
      out += '\n';
    };
    emit(columns_);
    out += '|';
    for (std::size_t i = 0; i < columns_.size(); ++i) out += " --- |";
    out += '\n';
    for (const auto& r : rows_) emit(r);
    return out;
  }

  // RFC 4180: CRLF records, fields quoted when they hold a comma, quote or
  // line break, embedded quotes doubled.
  std::string render_csv() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
      out += "\r\n";
    };
    emit(columns_);
    for (const auto& r : rows_) emit(r);
    return out;
  }

  static std::string csv_field(std::string_view cell) {
    if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
    std::string quoted = "\"";
    for (char ch : cell) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + '"';
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace lcoai
