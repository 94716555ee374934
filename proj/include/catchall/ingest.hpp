#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "catchall/core.hpp"

namespace catchall::ingest {

/// Delimited text with one observation per row.
struct GenericCsv {
  std::size_t label_column = 0;
  std::size_t value_column = 1;
  // nullopt: treat the first row as a header when its value field is not numeric.
  std::optional<bool> has_header;
  char delimiter = ',';
};

/// GISTEMP global means table (CSV or the fixed-width text layout); reads the J-D column.
struct GissAnnual {};

/// NOAA global annual anomaly series ("Year,Value" rows after a metadata preamble).
struct NoaaAnnual {};

using DataSourceFormat = std::variant<GenericCsv, GissAnnual, NoaaAnnual>;

/// Inclusive year window; used by the anomaly parsers, and by GenericCsv when labels are numeric.
struct YearRange {
  std::optional<long long> from;
  std::optional<long long> to;

  bool contains(long long year) const { return (!from || year >= *from) && (!to || year <= *to); }
};

enum class ReturnConvention { LogPercent, Log, Simple };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delimiter, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string_view line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = pos + 1;
  }
  return out;
}

inline bool blank_or_comment(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

inline bool is_asterisks(std::string_view field) {
  return !field.empty() && std::all_of(field.begin(), field.end(), [](char c) { return c == '*'; });
}

inline std::optional<long long> parse_year(std::string_view field) {
  field = trim(field);
  if (field.size() == 6) field = field.substr(0, 4);  // YYYYMM
  if (field.size() != 4 || !std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  return std::stoll(std::string(field));
}

[[noreturn]] inline void parse_error(std::size_t line_index, const std::string& reason) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_index + 1) + ": " + reason,
              static_cast<long long>(line_index + 1));
}

using Rows = std::vector<std::pair<std::string, double>>;

inline Rows parse_generic(std::string_view text, const GenericCsv& fmt, const YearRange& range) {
  Rows rows;
  bool first = true;
  const auto all = lines(text);
  const std::size_t needed = std::max(fmt.label_column, fmt.value_column) + 1;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (blank_or_comment(all[i])) continue;
    const auto fields = split(all[i], fmt.delimiter);
    if (first) {
      first = false;
      const bool header = fmt.has_header.value_or(fields.size() >= needed &&
                                                  !catchall::detail::parse_number(fields[fmt.value_column]));
      if (header) continue;
    }
    if (fields.size() < needed)
      parse_error(i, "expected at least " + std::to_string(needed) + " columns, found " + std::to_string(fields.size()));
    const auto value = catchall::detail::parse_number(fields[fmt.value_column]);
    if (!value) parse_error(i, "value '" + std::string(fields[fmt.value_column]) + "' is not a number");
    std::string label(fields[fmt.label_column]);
    if (range.from || range.to) {
      if (const auto numeric = catchall::detail::parse_number(label); numeric && !range.contains(std::llround(*numeric)))
        continue;
    }
    rows.emplace_back(std::move(label), *value);
  }
  return rows;
}

inline Rows parse_giss(std::string_view text, const YearRange& range) {
  Rows rows;
  std::optional<std::size_t> annual_column;
  bool fixed_width = false;
  const auto all = lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (blank_or_comment(all[i])) continue;
    const bool csv = all[i].find(',') != std::string_view::npos;
    const auto fields = csv ? split(all[i], ',') : split_whitespace(all[i]);
    if (fields.empty()) continue;
    if (fields[0] == "Year") {
      const auto it = std::find(fields.begin(), fields.end(), std::string_view("J-D"));
      if (it == fields.end()) parse_error(i, "header has no J-D column");
      annual_column = static_cast<std::size_t>(it - fields.begin());
      fixed_width = !csv;
      continue;
    }
    const auto year = parse_year(fields[0]);
    if (!year) continue;  // titles, footnotes
    if (!annual_column) parse_error(i, "data row before the Year header");
    if (fields.size() <= *annual_column) parse_error(i, "row has no J-D value");
    if (!range.contains(*year)) continue;
    const auto field = fields[*annual_column];
    if (is_asterisks(field))
      throw Error(ErrorKind::MissingValue, "missing annual value for " + std::to_string(*year), *year);
    const auto value = catchall::detail::parse_number(field);
    if (!value) parse_error(i, "annual value '" + std::string(field) + "' is not a number");
    // The text table is in hundredths of a degree.
    rows.emplace_back(std::to_string(*year), fixed_width ? *value / 100.0 : *value);
  }
  return rows;
}

inline Rows parse_noaa(std::string_view text, const YearRange& range) {
  Rows rows;
  std::vector<double> sentinels = {-999.0, -9999.0};
  const auto all = lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (blank_or_comment(all[i])) continue;
    const auto fields = split(all[i], ',');
    const auto year = parse_year(fields[0]);
    if (!year) {
      const auto t = trim(all[i]);
      if (t.rfind("Missing:", 0) == 0) {
        if (const auto v = catchall::detail::parse_number(t.substr(8))) sentinels.push_back(*v);
      }
      continue;
    }
    if (fields.size() < 2) parse_error(i, "expected Year,Value");
    if (!range.contains(*year)) continue;
    const auto value = catchall::detail::parse_number(fields[1]);
    if (!value) parse_error(i, "value '" + std::string(fields[1]) + "' is not a number");
    if (std::find(sentinels.begin(), sentinels.end(), *value) != sentinels.end())
      throw Error(ErrorKind::MissingValue, "missing annual value for " + std::to_string(*year), *year);
    rows.emplace_back(std::to_string(*year), *value);
  }
  return rows;
}

}  // namespace detail

/// Parses text already in memory. Any malformed input produces an Error, never UB.
inline Series parse(std::string_view text, const DataSourceFormat& format, const YearRange& range = {},
                    std::string unit = {}) {
  detail::Rows rows = std::visit(
      [&](const auto& fmt) -> detail::Rows {
        using F = std::decay_t<decltype(fmt)>;
        if constexpr (std::is_same_v<F, GenericCsv>) return detail::parse_generic(text, fmt, range);
        else if constexpr (std::is_same_v<F, GissAnnual>) return detail::parse_giss(text, range);
        else return detail::parse_noaa(text, range);
      },
      format);
  if (rows.empty()) throw Error(ErrorKind::EmptyRange, "no observations in the requested range");
  return validate_series(std::move(rows), std::move(unit));
}

inline Series load(const std::string& path, const DataSourceFormat& format, const YearRange& range = {},
                   std::string unit = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "file not found: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), format, range, std::move(unit));
}

/// Period-over-period returns of a raw price vector; length is one less than the input.
inline std::vector<double> returns_of(const std::vector<double>& prices,
                                      ReturnConvention convention = ReturnConvention::LogPercent) {
  if (prices.size() < 2) throw Error(ErrorKind::TooShort, "need at least 2 prices");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    const bool bad = convention == ReturnConvention::Simple ? (i + 1 < prices.size() && prices[i] == 0.0)
                                                            : !(prices[i] > 0.0);
    if (bad)
      throw Error(ErrorKind::NonPositivePrice, "invalid price at index " + std::to_string(i), static_cast<long long>(i));
  }
  std::vector<double> r(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) {
    switch (convention) {
      case ReturnConvention::LogPercent: r[i - 1] = 100.0 * (std::log(prices[i]) - std::log(prices[i - 1])); break;
      case ReturnConvention::Log: r[i - 1] = std::log(prices[i]) - std::log(prices[i - 1]); break;
      case ReturnConvention::Simple: r[i - 1] = prices[i] / prices[i - 1] - 1.0; break;
    }
  }
  return r;
}

/// Returns series labelled by the later observation of each pair. Needs three
/// prices, since a Series holds at least two values.
inline Series to_returns(const Series& prices, ReturnConvention convention = ReturnConvention::LogPercent) {
  const auto r = returns_of(prices.values(), convention);
  std::vector<std::pair<std::string, double>> raw;
  raw.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) raw.emplace_back(prices.labels()[i + 1], r[i]);
  return validate_series(std::move(raw), prices.unit());
}

/// Subtracts the sample mean.
inline Series center(const Series& series) {
  double mean = 0.0;
  for (double v : series.values()) mean += v;
  mean /= static_cast<double>(series.size());
  std::vector<std::pair<std::string, double>> raw;
  raw.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) raw.emplace_back(series.labels()[i], series[i] - mean);
  return validate_series(std::move(raw), series.unit());
}

}  // namespace catchall::ingest
