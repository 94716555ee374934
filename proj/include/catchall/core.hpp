#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace catchall {

enum class ErrorKind {
  NonFinite,
  TooShort,
  NonMonotoneLabels,
  InvalidParams,
  InvalidConfig,
  HorizonOutOfRange,
  SeriesTooShort,
  InsufficientHistory,
  OptimizerDiverged,
  NonFiniteObjective,
  ParseError,
  MissingValue,
  EmptyRange,
  NonPositivePrice,
  FileNotFound,
  Usage,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::NonMonotoneLabels: return "NonMonotoneLabels";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::HorizonOutOfRange: return "HorizonOutOfRange";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::OptimizerDiverged: return "OptimizerDiverged";
    case ErrorKind::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception. `where`
/// carries the offending index, line number or year when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::optional<long long> where = std::nullopt)
      : std::runtime_error(std::move(message)), kind_(kind), where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<long long> where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::optional<long long> where_;
};

/// Result of a derivative-free minimization.
struct OptimizerReport {
  bool converged = false;
  int iterations = 0;
  double final_loss = 0.0;
  int restarts_used = 0;
  // Set when the estimate sits numerically on the edge of the parameter set.
  bool boundary_suspect = false;
};

/// Univariate series with opaque, ordered time labels.
class Series {
 public:
  Series() = default;

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::string& unit() const noexcept { return unit_; }

  friend bool operator==(const Series&, const Series&) = default;

 private:
  friend Series validate_series(std::vector<std::pair<std::string, double>> raw, std::string unit);

  std::vector<std::string> labels_;
  std::vector<double> values_;
  std::string unit_;
};

namespace detail {

inline std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Checks finiteness, minimum length and (for numeric labels) strict ordering.
inline Series validate_series(std::vector<std::pair<std::string, double>> raw, std::string unit = {}) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i].second))
      throw Error(ErrorKind::NonFinite, "non-finite value at index " + std::to_string(i),
                  static_cast<long long>(i));
  }
  if (raw.size() < 2) throw Error(ErrorKind::TooShort, "series needs at least 2 observations");

  std::vector<double> numeric;
  numeric.reserve(raw.size());
  for (const auto& [label, value] : raw) {
    auto parsed = detail::parse_number(label);
    if (!parsed) break;
    numeric.push_back(*parsed);
  }
  if (numeric.size() == raw.size()) {
    for (std::size_t i = 1; i < numeric.size(); ++i) {
      if (!(numeric[i] > numeric[i - 1]))
        throw Error(ErrorKind::NonMonotoneLabels, "labels not strictly increasing at index " + std::to_string(i),
                    static_cast<long long>(i));
    }
  }

  Series s;
  s.labels_.reserve(raw.size());
  s.values_.reserve(raw.size());
  for (auto& [label, value] : raw) {
    s.labels_.push_back(std::move(label));
    s.values_.push_back(value);
  }
  s.unit_ = std::move(unit);
  return s;
}

inline Series validate_series(const Series& series) {
  std::vector<std::pair<std::string, double>> raw;
  raw.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) raw.emplace_back(series.labels()[i], series[i]);
  return validate_series(std::move(raw), series.unit());
}

/// Series labelled 1..n.
inline Series make_series(const std::vector<double>& values, std::string unit = {}) {
  std::vector<std::pair<std::string, double>> raw;
  raw.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) raw.emplace_back(std::to_string(i + 1), values[i]);
  return validate_series(std::move(raw), std::move(unit));
}

struct EqualWeights {};

/// Horizon count and per-horizon weights for the multi-step losses.
class CatchAllConfig {
 public:
  explicit CatchAllConfig(int m, EqualWeights = {}) : m_(m), weights_(m > 0 ? m : 0, 1.0) {
    if (m < 1) throw Error(ErrorKind::InvalidConfig, "m must be >= 1");
  }

  CatchAllConfig(int m, std::vector<double> weights) : m_(m), weights_(std::move(weights)), equal_(false) {
    if (m < 1) throw Error(ErrorKind::InvalidConfig, "m must be >= 1");
    if (weights_.size() != static_cast<std::size_t>(m))
      throw Error(ErrorKind::InvalidConfig, "expected " + std::to_string(m) + " weights");
    for (double w : weights_)
      if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidConfig, "weights must be positive");
  }

  int m() const noexcept { return m_; }
  bool equal() const noexcept { return equal_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  int m_;
  std::vector<double> weights_;
  bool equal_ = true;
};

/// One row of an m-sweep: the estimate at horizon count `m` and its change
/// relative to the m = 1 estimate, parameter by parameter.
template <class Model>
struct SweepEntry {
  int m = 0;
  Model model;
  double loss = 0.0;
  OptimizerReport report;
  std::vector<double> delta_from_m1;
};

template <class Model>
struct SweepResult {
  std::vector<SweepEntry<Model>> entries;
};

}  // namespace catchall
