#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "catchall/core.hpp"
#include "catchall/optim.hpp"

namespace catchall::arma {

enum class ArmaKind {
  // (1 - phi B)(1 - B) Y_t = (1 + theta B) a_t
  Arima111,
  // Y_t = c0 + c1 t + X_t with (1 - phi B) X_t = (1 + theta B) a_t, t = 1..T
  TrendArma11,
};

inline const char* to_string(ArmaKind kind) {
  return kind == ArmaKind::Arima111 ? "arima111" : "trend-arma11";
}

/// Tagged parameter set; c0 and c1 are used only by TrendArma11.
struct ArmaModel {
  ArmaKind kind = ArmaKind::Arima111;
  double c0 = 0.0;
  double c1 = 0.0;
  double phi = 0.0;
  double theta = 0.0;

  static ArmaModel arima111(double phi, double theta) { return {ArmaKind::Arima111, 0.0, 0.0, phi, theta}; }
  static ArmaModel trend_arma11(double c0, double c1, double phi, double theta) {
    return {ArmaKind::TrendArma11, c0, c1, phi, theta};
  }

  std::vector<double> values() const {
    if (kind == ArmaKind::Arima111) return {phi, theta};
    return {c0, c1, phi, theta};
  }
  std::vector<std::string> names() const {
    if (kind == ArmaKind::Arima111) return {"phi", "theta"};
    return {"c0", "c1", "phi", "theta"};
  }

  friend bool operator==(const ArmaModel&, const ArmaModel&) = default;
};

struct PsiWeights {
  std::vector<double> coeffs;
};

struct ForecastPath {
  std::vector<double> means;
  std::vector<double> scaled_variances;
};

struct ArmaFit {
  ArmaModel model;
  double loss = 0.0;
  OptimizerReport report;
};

namespace detail {

inline std::size_t min_length(ArmaKind kind) { return kind == ArmaKind::Arima111 ? 3 : 2; }

/// The stationary ARMA(1,1) input: differences for Arima111, deviations from
/// the trend for TrendArma11.
inline std::vector<double> core_series(const Series& series, const ArmaModel& model) {
  const auto& y = series.values();
  std::vector<double> x;
  if (model.kind == ArmaKind::Arima111) {
    x.resize(y.size() - 1);
    for (std::size_t i = 1; i < y.size(); ++i) x[i - 1] = y[i] - y[i - 1];
  } else {
    x.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] - model.c0 - model.c1 * static_cast<double>(i + 1);
  }
  return x;
}

inline std::vector<double> residuals(const std::vector<double>& x, double phi, double theta) {
  std::vector<double> a(x.size(), 0.0);
  for (std::size_t t = 1; t < x.size(); ++t) a[t] = x[t] - phi * x[t - 1] - theta * a[t - 1];
  return a;
}

inline void require_length(const Series& series, ArmaKind kind) {
  if (series.size() < min_length(kind))
    throw Error(ErrorKind::TooShort, std::string(to_string(kind)) + " needs at least " +
                                         std::to_string(min_length(kind)) + " observations");
}

}  // namespace detail

/// Conditional-least-squares residuals on the core index, with a_1 = 0.
inline std::vector<double> cls_residuals(const Series& series, const ArmaModel& model) {
  detail::require_length(series, model.kind);
  return detail::residuals(detail::core_series(series, model), model.phi, model.theta);
}

/// Impulse-response coefficients psi_0..psi_{count-1} of the full model.
inline PsiWeights psi_weights(const ArmaModel& model, std::size_t count) {
  if (count < 1) throw Error(ErrorKind::HorizonOutOfRange, "psi weight count must be >= 1");
  std::vector<double> psi(count);
  psi[0] = 1.0;
  if (count > 1) psi[1] = model.phi + model.theta;
  for (std::size_t j = 2; j < count; ++j) psi[j] = model.phi * psi[j - 1];
  if (model.kind == ArmaKind::Arima111)
    for (std::size_t j = 1; j < count; ++j) psi[j] += psi[j - 1];
  return {std::move(psi)};
}

/// v_l = sum_{j<l} psi_j^2 for l = 1..m, the l-step prediction variance in units of sigma_a^2.
inline std::vector<double> scaled_variances(const ArmaModel& model, int m) {
  if (m < 1) throw Error(ErrorKind::HorizonOutOfRange, "horizon m must be >= 1");
  const auto psi = psi_weights(model, static_cast<std::size_t>(m)).coeffs;
  std::vector<double> v(psi.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < psi.size(); ++l) {
    acc += psi[l] * psi[l];
    v[l] = acc;
  }
  return v;
}

/// w_l = h / v_l where h is the harmonic mean of v_1..v_m; sums to m.
inline std::vector<double> harmonic_weights(const ArmaModel& model, int m) {
  const auto v = scaled_variances(model, m);
  double inv_sum = 0.0;
  for (double x : v) inv_sum += 1.0 / x;
  const double h = static_cast<double>(m) / inv_sum;
  std::vector<double> w(v.size());
  for (std::size_t l = 0; l < v.size(); ++l) w[l] = h / v[l];
  return w;
}

/// Predictive means and scaled variances for Y at positions t+1..t+m, where
/// `t` is a 0-based position in `series`.
inline ForecastPath forecast(const Series& series, const ArmaModel& model, std::size_t t, int m) {
  if (m < 1) throw Error(ErrorKind::HorizonOutOfRange, "horizon m must be >= 1");
  const bool differenced = model.kind == ArmaKind::Arima111;
  if (t >= series.size() || (differenced && t < 1))
    throw Error(ErrorKind::InsufficientHistory, "forecast origin has no residual history",
                static_cast<long long>(t));

  const auto x = detail::core_series(series, model);
  const std::size_t k = differenced ? t - 1 : t;
  std::vector<double> head(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k + 1));
  const auto a = detail::residuals(head, model.phi, model.theta);

  ForecastPath out;
  out.means.resize(static_cast<std::size_t>(m));
  double xhat = model.phi * x[k] + model.theta * a[k];
  double level = series[t];
  for (int l = 1; l <= m; ++l) {
    if (l > 1) xhat *= model.phi;
    if (differenced) {
      level += xhat;
      out.means[static_cast<std::size_t>(l - 1)] = level;
    } else {
      const double time = static_cast<double>(t + 1 + static_cast<std::size_t>(l));
      out.means[static_cast<std::size_t>(l - 1)] = model.c0 + model.c1 * time + xhat;
    }
  }
  out.scaled_variances = scaled_variances(model, m);
  return out;
}

/// Number of forecast origins used by catch_all_loss.
inline std::size_t origin_count(const Series& series, ArmaKind kind, int m) {
  const std::size_t core = kind == ArmaKind::Arima111 ? series.size() - 1 : series.size();
  return core > static_cast<std::size_t>(m) ? core - static_cast<std::size_t>(m) : 0;
}

/// Harmonic-weighted squared multi-step forecast errors summed over origins
/// 1..T'-m of the core index (T' = length of the core series). The innovation
/// variance never enters.
inline double catch_all_loss(const Series& series, const ArmaModel& model, int m) {
  if (m < 1) throw Error(ErrorKind::HorizonOutOfRange, "horizon m must be >= 1");
  if (series.size() < detail::min_length(model.kind) || origin_count(series, model.kind, m) == 0)
    throw Error(ErrorKind::SeriesTooShort, "series too short for m = " + std::to_string(m));

  const auto x = detail::core_series(series, model);
  const auto a = detail::residuals(x, model.phi, model.theta);
  const auto w = harmonic_weights(model, m);
  const bool differenced = model.kind == ArmaKind::Arima111;
  const auto horizons = static_cast<std::size_t>(m);

  double total = 0.0;
  for (std::size_t k = 0; k + horizons < x.size(); ++k) {
    double xhat = model.phi * x[k] + model.theta * a[k];
    double err = 0.0;
    for (std::size_t l = 1; l <= horizons; ++l) {
      if (l > 1) xhat *= model.phi;
      // The one-step error is evaluated exactly as the residual a[k + 1].
      const double e = l == 1 ? x[k + 1] - model.phi * x[k] - model.theta * a[k] : x[k + l] - xhat;
      // Level errors of an integrated model accumulate the differenced errors.
      err = differenced ? err + e : e;
      total += w[l - 1] * err * err;
    }
  }
  return total;
}

/// Ordinary least squares of Y on t = 1..T, returned as (intercept, slope).
inline std::pair<double, double> linear_trend(const Series& series) {
  const auto& y = series.values();
  const double n = static_cast<double>(y.size());
  const double tbar = (n + 1.0) / 2.0;
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dt = static_cast<double>(i + 1) - tbar;
    sxy += dt * (y[i] - ybar);
    sxx += dt * dt;
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {ybar - slope * tbar, slope};
}

/// phi = tanh(u), theta = tanh(v); the TrendArma11 slope is carried as c1 * T
/// so that all coordinates share the scale of the series.
struct ArmaTransform {
  using value_type = ArmaModel;

  ArmaKind kind;
  double slope_scale = 1.0;

  // tanh(18) is the largest argument that still rounds below 1.
  static constexpr double kMaxArg = 18.0;
  static constexpr double kMaxCoef = 0.999999;

  static double to_unbounded(double c) { return std::atanh(std::clamp(c, -kMaxCoef, kMaxCoef)); }
  static double to_bounded(double u) { return std::tanh(std::clamp(u, -kMaxArg, kMaxArg)); }

  optim::Point forward(const ArmaModel& p) const {
    if (kind == ArmaKind::Arima111) return {to_unbounded(p.phi), to_unbounded(p.theta)};
    return {p.c0, p.c1 * slope_scale, to_unbounded(p.phi), to_unbounded(p.theta)};
  }

  ArmaModel inverse(const optim::Point& u) const {
    if (kind == ArmaKind::Arima111) return ArmaModel::arima111(to_bounded(u[0]), to_bounded(u[1]));
    return ArmaModel::trend_arma11(u[0], u[1] / slope_scale, to_bounded(u[2]), to_bounded(u[3]));
  }
};

/// Starting point used when no initial model is supplied.
inline ArmaModel default_start(const Series& series, ArmaKind kind) {
  if (kind == ArmaKind::Arima111) return ArmaModel::arima111(0.2, 0.2);
  const auto [c0, c1] = linear_trend(series);
  return ArmaModel::trend_arma11(c0, c1, 0.2, 0.2);
}

/// Minimizes catch_all_loss over every model parameter jointly.
inline ArmaFit fit(const Series& series, ArmaKind kind, int m, std::optional<ArmaModel> init = std::nullopt,
                   const optim::OptimSettings& settings = {}) {
  if (m < 1) throw Error(ErrorKind::HorizonOutOfRange, "horizon m must be >= 1");
  if (series.size() < detail::min_length(kind) || origin_count(series, kind, m) == 0)
    throw Error(ErrorKind::SeriesTooShort, "series too short for m = " + std::to_string(m));
  ArmaModel start = init.value_or(default_start(series, kind));
  if (start.kind != kind) throw Error(ErrorKind::InvalidParams, "initial model kind does not match");
  if (!(std::abs(start.phi) < 1.0) || !(std::abs(start.theta) < 1.0))
    throw Error(ErrorKind::InvalidParams, "initial phi and theta must lie in (-1, 1)");

  const ArmaTransform transform{kind, static_cast<double>(series.size())};
  auto objective = [&](const ArmaModel& p) { return catch_all_loss(series, p, m); };
  auto [model, result] = optim::minimize_over(transform, objective, start, settings);
  if (!std::isfinite(result.value)) throw Error(ErrorKind::OptimizerDiverged, "ARMA loss is not finite at any restart");

  ArmaFit out{model, result.value, result.report};
  if (std::abs(model.phi) > 0.9999 || std::abs(model.theta) > 0.9999) out.report.boundary_suspect = true;
  return out;
}

/// Warm-started catch-all fits for m = 1..m_max in ascending order.
inline SweepResult<ArmaModel> sweep(const Series& series, ArmaKind kind, int m_max,
                                    std::optional<ArmaModel> init = std::nullopt,
                                    const optim::OptimSettings& settings = {}) {
  if (m_max < 1) throw Error(ErrorKind::HorizonOutOfRange, "m_max must be >= 1");
  if (series.size() < detail::min_length(kind) || origin_count(series, kind, m_max) == 0)
    throw Error(ErrorKind::SeriesTooShort, "series too short for m_max = " + std::to_string(m_max));

  SweepResult<ArmaModel> out;
  ArmaModel current = init.value_or(default_start(series, kind));
  std::vector<double> base;
  for (int m = 1; m <= m_max; ++m) {
    ArmaFit f = fit(series, kind, m, current, settings);
    current = f.model;
    auto values = current.values();
    if (m == 1) base = values;
    std::vector<double> delta(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) delta[i] = values[i] - base[i];
    out.entries.push_back({m, current, f.loss, f.report, std::move(delta)});
  }
  return out;
}

}  // namespace catchall::arma
