#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "catchall/core.hpp"
#include "catchall/optim.hpp"

namespace catchall::garch {

/// GARCH(1,1) coefficients: sigma2[t] = omega + alpha * r[t-1]^2 + beta * sigma2[t-1].
struct GarchParams {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  double persistence() const noexcept { return alpha + beta; }
  double unconditional_variance() const noexcept { return omega / (1.0 - persistence()); }

  bool valid() const noexcept {
    return std::isfinite(omega) && std::isfinite(alpha) && std::isfinite(beta) && omega > 0.0 && alpha >= 0.0 &&
           beta >= 0.0 && alpha + beta < 1.0;
  }

  std::vector<double> values() const { return {omega, alpha, beta}; }
  static std::vector<std::string> names() { return {"omega", "alpha", "beta"}; }

  friend bool operator==(const GarchParams&, const GarchParams&) = default;
};

inline void require_valid(const GarchParams& p) {
  if (!p.valid())
    throw Error(ErrorKind::InvalidParams, "GARCH params need omega > 0, alpha >= 0, beta >= 0, alpha + beta < 1");
}

struct Gaussian {};
using Method = std::variant<Gaussian, CatchAllConfig>;

struct GarchFit {
  GarchParams params;
  std::vector<double> one_step_variances;
  double loss = 0.0;
  OptimizerReport report;
  Method method;
};

/// Mean-centred sample variance with n - 1 denominator.
inline double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

/// Starting variance sigma2[0]: the sample variance of the returns, or the
/// unconditional variance when the returns have no spread.
inline double default_initial_variance(const Series& returns, const GarchParams& params) {
  const double v = sample_variance(returns.values());
  return v > 0.0 ? v : params.unconditional_variance();
}

/// sigma2[t] is the variance of r[t] given r[0..t-1]; sigma2[0] is the initialization.
inline std::vector<double> one_step_variances(const Series& returns, const GarchParams& params,
                                              std::optional<double> initial_variance = std::nullopt) {
  require_valid(params);
  const auto& r = returns.values();
  std::vector<double> s(r.size());
  if (r.empty()) return s;
  s[0] = initial_variance ? *initial_variance : default_initial_variance(returns, params);
  if (!(s[0] > 0.0)) throw Error(ErrorKind::InvalidParams, "initial variance must be positive");
  for (std::size_t t = 1; t < r.size(); ++t) s[t] = params.omega + params.alpha * r[t - 1] * r[t - 1] + params.beta * s[t - 1];
  return s;
}

/// sigma2_{t+l|t} for l = 1..m given the first-step value sigma2_{t+1|t}.
inline std::vector<double> extend_variances(const GarchParams& params, double first_step, int m) {
  if (m < 1) throw Error(ErrorKind::HorizonOutOfRange, "horizon m must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(m));
  out[0] = first_step;
  const double p = params.persistence();
  for (std::size_t l = 1; l < out.size(); ++l) out[l] = params.omega + p * out[l - 1];
  return out;
}

/// Closed form of the same recursion at horizon `ell` (ell >= 1).
inline double variance_at_horizon(const GarchParams& params, double first_step, int ell) {
  const double p = params.persistence();
  const double pk = std::pow(p, ell - 1);
  return params.omega * (1.0 - pk) / (1.0 - p) + pk * first_step;
}

/// Conditional variances of r[t+1..t+m] given information through index t.
inline std::vector<double> multi_step_variances(const Series& returns, const GarchParams& params, std::size_t t,
                                                int m, std::optional<double> initial_variance = std::nullopt) {
  if (m < 1) throw Error(ErrorKind::HorizonOutOfRange, "horizon m must be >= 1");
  if (t >= returns.size()) throw Error(ErrorKind::HorizonOutOfRange, "origin index outside the series");
  const auto s = one_step_variances(returns, params, initial_variance);
  const double r = returns[t];
  return extend_variances(params, params.omega + params.alpha * r * r + params.beta * s[t], m);
}

/// Sum over t >= 1 of r[t]^2 / sigma2[t] + log sigma2[t]; the initialization term is conditioned away.
inline double gaussian_deviance(const Series& returns, const GarchParams& params,
                                std::optional<double> initial_variance = std::nullopt) {
  if (returns.size() < 2) throw Error(ErrorKind::SeriesTooShort, "series needs at least 2 observations");
  const auto s = one_step_variances(returns, params, initial_variance);
  const auto& r = returns.values();
  double total = 0.0;
  for (std::size_t t = 1; t < r.size(); ++t) total += r[t] * r[t] / s[t] + std::log(s[t]);
  return total;
}

/// Weighted multi-horizon deviance over forecast origins 0..n-m-1. With m = 1
/// and unit weight it performs the same floating-point operations as
/// gaussian_deviance.
inline double catch_all_loss(const Series& returns, const GarchParams& params, const CatchAllConfig& config,
                             std::optional<double> initial_variance = std::nullopt) {
  const std::size_t n = returns.size();
  const auto m = static_cast<std::size_t>(config.m());
  if (n <= m) throw Error(ErrorKind::SeriesTooShort, "series length must exceed m");
  const auto s = one_step_variances(returns, params, initial_variance);
  const auto& r = returns.values();
  const auto& w = config.weights();
  const double p = params.persistence();
  double total = 0.0;
  for (std::size_t t = 0; t + m < n; ++t) {
    double v = params.omega + params.alpha * r[t] * r[t] + params.beta * s[t];
    for (std::size_t l = 1; l <= m; ++l) {
      const double y = r[t + l];
      total += w[l - 1] * (y * y / v + std::log(v));
      v = params.omega + p * v;
    }
  }
  return total;
}

/// omega = exp(u); (alpha, beta) = (e^a, e^b) / (1 + e^a + e^b).
struct GarchTransform {
  using value_type = GarchParams;

  static constexpr double kFloor = 1e-12;

  optim::Point forward(const GarchParams& p) const {
    const double a = std::max(p.alpha, kFloor);
    const double b = std::max(p.beta, kFloor);
    const double rest = std::max(1.0 - a - b, kFloor);
    return {std::log(p.omega), std::log(a / rest), std::log(b / rest)};
  }

  GarchParams inverse(const optim::Point& u) const {
    const double top = std::max({0.0, u[1], u[2]});
    const double e0 = std::exp(-top), ea = std::exp(u[1] - top), eb = std::exp(u[2] - top);
    const double denom = e0 + ea + eb;
    return {std::exp(u[0]), ea / denom, eb / denom};
  }
};

namespace detail {

inline GarchParams default_start(const Series& returns) {
  const double v = sample_variance(returns.values());
  return {(1.0 - 0.9) * (v > 0.0 ? v : 1.0), 0.05, 0.85};
}

inline void flag_boundary(const Series& returns, const GarchParams& p, OptimizerReport& report) {
  double mean_square = 0.0;
  for (double r : returns.values()) mean_square += r * r;
  mean_square /= static_cast<double>(returns.size());
  // An omega collapsing far below the data scale means the loss is unbounded below.
  const bool omega_collapsed = mean_square == 0.0 || p.omega < 1e-10 * mean_square;
  if (omega_collapsed) report.converged = false;
  if (omega_collapsed || p.alpha < 1e-8 || p.beta < 1e-8 || p.persistence() > 1.0 - 1e-8)
    report.boundary_suspect = true;
}

}  // namespace detail

/// Evaluates the loss that `method` selects.
inline double loss(const Series& returns, const GarchParams& params, const Method& method,
                   std::optional<double> initial_variance = std::nullopt) {
  if (std::holds_alternative<Gaussian>(method)) return gaussian_deviance(returns, params, initial_variance);
  return catch_all_loss(returns, params, std::get<CatchAllConfig>(method), initial_variance);
}

/// Fits by Gaussian quasi-likelihood or by multi-horizon matching. Without
/// `init`, the Gaussian fit starts from persistence 0.9 and a catch-all fit
/// starts from the Gaussian estimate.
inline GarchFit fit(const Series& returns, const Method& method, std::optional<GarchParams> init = std::nullopt,
                    const optim::OptimSettings& settings = {}) {
  if (returns.size() < 2) throw Error(ErrorKind::SeriesTooShort, "series needs at least 2 observations");
  if (const auto* cfg = std::get_if<CatchAllConfig>(&method); cfg && returns.size() <= static_cast<std::size_t>(cfg->m()))
    throw Error(ErrorKind::SeriesTooShort, "series length must exceed m");

  GarchParams start;
  if (init) {
    require_valid(*init);
    start = *init;
  } else if (std::holds_alternative<Gaussian>(method)) {
    start = detail::default_start(returns);
  } else {
    start = fit(returns, Gaussian{}, std::nullopt, settings).params;
  }

  auto objective = [&](const GarchParams& p) {
    if (!p.valid()) return std::numeric_limits<double>::infinity();
    return loss(returns, p, method);
  };
  auto [params, result] = optim::minimize_over(GarchTransform{}, objective, start, settings);
  if (!std::isfinite(result.value)) throw Error(ErrorKind::OptimizerDiverged, "GARCH loss is not finite at any restart");

  GarchFit out{params, one_step_variances(returns, params), result.value, result.report, method};
  detail::flag_boundary(returns, params, out.report);
  return out;
}

/// Catch-all fits for m = 1..m_max with equal weights, each warm-started from
/// the previous estimate. The m = 1 entry is the Gaussian fit.
inline SweepResult<GarchParams> sweep(const Series& returns, int m_max, std::optional<GarchParams> init = std::nullopt,
                                      const optim::OptimSettings& settings = {}) {
  if (m_max < 1) throw Error(ErrorKind::HorizonOutOfRange, "m_max must be >= 1");
  if (returns.size() <= static_cast<std::size_t>(m_max))
    throw Error(ErrorKind::SeriesTooShort, "series length must exceed m_max");

  SweepResult<GarchParams> out;
  GarchParams current = init.value_or(detail::default_start(returns));
  std::vector<double> base;
  for (int m = 1; m <= m_max; ++m) {
    const Method method = m == 1 ? Method{Gaussian{}} : Method{CatchAllConfig(m)};
    GarchFit f = fit(returns, method, current, settings);
    current = f.params;
    auto values = current.values();
    if (m == 1) base = values;
    std::vector<double> delta(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) delta[i] = values[i] - base[i];
    out.entries.push_back({m, current, f.loss, f.report, std::move(delta)});
  }
  return out;
}

}  // namespace catchall::garch
