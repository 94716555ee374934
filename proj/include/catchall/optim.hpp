#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "catchall/core.hpp"

namespace catchall::optim {

using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;
// Called once per simplex iteration with the running iteration count and best value.
using Observer = std::function<void(int, double)>;

struct OptimSettings {
  double objective_tolerance = 1e-8;
  double parameter_tolerance = 1e-8;
  int max_iterations = 5000;
  int restarts = 3;
  double initial_simplex_scale = 0.1;
};

struct MinimizeResult {
  Point argmin;
  double value = std::numeric_limits<double>::infinity();
  OptimizerReport report;
};

/// Bijection between a constrained parameter type and R^n.
template <class T>
concept Transform = requires(const T& t, const typename T::value_type& p, const Point& u) {
  { t.forward(p) } -> std::convertible_to<Point>;
  { t.inverse(u) } -> std::convertible_to<typename T::value_type>;
};

namespace detail {

// Multiplicative perturbations tried, in this order, when the start is not finite.
inline constexpr std::array<double, 6> kJitterFactors = {1.05, 0.95, 1.10, 0.90, 1.20, 0.80};

inline double guarded(const Objective& f, const Point& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct SimplexRun {
  Point best;
  double value;
  int iterations;
  bool converged;
};

inline SimplexRun nelder_mead(const Objective& f, const Point& start, double start_value, const OptimSettings& s,
                              int iteration_budget, int iteration_offset, const Observer& observer) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const std::size_t n = start.size();

  std::vector<Point> x(n + 1, start);
  std::vector<double> fx(n + 1, start_value);
  for (std::size_t i = 0; i < n; ++i) {
    x[i + 1][i] += s.initial_simplex_scale * std::max(1.0, std::abs(start[i]));
    fx[i + 1] = guarded(f, x[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<Point> xs(n + 1);
    std::vector<double> fs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      xs[k] = std::move(x[order[k]]);
      fs[k] = fx[order[k]];
    }
    x = std::move(xs);
    fx = std::move(fs);
  };
  auto affine = [n](const Point& base, const Point& toward, double t) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = base[i] + t * (toward[i] - base[i]);
    return p;
  };

  int it = 0;
  bool converged = false;
  Point centroid(n);
  for (;;) {
    sort_simplex();
    if (observer) observer(iteration_offset + it, fx[0]);

    double spread = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(x[k][i] - x[0][i]));
    if (std::isfinite(fx[n]) && fx[n] - fx[0] <= s.objective_tolerance && spread <= s.parameter_tolerance) {
      converged = true;
      break;
    }
    if (it >= iteration_budget) break;
    ++it;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += x[k][i];
    for (double& c : centroid) c /= static_cast<double>(n);

    const Point xr = affine(centroid, x[n], -kReflect);
    const double fr = guarded(f, xr);
    if (fr < fx[0]) {
      Point xe = affine(centroid, xr, kExpand);
      const double fe = guarded(f, xe);
      if (fe < fr) {
        x[n] = std::move(xe);
        fx[n] = fe;
      } else {
        x[n] = xr;
        fx[n] = fr;
      }
      continue;
    }
    if (fr < fx[n - 1]) {
      x[n] = xr;
      fx[n] = fr;
      continue;
    }
    if (fr < fx[n]) {
      Point xc = affine(centroid, xr, kContract);
      const double fc = guarded(f, xc);
      if (fc <= fr) {
        x[n] = std::move(xc);
        fx[n] = fc;
        continue;
      }
    } else {
      Point xc = affine(centroid, x[n], kContract);
      const double fc = guarded(f, xc);
      if (fc < fx[n]) {
        x[n] = std::move(xc);
        fx[n] = fc;
        continue;
      }
    }
    for (std::size_t k = 1; k <= n; ++k) {
      x[k] = affine(x[0], x[k], kShrink);
      fx[k] = guarded(f, x[k]);
    }
  }
  return {x[0], fx[0], it, converged};
}

}  // namespace detail

/// Nelder-Mead simplex search with restarts around the incumbent.
///
/// The first run starts from `start`; each restart rebuilds a fresh simplex
/// of size `initial_simplex_scale` around the best point so far. Restarts stop
/// early once one fails to improve the best value by more than
/// `objective_tolerance`. If the objective is not finite at `start`, the fixed
/// jitter schedule in `detail::kJitterFactors` is tried coordinate by
/// coordinate, then on the whole vector.
inline MinimizeResult minimize(const Objective& objective, const Point& start, const OptimSettings& settings = {},
                               const Observer& observer = {}) {
  if (start.empty()) throw Error(ErrorKind::InvalidConfig, "minimize needs at least one coordinate");
  if (!(settings.objective_tolerance > 0) || !(settings.parameter_tolerance > 0) || settings.max_iterations <= 0 ||
      settings.restarts < 0 || !(settings.initial_simplex_scale > 0))
    throw Error(ErrorKind::InvalidConfig, "optimizer settings must be positive");

  Point x0 = start;
  double f0 = detail::guarded(objective, x0);
  if (!std::isfinite(f0)) {
    auto scaled = [](double v, double factor) { return v == 0.0 ? factor - 1.0 : v * factor; };
    bool found = false;
    for (double factor : detail::kJitterFactors) {
      for (std::size_t i = 0; i <= start.size() && !found; ++i) {
        Point trial = start;
        if (i < start.size()) {
          trial[i] = scaled(trial[i], factor);
        } else {
          for (double& v : trial) v = scaled(v, factor);
        }
        const double ft = detail::guarded(objective, trial);
        if (std::isfinite(ft)) {
          x0 = std::move(trial);
          f0 = ft;
          found = true;
        }
      }
      if (found) break;
    }
    if (!found) throw Error(ErrorKind::NonFiniteObjective, "objective is not finite at the start or any jitter");
  }

  MinimizeResult result;
  auto run = detail::nelder_mead(objective, x0, f0, settings, settings.max_iterations, 0, observer);
  result.argmin = run.best;
  result.value = run.value;
  result.report.iterations = run.iterations;
  result.report.converged = run.converged;

  for (int r = 0; r < settings.restarts; ++r) {
    const int budget = settings.max_iterations - result.report.iterations;
    if (budget <= 0) break;
    run = detail::nelder_mead(objective, result.argmin, result.value, settings, budget, result.report.iterations,
                              observer);
    result.report.iterations += run.iterations;
    ++result.report.restarts_used;
    const double improvement = result.value - run.value;
    if (run.value <= result.value) {
      result.argmin = run.best;
      result.value = run.value;
    }
    result.report.converged = run.converged;
    if (run.converged && improvement <= settings.objective_tolerance) break;
  }
  result.report.final_loss = result.value;
  if (!std::isfinite(result.value)) result.report.converged = false;
  return result;
}

/// Minimizes `loss` over the constrained set described by `transform`.
template <Transform T, class Loss>
  requires std::invocable<const Loss&, const typename T::value_type&>
std::pair<typename T::value_type, MinimizeResult> minimize_over(const T& transform, const Loss& loss,
                                                                const typename T::value_type& init,
                                                                const OptimSettings& settings = {}) {
  auto objective = [&](const Point& u) { return loss(transform.inverse(u)); };
  MinimizeResult result = minimize(objective, transform.forward(init), settings);
  return {transform.inverse(result.argmin), std::move(result)};
}

}  // namespace catchall::optim
