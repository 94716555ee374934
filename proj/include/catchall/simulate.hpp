#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "catchall/arma.hpp"
#include "catchall/core.hpp"
#include "catchall/garch.hpp"

namespace catchall::simulate {

/// SplitMix64, used only to expand a 64-bit seed into xoshiro state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman and Vigna).
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }
  Xoshiro256StarStar(std::uint64_t s0, std::uint64_t s1, std::uint64_t s2, std::uint64_t s3) : s_{s0, s1, s2, s3} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

/// Standard normal variates by the Box-Muller transform. Each pair of
/// uniforms (u1, u2) yields sqrt(-2 ln(1 - u1)) * cos(2 pi u2) followed by the
/// matching sine term.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double u1 = 1.0 - rng_.uniform();
    const double u2 = rng_.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

 private:
  Xoshiro256StarStar rng_;
  std::optional<double> spare_;
};

struct SimSpec {
  std::variant<garch::GarchParams, arma::ArmaModel> model;
  std::size_t length = 0;
  std::size_t burn_in = 500;
  std::uint64_t seed = 0;
  // Innovation standard deviation for the ARMA family; GARCH ignores it.
  double innovation_scale = 1.0;
};

namespace detail {

inline std::vector<double> garch_path(const garch::GarchParams& p, std::size_t total, NormalStream& z) {
  std::vector<double> r(total);
  double variance = p.unconditional_variance();
  for (std::size_t t = 0; t < total; ++t) {
    r[t] = std::sqrt(variance) * z.next();
    variance = p.omega + p.alpha * r[t] * r[t] + p.beta * variance;
  }
  return r;
}

inline std::vector<double> arma_path(double phi, double theta, double scale, std::size_t total, NormalStream& z) {
  std::vector<double> x(total);
  double prev_x = 0.0, prev_a = 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    const double a = scale * z.next();
    x[t] = phi * prev_x + a + theta * prev_a;
    prev_x = x[t];
    prev_a = a;
  }
  return x;
}

}  // namespace detail

/// Simulated path of `spec.length` observations labelled 1..length.
inline Series simulate(const SimSpec& spec) {
  // The result must be a valid Series, so one observation is not enough.
  if (spec.length < 2) throw Error(ErrorKind::InvalidConfig, "simulation length must be >= 2");
  if (!(spec.innovation_scale > 0.0)) throw Error(ErrorKind::InvalidConfig, "innovation scale must be positive");
  NormalStream z(spec.seed);
  const std::size_t total = spec.burn_in + spec.length;
  std::vector<double> values;

  if (const auto* g = std::get_if<garch::GarchParams>(&spec.model)) {
    garch::require_valid(*g);
    values = detail::garch_path(*g, total, z);
  } else {
    const auto& m = std::get<arma::ArmaModel>(spec.model);
    if (!(std::abs(m.phi) < 1.0) || !(std::abs(m.theta) < 1.0))
      throw Error(ErrorKind::InvalidParams, "phi and theta must lie in (-1, 1)");
    values = detail::arma_path(m.phi, m.theta, spec.innovation_scale, total, z);
    if (m.kind == arma::ArmaKind::Arima111)
      for (std::size_t t = 1; t < total; ++t) values[t] += values[t - 1];
  }
  values.erase(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(spec.burn_in));

  if (const auto* m = std::get_if<arma::ArmaModel>(&spec.model); m && m->kind == arma::ArmaKind::TrendArma11)
    for (std::size_t t = 0; t < values.size(); ++t) values[t] += m->c0 + m->c1 * static_cast<double>(t + 1);

  return make_series(values);
}

}  // namespace catchall::simulate
