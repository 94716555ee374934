#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "catchall/simulate.hpp"

using namespace catchall;
using simulate::SimSpec;

namespace {

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double autocorr(const std::vector<double>& x, std::size_t lag) {
  const double mu = mean(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mu) * (x[i] - mu);
    if (i >= lag) num += (x[i] - mu) * (x[i - lag] - mu);
  }
  return num / den;
}

}  // namespace

TEST(Rng, SplitMixReferenceValue) {
  simulate::SplitMix64 sm(0);
  EXPECT_EQ(sm.next(), 0xe220a8397b1dcdafULL);
}

TEST(Rng, XoshiroReferenceState) {
  simulate::Xoshiro256StarStar g(1, 2, 3, 4);
  EXPECT_EQ(g(), 11520ULL);
  EXPECT_EQ(g(), 0ULL);
  EXPECT_EQ(g(), 1509978240ULL);
  EXPECT_EQ(g(), 1215971899390074240ULL);
}

TEST(Rng, SeededStream) {
  simulate::Xoshiro256StarStar g(42);
  EXPECT_EQ(g(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(g(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(g(), 0xae17533239e499a1ULL);
}

// Known-answer vectors from docs/gen_rng_vectors.py (a separate Python implementation).
TEST(Rng, BoxMullerKnownAnswers) {
  const std::vector<double> seed0 = {-0.01896499060631051, -1.3559302271143727, -0.40372109705088766,
                                     0.23335097938940202,  1.6251100012755157,  -0.0025686863690826036,
                                     -1.0212488312794932,  -0.23269227649071378, 1.7168737023117626,
                                     -0.9599654373059253};
  const std::vector<double> seed42 = {-0.303263064678738, 0.28846173882942383, 1.3438117634372806,
                                      -0.6879751798977497, 0.3834617912676943, -3.0758989311988945,
                                      0.9369624250258953,  -1.2894742698587276, -1.4659604229447887,
                                      -0.8465688656160508};
  simulate::NormalStream a(0), b(42);
  for (std::size_t i = 0; i < 10; ++i) {
    const double x = a.next(), y = b.next();
    // Within one ulp of the reference.
    EXPECT_NEAR(x, seed0[i], 2.3e-16 * std::abs(seed0[i]));
    EXPECT_NEAR(y, seed42[i], 2.3e-16 * std::abs(seed42[i]));
  }
}

TEST(Simulate, IdenticalSeedsAreBitExact) {
  SimSpec spec;
  spec.model = garch::GarchParams{0.05, 0.1, 0.85};
  spec.length = 300;
  spec.seed = 2024;
  EXPECT_EQ(simulate::simulate(spec), simulate::simulate(spec));
  auto other = spec;
  other.seed = 2025;
  EXPECT_NE(simulate::simulate(spec).values(), simulate::simulate(other).values());
}

TEST(Simulate, IidGarchVarianceIsOmega) {
  SimSpec spec;
  spec.model = garch::GarchParams{0.4, 0.0, 0.0};
  spec.length = 100000;
  spec.seed = 5;
  const auto s = simulate::simulate(spec);
  double ss = 0.0;
  for (double v : s.values()) ss += v * v;
  EXPECT_NEAR(ss / static_cast<double>(s.size()), 0.4, 0.05 * 0.4);
}

TEST(Simulate, GarchHasHeavyTails) {
  SimSpec spec;
  spec.model = garch::GarchParams{0.05, 0.15, 0.8};
  spec.length = 200000;
  spec.seed = 6;
  const auto s = simulate::simulate(spec);
  double m2 = 0.0, m4 = 0.0;
  for (double v : s.values()) {
    m2 += v * v;
    m4 += v * v * v * v;
  }
  m2 /= static_cast<double>(s.size());
  m4 /= static_cast<double>(s.size());
  EXPECT_GT(m4 / (m2 * m2), 3.3);
}

TEST(Simulate, WhiteNoiseHasNoLagOneCorrelation) {
  SimSpec spec;
  spec.model = arma::ArmaModel::trend_arma11(0, 0, 0, 0);
  spec.length = 20000;
  spec.seed = 7;
  const auto s = simulate::simulate(spec);
  EXPECT_LT(std::abs(autocorr(s.values(), 1)), 3.0 / std::sqrt(20000.0));
}

TEST(Simulate, DifferencedArimaHasArmaAutocorrelation) {
  const double phi = 0.5, theta = 0.3;
  SimSpec spec;
  spec.model = arma::ArmaModel::arima111(phi, theta);
  spec.length = 50000;
  spec.seed = 8;
  const auto y = simulate::simulate(spec).values();
  std::vector<double> d(y.size() - 1);
  for (std::size_t i = 1; i < y.size(); ++i) d[i - 1] = y[i] - y[i - 1];
  const double rho1 = (1 + phi * theta) * (phi + theta) / (1 + 2 * phi * theta + theta * theta);
  // Bartlett's standard error for lag 1 is close to 1/sqrt(n) times a modest factor here.
  EXPECT_NEAR(autocorr(d, 1), rho1, 4.0 / std::sqrt(static_cast<double>(d.size())));
}

TEST(Simulate, TrendIsAddedAfterNoise) {
  SimSpec spec;
  spec.model = arma::ArmaModel::trend_arma11(2.0, 0.5, 0.0, 0.0);
  spec.length = 10;
  spec.seed = 9;
  spec.innovation_scale = 1e-9;
  const auto s = simulate::simulate(spec);
  for (std::size_t t = 0; t < s.size(); ++t) EXPECT_NEAR(s[t], 2.0 + 0.5 * static_cast<double>(t + 1), 1e-7);
  EXPECT_EQ(s.labels().front(), "1");
}

TEST(Simulate, InvalidSpecs) {
  SimSpec spec;
  spec.model = garch::GarchParams{0.05, 0.1, 0.85};
  spec.length = 1;
  EXPECT_THROW(simulate::simulate(spec), Error);
  spec.length = 10;
  spec.model = garch::GarchParams{0.05, 0.5, 0.6};
  EXPECT_THROW(simulate::simulate(spec), Error);
  spec.model = arma::ArmaModel::arima111(1.0, 0.0);
  EXPECT_THROW(simulate::simulate(spec), Error);
}
