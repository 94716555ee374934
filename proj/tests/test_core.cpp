#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "catchall/core.hpp"

using catchall::CatchAllConfig;
using catchall::Error;
using catchall::ErrorKind;
using catchall::validate_series;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected catchall::Error";
  return ErrorKind::Usage;
}

}  // namespace

TEST(ValidateSeries, MinimalInput) {
  const auto s = validate_series({{"1", 0.1}, {"2", 0.2}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[1], 0.2);
  EXPECT_EQ(s.labels()[0], "1");
}

TEST(ValidateSeries, RejectsNonFinite) {
  try {
    validate_series({{"1", std::numeric_limits<double>::quiet_NaN()}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
    EXPECT_EQ(e.where().value(), 0);
  }
  EXPECT_EQ(kind_of([] { validate_series({{"1", 1.0}, {"2", std::numeric_limits<double>::infinity()}}); }),
            ErrorKind::NonFinite);
}

TEST(ValidateSeries, RejectsShortAndUnordered) {
  EXPECT_EQ(kind_of([] { validate_series({{"1", 1.0}}); }), ErrorKind::TooShort);
  EXPECT_EQ(kind_of([] { validate_series({{"2", 0.1}, {"1", 0.2}}); }), ErrorKind::NonMonotoneLabels);
  EXPECT_EQ(kind_of([] { validate_series({{"1", 0.1}, {"1", 0.2}}); }), ErrorKind::NonMonotoneLabels);
}

TEST(ValidateSeries, OpaqueLabelsOnlyNeedToBeDistinctInOrder) {
  // Date strings are not numeric, so no ordering check applies.
  const auto s = validate_series({{"2006-08-15", 1.0}, {"2004-08-26", 2.0}});
  EXPECT_EQ(s.size(), 2u);
}

TEST(ValidateSeries, Idempotent) {
  const auto s = validate_series({{"1", 0.5}, {"2", -1.25}, {"7", 3.0}}, "percent");
  EXPECT_EQ(validate_series(s), s);
  EXPECT_EQ(validate_series(validate_series(s)), s);
}

TEST(CatchAllConfig, EqualWeightsExpandToOnes) {
  const CatchAllConfig c(4);
  EXPECT_TRUE(c.equal());
  EXPECT_EQ(c.weights(), (std::vector<double>{1, 1, 1, 1}));
}

TEST(CatchAllConfig, Validation) {
  EXPECT_EQ(kind_of([] { CatchAllConfig c(0); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { CatchAllConfig c(2, std::vector<double>{1.0}); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { CatchAllConfig c(2, std::vector<double>{1.0, 0.0}); }), ErrorKind::InvalidConfig);
  const CatchAllConfig ok(2, std::vector<double>{0.5, 2.0});
  EXPECT_FALSE(ok.equal());
}
