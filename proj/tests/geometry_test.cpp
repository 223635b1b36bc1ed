#include <cmath>

#include <gtest/gtest.h>

#include "gyrokit/geometry.hpp"
#include "gyrokit/sampling.hpp"

namespace {

using gyrokit::GyroVector;

// arcosh of the Cayley-Klein cross ratio form.
double arcosh_oracle(const GyroVector& x, const GyroVector& y) {
  const double c = (1.0 - dot(x, y)) /
                   std::sqrt((1.0 - x.norm_squared()) * (1.0 - y.norm_squared()));
  return std::acosh(std::max(c, 1.0));
}

TEST(KleinDistance, Values) {
  EXPECT_EQ(klein_distance(GyroVector::zero(2), GyroVector::zero(2)), 0.0);
  const double expected = std::atanh(0.5);
  EXPECT_NEAR(expected, std::acosh(1.0 / std::sqrt(0.75)), 1e-14);
  EXPECT_NEAR(klein_distance(GyroVector::zero(2), GyroVector{0.5, 0.0}), expected, 1e-15);
  EXPECT_NEAR(klein_distance(GyroVector{0.5, 0.0}, GyroVector{0.8, 0.0}),
              std::atanh(0.8) - std::atanh(0.5), 1e-14);
  EXPECT_NEAR(klein_distance(GyroVector{0.5, 0.0}, GyroVector{0.8, 0.0}), 0.54930614, 1e-8);
}

TEST(KleinDistance, MatchesArcoshFormAwayFromDiagonal) {
  gyrokit::BallSampler s(5, 3, 0.99);
  for (int i = 0; i < 500; ++i) {
    const GyroVector x = s.point(), y = s.point();
    const double expected = arcosh_oracle(x, y);
    if (expected < 1e-3) continue;
    EXPECT_NEAR(klein_distance(x, y), expected, 1e-9 * (1.0 + expected));
  }
}

TEST(KleinDistance, CoincidentPointsGiveZero) {
  const GyroVector x{0.9, -0.3};
  EXPECT_EQ(klein_distance(x, x), 0.0);
}

TEST(Commutes, Examples) {
  EXPECT_TRUE(commutes(GyroVector{0.2, 0.0}, GyroVector{0.6, 0.0}));
  EXPECT_FALSE(commutes(GyroVector{0.5, 0.0}, GyroVector{0.0, 0.5}));
  EXPECT_TRUE(commutes(GyroVector::zero(2), GyroVector{0.3, 0.4}));
}

TEST(LinearlyDependent, Examples) {
  EXPECT_TRUE(linearly_dependent(GyroVector{0.2, 0.0}, GyroVector{0.6, 0.0}));
  EXPECT_FALSE(linearly_dependent(GyroVector{0.5, 0.0}, GyroVector{0.0, 0.5}));
  EXPECT_TRUE(linearly_dependent(GyroVector::zero(2), GyroVector{0.9, 0.0}));
}

TEST(Commutes, DimensionMismatch) {
  EXPECT_THROW(commutes(GyroVector{0.1, 0.0}, GyroVector{0.1, 0.0, 0.0}),
               gyrokit::DimensionMismatch);
}

TEST(Collinear, Examples) {
  const GyroVector a{0.1, 0.1}, b{0.2, 0.2}, c{0.3, 0.3};
  EXPECT_TRUE(collinear_gyro(a, b, c));
  EXPECT_TRUE(collinear_direct(a, b, c));

  const GyroVector o = GyroVector::zero(2), x{0.3, 0.0}, y{0.0, 0.3};
  EXPECT_FALSE(collinear_gyro(o, x, y));
  EXPECT_FALSE(collinear_direct(o, x, y));
  EXPECT_EQ(collinear_gyro(o, x, y), commutes(x, y));

  const GyroVector p{0.4, 0.1}, z{-0.7, 0.2};
  EXPECT_TRUE(collinear_gyro(p, p, z));
  EXPECT_TRUE(collinear_direct(z, p, p));
}

TEST(Collinear, OffChordPointIsDetected) {
  const GyroVector x{0.1, 0.0}, y{0.5, 0.0}, z{0.3, 0.05};
  EXPECT_FALSE(collinear_gyro(x, y, z));
  EXPECT_FALSE(collinear_direct(x, y, z));
}

}  // namespace
