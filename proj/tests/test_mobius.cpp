#include <gtest/gtest.h>

#include <random>

#include "diskinterp/mobius.hpp"
#include "diskinterp/rng.hpp"

using namespace diskinterp;

namespace {

cplx random_point(Rng& rng, double rmax = 0.999) {
  const double r = rmax * std::sqrt(uniform01(rng));
  return std::polar(r, uniform(rng, 0.0, 2.0 * kPi));
}

}  // namespace

TEST(DiskPoint, RejectsBoundaryAndOutside) {
  EXPECT_THROW(DiskPoint(1.0, 0.0), Error);
  EXPECT_THROW(DiskPoint(0.0, -1.0), Error);
  EXPECT_THROW(DiskPoint(0.8, 0.8), Error);
  EXPECT_THROW(DiskPoint(std::nan(""), 0.0), Error);
  EXPECT_NO_THROW(DiskPoint(0.999999, 0.0));
}

TEST(DiskPoint, FlagsPointsHuggingTheCircle) {
  EXPECT_FALSE(DiskPoint(0.5).near_boundary());
  EXPECT_TRUE(DiskPoint(std::nextafter(1.0, 0.0)).near_boundary());
}

TEST(Mobius, Examples) {
  const cplx a(0.3, -0.2);
  EXPECT_EQ(mobius_transform(a, cplx(0.0)), a);
  EXPECT_NEAR(std::abs(mobius_transform(a, a)), 0.0, 1e-16);
  const cplx w = mobius_transform(cplx(0.5), cplx(-0.5));
  EXPECT_NEAR(w.real(), 0.8, 1e-15);
  EXPECT_NEAR(w.imag(), 0.0, 1e-15);
}

TEST(Mobius, DiskPointOverloadStaysInside) {
  const DiskPoint a(0.999999999), z(-0.999999999);
  const DiskPoint w = mobius_transform(a, z);
  EXPECT_LT(w.abs(), 1.0);
}

TEST(PseudoHyperbolic, Examples) {
  const cplx z(0.3, 0.4);
  EXPECT_NEAR(pseudo_hyperbolic(cplx(0.0), z), 0.5, 1e-15);
  EXPECT_EQ(pseudo_hyperbolic(z, z), 0.0);
  EXPECT_NEAR(pseudo_hyperbolic(cplx(0.5), cplx(0.75)), 0.4, 1e-15);
}

TEST(InvariantWeight, Examples) {
  const cplx z(0.3, 0.4);
  EXPECT_NEAR(invariant_weight(cplx(0.0), z), 0.75, 1e-15);
  EXPECT_NEAR(invariant_weight(z, z), 1.0, 1e-15);
  EXPECT_NEAR(invariant_weight(cplx(0.5), cplx(-0.5)), 0.36, 1e-15);
  EXPECT_NEAR(0.75 * 0.75 / (1.25 * 1.25), 0.36, 1e-15);
}

TEST(Mobius, RandomIdentities) {
  Rng rng(17);
  for (int i = 0; i < 20000; ++i) {
    const cplx a = random_point(rng), z = random_point(rng), c = random_point(rng), w = random_point(rng);
    const double rho = pseudo_hyperbolic(a, z);
    EXPECT_NEAR(invariant_weight(a, z) + rho * rho, 1.0, 1e-12);
    EXPECT_NEAR(pseudo_hyperbolic(mobius_transform(c, a), mobius_transform(c, z)), rho, 1e-12);
    EXPECT_NEAR(std::abs(mobius_transform(a, mobius_transform(a, z)) - z), 0.0, 1e-12);
    EXPECT_NEAR(pseudo_hyperbolic(a, z), pseudo_hyperbolic(z, a), 1e-15);
    const double r1 = pseudo_hyperbolic(a, w), r2 = pseudo_hyperbolic(w, z);
    EXPECT_LE(rho, (r1 + r2) / (1.0 + r1 * r2) + 1e-12);
  }
}

TEST(Rotation, ActsAsMultiplication) {
  const Rotation rot(kPi / 2);
  const cplx w = rot(cplx(0.5, 0.0));
  EXPECT_NEAR(w.real(), 0.0, 1e-15);
  EXPECT_NEAR(w.imag(), 0.5, 1e-15);
  EXPECT_THROW(Rotation(std::numeric_limits<double>::infinity()), Error);
}

TEST(HyperbolicDistance, MatchesArtanh) {
  EXPECT_NEAR(hyperbolic_distance(cplx(0.0), cplx(0.5)), std::atanh(0.5), 1e-15);
}
