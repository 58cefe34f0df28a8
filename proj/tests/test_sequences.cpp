#include <gtest/gtest.h>

#include <cmath>

#include "diskinterp/sequences.hpp"

using namespace diskinterp;

namespace {

double brute_separation(const std::vector<cplx>& z) {
  double best = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = 0; j < z.size(); ++j)
      if (i != j) best = std::min(best, std::abs(z[i] - z[j]) / std::abs(1.0 - std::conj(z[i]) * z[j]));
  return best;
}

// Plain product, no logarithms.
double brute_uniform_separation(const std::vector<cplx>& z) {
  double best = 1.0;
  for (std::size_t m = 0; m < z.size(); ++m) {
    double prod = 1.0;
    for (std::size_t n = 0; n < z.size(); ++n)
      if (n != m) prod *= std::abs(z[m] - z[n]) / std::abs(1.0 - std::conj(z[m]) * z[n]);
    best = std::min(best, prod);
  }
  return best;
}

}  // namespace

TEST(Separation, TwoPoints) {
  const DiskSequence seq({DiskPoint(0.5), DiskPoint(-0.5)});
  EXPECT_NEAR(separation_constant(seq), 0.8, 1e-15);
  EXPECT_NEAR(uniform_separation_constant(seq), 0.8, 1e-15);
}

TEST(Separation, DuplicatesGiveZero) {
  const DiskSequence seq({DiskPoint(0.3, 0.1), DiskPoint(0.3, 0.1), DiskPoint(-0.2)});
  EXPECT_EQ(separation_constant(seq), 0.0);
  EXPECT_EQ(uniform_separation_constant(seq), 0.0);
  const auto rep = separation_report(seq);
  EXPECT_TRUE(rep.has_duplicates);
  EXPECT_EQ(rep.separation, 0.0);
  EXPECT_EQ(rep.uniform_separation, 0.0);
}

TEST(Separation, SingletonConvention) {
  const DiskSequence seq({DiskPoint(0.2)});
  EXPECT_EQ(separation_constant(seq), 1.0);
  EXPECT_TRUE(separation_report(seq).singleton);
}

TEST(Separation, RadialTailApproachesOneThird) {
  const auto seq = gen_radial(0.5, 20);
  const double sep = separation_constant(seq);
  EXPECT_NEAR(sep, brute_separation(seq.values()), 1e-15);
  EXPECT_NEAR(sep, 1.0 / 3.0, 1e-5);
  EXPECT_GE(sep, 1.0 / 3.0 - 1e-12);
}

TEST(Separation, RadialUniformSeparationMatchesDirectProduct) {
  const auto seq = gen_radial(0.5, 15);
  const double d = uniform_separation_constant(seq);
  EXPECT_GT(d, 0.0);
  EXPECT_NEAR(d, brute_uniform_separation(seq.values()), 1e-12 * d);
  EXPECT_LE(d, separation_constant(seq));
}

TEST(Separation, RadialLowerBound) {
  for (double q : {0.2, 0.3, 0.5, 0.7, 0.9}) {
    const auto seq = gen_radial(q, 12);
    EXPECT_GE(separation_constant(seq), (1 - q) / (1 + q) - 1e-6) << q;
  }
}

TEST(Separation, MobiusInvariance) {
  const auto seq = gen_random_separated(12, 0.3, 0.95, 5);
  const DiskPoint c(0.4, -0.7);
  const auto moved = apply_mobius(seq, c);
  EXPECT_NEAR(separation_constant(moved), separation_constant(seq), 1e-10);
  EXPECT_NEAR(uniform_separation_constant(moved), uniform_separation_constant(seq), 1e-10);
}

TEST(Separation, ReportAgreesWithSingleConstants) {
  const auto seq = gen_stolz(6, 3);
  const auto rep = separation_report(seq);
  EXPECT_NEAR(rep.separation, separation_constant(seq), 1e-15);
  EXPECT_NEAR(rep.uniform_separation, uniform_separation_constant(seq), 1e-15);
  EXPECT_LE(rep.uniform_separation, rep.separation);
  const auto [i, j] = rep.closest_pair;
  EXPECT_NEAR(pseudo_hyperbolic(seq[i], seq[j]), rep.separation, 1e-15);
}

TEST(BlaschkeSum, Examples) {
  EXPECT_EQ(blaschke_sum(DiskSequence({DiskPoint(0.0)})), 1.0);
  EXPECT_NEAR(blaschke_sum(DiskSequence({DiskPoint(0.5), DiskPoint(0.0, 0.5)})), 1.0, 1e-15);
  for (int n : {1, 5, 20})
    EXPECT_NEAR(blaschke_sum(gen_radial(0.5, n)), 1.0 - std::ldexp(1.0, -n), 1e-15);
}

TEST(Generators, Radial) {
  const auto seq = gen_radial(0.5, 3);
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq[0].value(), cplx(0.5));
  EXPECT_EQ(seq[1].value(), cplx(0.75));
  EXPECT_EQ(seq[2].value(), cplx(0.875));
  const auto one = gen_radial(0.9, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].value().real(), 0.1, 1e-15);
  EXPECT_THROW(gen_radial(1.0, 3), Error);
  EXPECT_THROW(gen_radial(0.5, 0), Error);
}

TEST(Generators, ClusteredCountsAndPlacement) {
  const auto one = gen_clustered(0.5, 0.9, 1);
  ASSERT_EQ(one.size(), 2u);
  for (const auto& p : one.points) EXPECT_NEAR(p.abs(), 0.5, 1e-15);
  const auto seq = gen_clustered(0.5, 0.9, 6);
  std::size_t expected = 0;
  for (int k = 1; k <= 6; ++k) expected += static_cast<std::size_t>(std::ceil(std::pow(2.0, 0.9 * k)));
  EXPECT_EQ(seq.size(), expected);
  for (const auto& p : seq.points) {
    const int k = point_level(p.value());
    const double theta = std::arg(p.value());
    EXPECT_GE(theta, 0.0);
    EXPECT_LT(theta, 2.0 * kPi * std::ldexp(1.0, -k));
  }
}

TEST(Generators, ClusteredRejectsGrowthBelowTarget) {
  EXPECT_THROW(gen_clustered(0.5, 0.3, 10), Error);
  EXPECT_THROW(gen_clustered(0.5, 0.9, 31), Error);
}

TEST(Generators, BwyCandidateCounts) {
  const auto one = gen_bwy_candidate(0.5, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].abs(), 0.5, 1e-15);
  BwyCalibration cal;
  cal.log_power = 0.5;
  cal.arc_exponent = 0.0;
  const auto seq = gen_bwy_candidate(0.5, 8, cal);
  std::size_t expected = 0;
  for (int k = 1; k <= 8; ++k)
    expected += static_cast<std::size_t>(std::max(1.0, std::ceil(std::pow(2.0, 0.5 * (k - 1)) * std::sqrt(k) - 1e-12)));
  EXPECT_EQ(seq.size(), expected);
}

TEST(Generators, PerturbedRadialIsSeeded) {
  const auto a = gen_perturbed_radial(0.5, 10, 0.2, 42);
  const auto b = gen_perturbed_radial(0.5, 10, 0.2, 42);
  const auto c = gen_perturbed_radial(0.5, 10, 0.2, 43);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].value(), b[i].value());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].value() != c[i].value();
  EXPECT_TRUE(differs);
}

TEST(Generators, RandomSeparatedRespectsMinimum) {
  const auto seq = gen_random_separated(10, 0.4, 0.9, 3);
  EXPECT_EQ(seq.size(), 10u);
  EXPECT_GE(separation_constant(seq), 0.4);
  for (const auto& p : seq.points) EXPECT_LE(p.abs(), 0.9);
}

TEST(Levels, DyadicCircles) {
  EXPECT_EQ(point_level(0.0), 0);
  EXPECT_EQ(point_level(0.5), 1);
  EXPECT_EQ(point_level(0.6), 2);
  EXPECT_EQ(point_level(0.75), 2);
  EXPECT_EQ(point_level(1.0 - std::ldexp(1.0, -12)), 12);
  const auto seq = gen_radial(0.5, 8);
  EXPECT_EQ(max_level(seq), 8);
  EXPECT_EQ(truncate_to_level(seq, 3).size(), 3u);
}

TEST(Transforms, RotationPreservesModuli) {
  const auto seq = gen_radial(0.5, 4);
  const auto rot = apply_rotation(seq, Rotation(1.0));
  for (std::size_t i = 0; i < seq.size(); ++i) EXPECT_NEAR(rot[i].abs(), seq[i].abs(), 1e-15);
}
