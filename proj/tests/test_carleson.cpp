#include <gtest/gtest.h>

#include <cmath>

#include "diskinterp/carleson.hpp"

using namespace diskinterp;

namespace {

// Direct scan of every dyadic box; independent of the incremental sweep.
double brute_box(const PointMassMeasure& mu, double s, int generations) {
  double best = 0.0;
  for (int g = 0; g <= generations; ++g) {
    const double len = std::ldexp(1.0, -g);
    const long count = 1L << g;
    for (long j = 0; j < count; ++j) {
      double mass = 0.0;
      for (const auto& a : mu.atoms()) {
        const cplx z = a.point.value();
        double t = std::arg(z) / (2 * kPi);
        if (t < 0) t += 1;
        const bool in_arc = t >= j * len && t < (j + 1) * len;
        // points generated on the circle 1 - |I| must land inside despite roundoff in |z|
        if (in_arc && 1.0 - std::abs(z) <= len * (1 + 1e-12)) mass += a.weight;
      }
      best = std::max(best, mass / std::pow(len, s));
    }
  }
  return best;
}

}  // namespace

TEST(Weights, Examples) {
  const auto w0 = weights_from_sequence(DiskSequence({DiskPoint(0.0)}), 0.5);
  EXPECT_EQ(w0.atoms()[0].weight, 1.0);
  const auto w1 = weights_from_sequence(DiskSequence({DiskPoint(0.5)}), 1.0);
  EXPECT_NEAR(w1.atoms()[0].weight, 0.75, 1e-15);
  const auto w = weights_from_sequence(gen_radial(0.5, 3), 0.5);
  EXPECT_NEAR(w.atoms()[0].weight, std::sqrt(1 - 0.25), 1e-15);
  EXPECT_NEAR(w.atoms()[1].weight, std::sqrt(1 - 0.5625), 1e-15);
  EXPECT_NEAR(w.atoms()[2].weight, std::sqrt(1 - 0.765625), 1e-15);
  EXPECT_NEAR(w.atoms()[0].weight, 0.8660254037844386, 1e-15);
}

TEST(Measure, RejectsNegativeWeights) {
  EXPECT_THROW(PointMassMeasure({Atom{DiskPoint(0.1), -1.0}}), Error);
}

TEST(BoxConstant, SingleAtom) {
  const PointMassMeasure mu({Atom{DiskPoint(0.5), std::sqrt(0.75)}});
  const auto rep = box_constant(mu, 0.5, 6);
  EXPECT_NEAR(rep.constant_estimate, std::sqrt(1.5), 1e-14);
  EXPECT_NE(rep.witness.find("generation 1"), std::string::npos);
}

TEST(BoxConstant, EmptyMeasureIsZero) {
  const auto rep = box_constant(PointMassMeasure{}, 0.5, 6);
  EXPECT_EQ(rep.constant_estimate, 0.0);
  EXPECT_EQ(rep.classification, Classification::Bounded);
}

TEST(BoxConstant, MatchesBruteForceOnRandomMeasures) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto seq = gen_random_separated(25, 0.2, 0.995, seed);
    const auto mu = weights_from_sequence(seq, 0.6);
    EXPECT_NEAR(box_constant(mu, 0.6, 10).constant_estimate, brute_box(mu, 0.6, 10), 1e-12) << seed;
  }
  const auto mu = weights_from_sequence(gen_clustered(0.5, 0.9, 6), 0.5);
  EXPECT_NEAR(box_constant(mu, 0.5, 8).constant_estimate, brute_box(mu, 0.5, 8), 1e-12);
}

TEST(BoxConstant, RadialFamilyIsBounded) {
  const auto rep = box_constant(weights_from_sequence(gen_radial(0.5, 20), 0.5), 0.5, 24);
  EXPECT_EQ(rep.classification, Classification::Bounded);
  // Oracle: the box of length 2^-g over arg 0 holds atoms n >= g, total
  // sum_{n>=g} (1-(1-2^-n)^2)^(1/2); its ratio tends to sqrt(2)/(1-2^-1/2)
  // from below.
  double best = 0.0;
  for (int g = 0; g <= 20; ++g) {
    double m = 0.0;
    for (int n = std::max(g, 1); n <= 20; ++n) m += std::sqrt(1 - std::pow(1 - std::ldexp(1.0, -n), 2));
    best = std::max(best, m / std::pow(2.0, -0.5 * g));
  }
  EXPECT_NEAR(rep.constant_estimate, best, 1e-12);
}

TEST(BoxConstant, ClusteredFamilyDiverges) {
  const auto rep = box_constant(weights_from_sequence(gen_clustered(0.5, 0.9, 10), 0.5), 0.5, 24);
  EXPECT_EQ(rep.classification, Classification::Divergent);
  EXPECT_GT(rep.growth_slope, 0.1);
}

TEST(BoxConstant, ScalingAndMonotonicity) {
  const auto mu = weights_from_sequence(gen_stolz(6, 3), 0.5);
  const double base = box_constant(mu, 0.5, 10).constant_estimate;
  EXPECT_NEAR(box_constant(mu.scaled(3.0), 0.5, 10).constant_estimate, 3.0 * base, 1e-12 * base);
  auto more = mu;
  more.add(DiskPoint(0.0, 0.9), 0.4);
  EXPECT_GE(box_constant(more, 0.5, 10).constant_estimate, base);
}

TEST(KernelConstant, OriginAtom) {
  const PointMassMeasure mu({Atom{DiskPoint(0.0), 1.0}});
  SamplingNet net;
  net.add(0.0);
  EXPECT_NEAR(kernel_constant(mu, 0.5, 0.5, net).constant_estimate, 1.0, 1e-15);
}

TEST(KernelConstant, GarnettIdentityPerPoint) {
  const auto seq = gen_stolz(5, 3);
  const auto mu = weights_from_sequence(seq, 0.5);
  const auto net = make_net(seq);
  double best = 0.0;
  for (const cplx a : net.points) {
    const double k = kernel_sum_at(mu, 0.5, 0.5, a), g = sigma_sum_at(seq, 0.5, a);
    EXPECT_NEAR(k, g, 1e-10);
    best = std::max(best, g);
  }
  EXPECT_NEAR(kernel_constant(mu, 0.5, 0.5, net).constant_estimate, best, 1e-10);
}

TEST(KernelConstant, AgreesWithBoxOnFamilies) {
  for (const auto& seq : {gen_radial(0.5, 20), gen_clustered(0.5, 0.9, 10)}) {
    const auto mu = weights_from_sequence(seq, 0.5);
    const auto box = box_constant(mu, 0.5, 24);
    const auto ker = kernel_constant(mu, 0.5, 0.5, make_net(seq));
    EXPECT_EQ(box.classification, ker.classification) << seq.label;
  }
  const auto ker = kernel_constant(weights_from_sequence(gen_clustered(0.5, 0.9, 10), 0.5), 0.5, 0.5,
                                   make_net(gen_clustered(0.5, 0.9, 10)));
  EXPECT_EQ(ker.classification, Classification::Divergent);
}

TEST(KernelConstant, ScalingIsExact) {
  const auto seq = gen_radial(0.6, 10);
  const auto mu = weights_from_sequence(seq, 0.5);
  const auto net = make_net(seq);
  const double base = kernel_constant(mu, 0.5, 1.0, net).constant_estimate;
  EXPECT_NEAR(kernel_constant(mu.scaled(2.5), 0.5, 1.0, net).constant_estimate, 2.5 * base, 1e-13 * base);
}

TEST(KernelConstant, LevelsAreTruncations) {
  const auto seq = gen_radial(0.5, 6);
  const auto mu = weights_from_sequence(seq, 0.5);
  const auto net = make_net(seq);
  const auto rep = kernel_constant(mu, 0.5, 0.5, net);
  // level 0 holds no atom and is dropped
  ASSERT_EQ(rep.levels, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const auto part = truncate_to_level(seq, rep.levels[i]);
    double best = 0.0;
    for (const cplx a : net.points) best = std::max(best, sigma_sum_at(part, 0.5, a));
    EXPECT_NEAR(rep.constants[i], best, 1e-12) << rep.levels[i];
  }
}

TEST(BpsRatio, SingleAtomAtOrigin) {
  const PointMassMeasure mu({Atom{DiskPoint(0.0), 1.0}});
  const auto rep = bps_carleson_ratio(mu, 0.5, radial_net(12));
  EXPECT_NEAR(rep.constant_estimate, 1.0, 1e-15);
  EXPECT_EQ(rep.classification, Classification::Bounded);
}

TEST(BpsRatio, EmptyMeasure) {
  EXPECT_EQ(bps_carleson_ratio(PointMassMeasure{}, 0.5, radial_net(5)).constant_estimate, 0.0);
}

TEST(BpsRatio, RadialFamilyBounded) {
  const auto seq = gen_radial(0.5, 25);
  const auto rep = bps_carleson_ratio(weights_from_sequence(seq, 0.5), 0.5, make_net(seq));
  EXPECT_EQ(rep.classification, Classification::Bounded);
  double direct = 0.0;
  for (const auto& p : seq.points) {
    const cplx z = p.value();
    double sum = 0.0;
    for (const auto& q : seq.points) sum += std::sqrt(1 - std::norm(q.value())) / std::norm(1.0 - std::conj(q.value()) * z);
    direct = std::max(direct, std::pow(1 - std::norm(z), 1.5) * sum);
  }
  EXPECT_LE(direct, rep.constant_estimate + 1e-12);
}

TEST(BpsRatio, RejectsOutOfRange) {
  EXPECT_THROW(bps_carleson_ratio(PointMassMeasure{}, 1.5, radial_net(3)), Error);
}
