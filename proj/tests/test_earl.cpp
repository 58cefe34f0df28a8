#include <gtest/gtest.h>

#include <cmath>

#include "diskinterp/earl.hpp"
#include "diskinterp/rng.hpp"

using namespace diskinterp;

namespace {

InterpolationProblem random_problem(std::size_t n, std::uint64_t seed) {
  InterpolationProblem prob;
  prob.nodes = gen_random_separated(n, 0.6, 0.95, seed);
  Rng rng(seed + 1000);
  for (std::size_t i = 0; i < n; ++i) prob.values.push_back(std::polar(std::sqrt(uniform01(rng)), uniform(rng, 0.0, 2.0 * kPi)));
  return prob;
}

// scale * prod (|zeta|/zeta) (zeta - z)/(1 - conj(zeta) z), written out directly
cplx direct_eval(const EarlSolution& sol, cplx z) {
  cplx prod = sol.scale;
  for (const auto& p : sol.perturbed_zeros.points) {
    const cplx zeta = p.value();
    const cplx phase = std::abs(zeta) > 0.0 ? std::abs(zeta) / zeta : cplx(-1.0);
    prod *= phase * (zeta - z) / (1.0 - std::conj(zeta) * z);
  }
  return prod;
}

double brute_delta(const DiskSequence& s) {
  double d = 1.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    double prod = 1.0;
    for (std::size_t n = 0; n < s.size(); ++n)
      if (n != m) prod *= std::abs(s[m].value() - s[n].value()) / std::abs(1.0 - std::conj(s[m].value()) * s[n].value());
    d = std::min(d, prod);
  }
  return d;
}

}  // namespace

TEST(Earl, ZeroValuesReturnTheNodes) {
  auto prob = random_problem(5, 3);
  for (auto& v : prob.values) v = 0.0;
  const auto sol = earl_interpolate(prob);
  EXPECT_EQ(sol.status, EarlStatus::Converged);
  EXPECT_EQ(sol.iterations, 1);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(sol.perturbed_zeros[i].value(), prob.nodes[i].value());
  EXPECT_EQ(sol.max_residual, 0.0);
}

TEST(Earl, CertifiedAcrossSizes) {
  for (std::size_t n : {2u, 3u, 4u, 6u, 8u, 12u, 16u}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto prob = random_problem(n, seed * 17 + n);
      const auto sol = earl_interpolate(prob);
      ASSERT_EQ(sol.status, EarlStatus::Converged) << n << " " << seed << " " << sol.message;
      EXPECT_NEAR(sol.delta, brute_delta(prob.nodes), 1e-12);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_LE(std::abs(direct_eval(sol, prob.nodes[i]) - prob.values[i]), 1e-8);
        EXPECT_LE(pseudo_hyperbolic(prob.nodes[i], sol.perturbed_zeros[i]), sol.delta / 3.0 * (1 + 1e-12));
      }
      EXPECT_LE(sol.max_residual, 1e-8);
    }
  }
}

TEST(Earl, InterpolantIsBoundedByItsScale) {
  const auto prob = random_problem(6, 99);
  const auto sol = earl_interpolate(prob);
  ASSERT_EQ(sol.status, EarlStatus::Converged);
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const cplx z = std::polar(std::sqrt(uniform01(rng)) * 0.999999, uniform(rng, 0.0, 2.0 * kPi));
    EXPECT_LE(std::abs(sol.eval(z)), std::abs(sol.scale) * (1 + 1e-12));
  }
  EXPECT_NEAR(sol.amplification, std::abs(sol.scale) / prob.sup_value(), 1e-12);
}

TEST(Earl, RotationEquivariance) {
  const double theta = 0.7;
  const auto prob = random_problem(8, 11);
  InterpolationProblem rotated;
  const cplx e = std::polar(1.0, theta);
  const cplx eN = std::polar(1.0, theta * 8);
  for (std::size_t i = 0; i < 8; ++i) {
    rotated.nodes.points.push_back(e * prob.nodes[i].value());
    rotated.values.push_back(eN * prob.values[i]);
  }
  const auto a = earl_interpolate(prob);
  const auto b = earl_interpolate(rotated);
  ASSERT_EQ(a.status, EarlStatus::Converged);
  ASSERT_EQ(b.status, EarlStatus::Converged);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_LT(std::abs(e * a.perturbed_zeros[i].value() - b.perturbed_zeros[i].value()), 1e-10);
}

TEST(Earl, Rejections) {
  InterpolationProblem dup;
  dup.nodes.points = {cplx(0.2), cplx(0.2)};
  dup.values = {0.5, 0.1};
  try {
    earl_interpolate(dup);
    FAIL() << "duplicate nodes accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUniformlySeparated);
  }
  auto big = random_problem(17, 4);
  EXPECT_THROW(earl_interpolate(big), Error);
  auto mismatch = random_problem(3, 4);
  mismatch.values.pop_back();
  EXPECT_THROW(earl_interpolate(mismatch), Error);
}

TEST(Earl, ComparabilityRangesFollowFromTheRhoBound) {
  const auto prob = random_problem(8, 21);
  const auto sol = earl_interpolate(prob);
  ASSERT_EQ(sol.status, EarlStatus::Converged);
  std::vector<cplx> w;
  Rng rng(8);
  for (int i = 0; i < 200; ++i) w.push_back(std::polar(std::sqrt(uniform01(rng)), uniform(rng, 0.0, 2.0 * kPi)));
  const auto rep = verify_perturbation_comparabilities(prob.nodes, sol.perturbed_zeros, w);
  const double r = rep.max_rho;
  EXPECT_LE(r, 1.0 / 3.0);
  // 1-|sigma_z(zeta)|^2 = (1-|z|^2)(1-|zeta|^2)/|1-conj(z) zeta|^2 pins (1-|z|^2)/(1-|zeta|^2)
  // inside [(1-r)/(1+r), (1+r)/(1-r)]
  EXPECT_GE(rep.ratios[2].min, (1 - r) / (1 + r) - 1e-12);
  EXPECT_LE(rep.ratios[2].max, (1 + r) / (1 - r) + 1e-12);
  EXPECT_GE(rep.bracket, 1.0);
  EXPECT_TRUE(std::isfinite(rep.bracket));
}
