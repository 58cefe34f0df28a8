#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "diskinterp/classify.hpp"

using namespace diskinterp;

namespace {

GrowthFit run(const std::vector<double>& v, ClassifierConfig cfg = {}) {
  std::vector<int> lv(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) lv[i] = static_cast<int>(i);
  return classify_growth(lv, v, cfg);
}

}  // namespace

TEST(Classifier, ConstantSequenceIsBounded) {
  const auto fit = run(std::vector<double>(10, 2.5));
  EXPECT_EQ(fit.classification, Classification::Bounded);
  EXPECT_NEAR(fit.slope, 0.0, 1e-15);
}

TEST(Classifier, ExponentialGrowthIsDivergent) {
  std::vector<double> v;
  for (int k = 0; k < 10; ++k) v.push_back(std::exp(0.4 * k));
  const auto fit = run(v);
  EXPECT_EQ(fit.classification, Classification::Divergent);
  EXPECT_NEAR(fit.slope, 0.4, 1e-12);
}

TEST(Classifier, IntermediateSlopeIsInconclusive) {
  std::vector<double> v;
  // slope 0.05 with oscillating increments, so no steady-growth shortcut
  for (int k = 0; k < 10; ++k) v.push_back(std::exp(0.05 * k) * (1.0 + 0.03 * (k % 2 == 0 ? 1 : -1)));
  const auto fit = run(v);
  EXPECT_TRUE(std::isnan(fit.increment_ratio));
  EXPECT_EQ(fit.classification, Classification::Inconclusive);
}

TEST(Classifier, SteadyExponentialGrowthIsDivergent) {
  std::vector<double> v;
  for (int k = 0; k < 10; ++k) v.push_back(std::exp(0.05 * k));
  EXPECT_EQ(run(v).classification, Classification::Divergent);
}

TEST(Classifier, AllZerosIsBounded) {
  EXPECT_EQ(run({0, 0, 0, 0}).classification, Classification::Bounded);
}

TEST(Classifier, SingleValueIsInconclusive) {
  EXPECT_EQ(run({1.0}).classification, Classification::Inconclusive);
}

TEST(Classifier, GeometricTailIsExtrapolated) {
  // partial sums of 1 - 0.8^k: raw slope over the tail is still large, the
  // limit is finite.
  std::vector<double> v;
  double sum = 0.0;
  for (int k = 0; k < 12; ++k) {
    sum += std::pow(0.8, k);
    v.push_back(sum);
  }
  const auto fit = run(v);
  EXPECT_TRUE(fit.extrapolated);
  EXPECT_NEAR(fit.tail_ratio, 0.8, 1e-9);
  EXPECT_EQ(fit.classification, Classification::Bounded);
  ClassifierConfig off;
  off.extrapolate = false;
  const auto raw = run(v, off);
  EXPECT_FALSE(raw.extrapolated);
  EXPECT_GT(raw.slope, fit.slope);
}

TEST(Classifier, LinearGrowthIsNotExtrapolated) {
  std::vector<double> v;
  for (int k = 1; k <= 12; ++k) v.push_back(std::pow(2.0, 0.3 * k));
  const auto fit = run(v);
  EXPECT_FALSE(fit.extrapolated);
  EXPECT_EQ(fit.classification, Classification::Divergent);
}

TEST(Classifier, StringRoundTrip) {
  for (auto c : {Classification::Bounded, Classification::Divergent, Classification::Inconclusive})
    EXPECT_EQ(classification_from_string(to_string(c)), c);
  EXPECT_THROW(classification_from_string("MAYBE"), Error);
}

TEST(Classifier, LogarithmicGrowthIsDivergent) {
  // sup |log(1/(1-z))| on circles 1 - 2^-j grows like j log 2
  std::vector<double> v;
  for (int j = 0; j <= 20; ++j) v.push_back(j * std::log(2.0));
  const auto fit = run(v);
  EXPECT_NEAR(fit.increment_ratio, 1.0, 1e-12);
  EXPECT_EQ(fit.classification, Classification::Divergent);
  EXPECT_LT(fit.raw_slope, 0.1);
}
