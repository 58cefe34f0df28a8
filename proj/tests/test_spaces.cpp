#include <gtest/gtest.h>

#include <cmath>

#include "diskinterp/spaces.hpp"

using namespace diskinterp;

namespace {

// int (1-|w|^2)^t / |1 - conj(a) w|^(2 lambda) dA(w) by its power series in |a|^2
double kernel_series(double abs_a, double lambda, double t) {
  double sum = 0.0;
  const double x = abs_a * abs_a;
  for (int n = 0; n < 200000; ++n) {
    const double log_c = std::lgamma(n + lambda) - std::lgamma(n + 1.0) - std::lgamma(lambda);
    const double log_b = std::lgamma(n + 1.0) + std::lgamma(t + 1.0) - std::lgamma(n + t + 2.0);
    if (n > 0 && x == 0.0) break;
    const double term = std::exp(2.0 * log_c + log_b + (n == 0 ? 0.0 : n * std::log(x)));
    sum += term;
    if (n > 10 && term < 1e-16 * sum) break;
  }
  return sum;
}

QuadratureConfig tol(double r) {
  QuadratureConfig q;
  q.rel_tol = r;
  return q;
}

cplx finite_difference(const AnalyticFunction& f, cplx z) {
  const double h = 1e-6;
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

}  // namespace

TEST(Functions, DerivativesMatchFiniteDifferences) {
  const cplx z(0.3, -0.4);
  std::vector<AnalyticFunction> fs = {
      AnalyticFunction::monomial(3, cplx(0.5, 1.0)),
      AnalyticFunction::log_branch(),
      AnalyticFunction::blaschke(BlaschkeProduct(std::vector<DiskPoint>{cplx(0.5, 0.1), cplx(-0.2, 0.7)})),
      AnalyticFunction::test_fn_a(cplx(0.6, 0.3), 0.5, 2.0),
      AnalyticFunction::user_series({1.0, cplx(0.0, 2.0), -0.5, 0.25}),
      AnalyticFunction::log_branch().composed_with(cplx(0.2, 0.3)),
      AnalyticFunction::monomial(2).scaled(cplx(0.0, 3.0)),
  };
  for (const auto& f : fs) EXPECT_LT(std::abs(f.derivative(z) - finite_difference(f, z)), 1e-7) << f.description();
}

TEST(Functions, CompositionVanishesAtOrigin) {
  const auto g = AnalyticFunction::log_branch().composed_with(cplx(0.7, 0.1));
  EXPECT_LT(std::abs(g(0.0)), 1e-15);
}

TEST(Functions, LogBranchRejectsTheSlit) {
  const auto f = AnalyticFunction::log_branch();
  EXPECT_THROW(f(cplx(1.0, 0.0)), Error);
  EXPECT_THROW(f(cplx(2.0, 0.0)), Error);
  EXPECT_NO_THROW(f(cplx(0.999999, 0.0)));
}

TEST(Spaces, ParameterValidation) {
  EXPECT_THROW(require_bps({1.0, 0.0}), Error);
  EXPECT_THROW(require_bps({0.5, 0.4}), Error);
  EXPECT_NO_THROW(require_bps({0.5, 0.6}));
  EXPECT_THROW(bps_norm(AnalyticFunction::monomial(1), {0.5, 0.5}), Error);
}

TEST(Spaces, MonomialNormsMatchBeta) {
  // |f(0)| + (n^p B(p(n-1)/2 + 1, p-1+s))^(1/p) for f = z^n
  struct Case {
    int n;
    double p, s;
  };
  for (const Case c : {Case{2, 2.0, 1.0}, Case{1, 1.5, 0.5}, Case{3, 0.8, 0.7}, Case{4, 1.0, 1.0}}) {
    const auto rep = bps_norm(AnalyticFunction::monomial(c.n), {c.p, c.s}, tol(1e-8));
    const double integral = std::pow(c.n, c.p) * std::beta(c.p * (c.n - 1) / 2.0 + 1.0, c.p - 1.0 + c.s);
    EXPECT_TRUE(rep.quadrature.converged);
    EXPECT_NEAR(rep.integral, integral, 1e-6 * integral) << c.n << " " << c.p << " " << c.s;
    EXPECT_NEAR(rep.value, std::pow(integral, 1.0 / c.p), 1e-6);
  }
  EXPECT_NEAR(bps_norm(AnalyticFunction::monomial(2), {2.0, 1.0}, tol(1e-8)).value, std::sqrt(2.0 / 3.0), 1e-8);
}

TEST(Spaces, ConstantHasNormModulus) {
  EXPECT_DOUBLE_EQ(bps_norm(AnalyticFunction::constant(cplx(3.0, 4.0)), {1.0, 0.5}).value, 5.0);
}

TEST(Spaces, FppsIntegralAtOriginIsTheBesovIntegral) {
  const auto f = AnalyticFunction::monomial(2);
  const double p = 1.5, s = 0.6;
  const double e = p - 2.0 + s;
  const double exact = std::pow(2.0, p) * std::beta(p / 2.0 + 1.0, e + 1.0);
  EXPECT_NEAR(fpps_integral_at(f, {p, s}, 0.0, tol(1e-8)).value, exact, 1e-6 * exact);
}

TEST(Spaces, FppsIntegralIsMobiusInvariant) {
  // I_{f o sigma_b - f(b)}(a) = I_f(sigma_b(a))
  const auto f = AnalyticFunction::log_branch();
  const cplx b(0.4, 0.3), a(-0.2, 0.5);
  const SpaceParams sp{1.0, 0.5};
  const double lhs = fpps_integral_at(f.composed_with(b), sp, a, tol(1e-4)).value;
  const double rhs = fpps_integral_at(f, sp, mobius_transform(b, a), tol(1e-4)).value;
  EXPECT_NEAR(lhs, rhs, 2e-4 * rhs);
}

TEST(Spaces, TestFunctionNormsMatchSeries) {
  // p = 2: |f_a'|^2 (1-|z|^2)^s integrates to s^2 |a|^2 (1-|a|^2)^s K(|a|, s+1, s)
  const double p = 2.0, s = 0.5;
  const std::vector<DiskPoint> as = {cplx(0.0), cplx(0.5, 0.0), cplx(0.0, 0.9), std::polar(0.99, 2.0)};
  const auto reps = test_function_norms(as, {p, s}, tol(1e-7));
  ASSERT_EQ(reps.size(), as.size());
  for (std::size_t i = 0; i < as.size(); ++i) {
    const double r = as[i].abs();
    const double integral = s * s * r * r * std::pow(1.0 - r * r, s) * kernel_series(r, s + 1.0, s);
    const double expected = std::pow(1.0 - r * r, s / p) + std::sqrt(integral);
    EXPECT_NEAR(reps[i].value, expected, 1e-5 * expected) << r;
  }
  EXPECT_NEAR(reps[0].value, 1.0, 1e-12);
}

TEST(Spaces, TestFunctionsNeedPGreaterThanOne) {
  EXPECT_THROW(test_function_norms({cplx(0.5)}, {1.0, 0.5}), Error);
}

TEST(Spaces, BlochSeminormOfASingleFactor) {
  const auto f = AnalyticFunction::blaschke(BlaschkeProduct(std::vector<DiskPoint>{cplx(0.5)}));
  const auto rep = bloch_seminorm(f, boundary_grid(f));
  EXPECT_NEAR(rep.value, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(rep.witness - cplx(0.5)), 0.0, 1e-12);
  EXPECT_EQ(rep.classification, Classification::Bounded);
}

TEST(Spaces, LogIsBlochButUnbounded) {
  const auto f = AnalyticFunction::log_branch();
  const auto bloch = bloch_seminorm(f, boundary_grid(f));
  EXPECT_EQ(bloch.classification, Classification::Bounded);
  // (1-r^2)/(1-r) = 1 + r on the positive axis
  EXPECT_NEAR(bloch.value, 2.0, 1e-3);
  EXPECT_LE(bloch.value, 2.0);
  EXPECT_EQ(hinf_norm(f, boundary_grid(f)).classification, Classification::Divergent);
}

TEST(Spaces, HinfOfBoundedFunctions) {
  const auto f = AnalyticFunction::monomial(3, 2.0);
  const auto rep = hinf_norm(f, boundary_grid(f));
  EXPECT_EQ(rep.classification, Classification::Bounded);
  EXPECT_LE(rep.value, 2.0);
  EXPECT_GT(rep.value, 1.99);
}

TEST(Spaces, LogFppsSeminormIsBounded) {
  SeminormOptions opt;
  opt.quadrature.rel_tol = 1e-3;
  opt.quadrature.boundary_levels = 16;
  const auto f = AnalyticFunction::log_branch();
  FunctionNetConfig nc;
  nc.levels = 8;
  const auto rep = fpps_seminorm(f, {1.0, 0.5}, function_net(f, nc), opt);
  EXPECT_EQ(rep.classification, Classification::Bounded);
  EXPECT_EQ(rep.nonconverged, 0u);
  EXPECT_EQ(rep.levels.size(), rep.per_level.size());
}

TEST(Spaces, ConstantSeminormIsZero) {
  const auto f = AnalyticFunction::constant(2.0);
  const auto rep = fpps_seminorm(f, {1.0, 0.5}, function_net(f, {}));
  EXPECT_EQ(rep.value, 0.0);
  EXPECT_EQ(rep.classification, Classification::Bounded);
}

TEST(Spaces, MultiplierVerdicts) {
  const SpaceParams sp{1.0, 0.5};
  EXPECT_EQ(multiplier_test(AnalyticFunction::constant(1.0), sp).verdict, "MEMBER");
  const auto b = multiplier_test(AnalyticFunction::blaschke(BlaschkeProduct(std::vector<DiskPoint>{cplx(0.5)})), sp);
  EXPECT_EQ(b.verdict, "MEMBER");
  EXPECT_LT(b.discretization_change, 0.1);
  EXPECT_EQ(multiplier_test(AnalyticFunction::log_branch(), sp).verdict, "NOT MEMBER");
}

TEST(Spaces, FunctionNetContainsFocusPoints) {
  const cplx a(0.3, 0.2);
  const auto f = AnalyticFunction::test_fn_a(a, 0.5, 2.0);
  const auto net = function_net(f, {});
  bool found = false;
  for (const cplx z : net.points) found |= std::abs(z - a) < 1e-15;
  EXPECT_TRUE(found);
}
