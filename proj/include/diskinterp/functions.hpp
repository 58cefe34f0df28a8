#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "diskinterp/blaschke.hpp"
#include "diskinterp/error.hpp"
#include "diskinterp/mobius.hpp"

namespace diskinterp {

enum class FunctionKind { Constant, Monomial, LogBranch, Blaschke, TestFnA, UserSeries, Composition, Scaled };

inline const char* to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::Constant: return "constant";
    case FunctionKind::Monomial: return "monomial";
    case FunctionKind::LogBranch: return "log_branch";
    case FunctionKind::Blaschke: return "blaschke";
    case FunctionKind::TestFnA: return "test_fn_a";
    case FunctionKind::UserSeries: return "user_series";
    case FunctionKind::Composition: return "composition";
    case FunctionKind::Scaled: return "scaled";
  }
  return "unknown";
}

/// Analytic function on the disk given by value and derivative evaluators,
/// plus the points where it is sharply structured (zeros of a Blaschke
/// product, boundary singularities, peak directions). Quadrature and
/// supremum nets are graded toward those points.
class AnalyticFunction {
 public:
  using Eval = std::function<cplx(cplx)>;

  AnalyticFunction(FunctionKind kind, std::string description, Eval value, Eval derivative,
                   std::vector<cplx> focus = {})
      : kind_(kind),
        description_(std::move(description)),
        value_(std::move(value)),
        derivative_(std::move(derivative)),
        focus_(std::move(focus)) {}

  FunctionKind kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  const std::vector<cplx>& focus() const noexcept { return focus_; }
  bool is_constant() const noexcept { return kind_ == FunctionKind::Constant; }

  cplx operator()(cplx z) const { return value_(z); }
  cplx value(cplx z) const { return value_(z); }
  cplx derivative(cplx z) const { return derivative_(z); }

  static AnalyticFunction constant(cplx c) {
    return {FunctionKind::Constant, "constant", [c](cplx) { return c; }, [](cplx) { return cplx(0.0); }};
  }

  /// c z^n.
  static AnalyticFunction monomial(int n, cplx c = 1.0) {
    require(n >= 0, "monomial degree must be nonnegative");
    return {FunctionKind::Monomial, "monomial(n=" + std::to_string(n) + ")",
            [n, c](cplx z) { return c * std::pow(z, n); },
            [n, c](cplx z) { return n == 0 ? cplx(0.0) : c * static_cast<double>(n) * std::pow(z, n - 1); }};
  }

  /// log(1/(1-z)) on the principal branch; the slit [1, inf) never meets the disk.
  static AnalyticFunction log_branch() {
    auto check = [](cplx z) {
      if (z.imag() == 0.0 && z.real() >= 1.0) fail(ErrorCode::InvalidArgument, "log(1/(1-z)) is undefined on [1, inf)");
    };
    return {FunctionKind::LogBranch, "log(1/(1-z))",
            [check](cplx z) {
              check(z);
              return -std::log(1.0 - z);
            },
            [check](cplx z) {
              check(z);
              return 1.0 / (1.0 - z);
            },
            {cplx(1.0, 0.0)}};
  }

  static AnalyticFunction blaschke(const BlaschkeProduct& b) {
    auto shared = std::make_shared<BlaschkeProduct>(b);
    std::vector<cplx> focus;
    for (const auto& a : b.zeros()) focus.push_back(a.value());
    return {FunctionKind::Blaschke, "blaschke(degree=" + std::to_string(b.degree()) + ")",
            [shared](cplx z) { return shared->eval(z); }, [shared](cplx z) { return shared->derivative(z); },
            std::move(focus)};
  }

  /// f_a(z) = (1-|a|^2)^(s/p) / (1 - conj(a) z)^(2s/p), principal power
  /// (Re(1 - conj(a) z) > 0 on the disk).
  static AnalyticFunction test_fn_a(cplx a, double s, double p) {
    require(std::abs(a) < 1.0, "test_fn_a: a must lie in the disk");
    require(p > 0.0 && s > 0.0, "test_fn_a: p and s must be positive");
    const double scale = std::pow(one_minus_abs2(a), s / p);
    const double e = 2.0 * s / p;
    std::vector<cplx> focus;
    if (std::abs(a) > 0.0) focus.push_back(a);
    return {FunctionKind::TestFnA, "test_fn_a",
            [=](cplx z) { return scale * std::pow(1.0 - std::conj(a) * z, -e); },
            [=](cplx z) { return scale * e * std::conj(a) * std::pow(1.0 - std::conj(a) * z, -e - 1.0); },
            std::move(focus)};
  }

  /// sum_k c_k z^k.
  static AnalyticFunction user_series(std::vector<cplx> coeffs) {
    require(!coeffs.empty(), "user_series: coefficient list is empty");
    auto c = std::make_shared<std::vector<cplx>>(std::move(coeffs));
    return {FunctionKind::UserSeries, "user_series(terms=" + std::to_string(c->size()) + ")",
            [c](cplx z) {
              cplx acc(0.0);
              for (std::size_t k = c->size(); k-- > 0;) acc = acc * z + (*c)[k];
              return acc;
            },
            [c](cplx z) {
              cplx acc(0.0);
              for (std::size_t k = c->size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * (*c)[k];
              return acc;
            }};
  }

  /// z -> f(sigma_b(z)) - f(sigma_b(0)).
  AnalyticFunction composed_with(cplx b) const {
    require(std::abs(b) < 1.0, "composition point must lie in the disk");
    const AnalyticFunction f = *this;
    const cplx f_b = f.value(b);
    std::vector<cplx> focus;
    for (const cplx q : focus_) focus.push_back(mobius_transform(b, q));
    if (std::abs(b) > 0.0) focus.push_back(b);
    return {FunctionKind::Composition, "(" + description_ + ") o sigma_b",
            [f, b, f_b](cplx z) { return f.value(mobius_transform(b, z)) - f_b; },
            [f, b](cplx z) {
              const cplx d = 1.0 - std::conj(b) * z;
              return f.derivative(mobius_transform(b, z)) * (std::norm(b) - 1.0) / (d * d);
            },
            std::move(focus)};
  }

  AnalyticFunction scaled(cplx lambda) const {
    const AnalyticFunction f = *this;
    return {kind_ == FunctionKind::Constant ? FunctionKind::Constant : FunctionKind::Scaled,
            "scaled(" + description_ + ")", [f, lambda](cplx z) { return lambda * f.value(z); },
            [f, lambda](cplx z) { return lambda * f.derivative(z); }, focus_};
  }

 private:
  FunctionKind kind_;
  std::string description_;
  Eval value_;
  Eval derivative_;
  std::vector<cplx> focus_;
};

}  // namespace diskinterp
