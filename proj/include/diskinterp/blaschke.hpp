#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "diskinterp/carleson.hpp"
#include "diskinterp/error.hpp"
#include "diskinterp/mobius.hpp"
#include "diskinterp/net.hpp"
#include "diskinterp/sequences.hpp"

namespace diskinterp {

/// Finite Blaschke product with zeros repeated by multiplicity. A zero at the
/// origin contributes the factor z; any other zero a contributes
/// (|a|/a) (a - z) / (1 - conj(a) z).
class BlaschkeProduct {
 public:
  static constexpr std::size_t kLogEvalThreshold = 64;

  BlaschkeProduct() = default;
  explicit BlaschkeProduct(std::vector<DiskPoint> zeros) : zeros_(std::move(zeros)) {}
  explicit BlaschkeProduct(const DiskSequence& seq) : zeros_(seq.points) {}

  const std::vector<DiskPoint>& zeros() const noexcept { return zeros_; }
  std::size_t degree() const noexcept { return zeros_.size(); }
  double zero_blaschke_sum() const { return blaschke_sum(DiskSequence(zeros_)); }

  static cplx factor(cplx a, cplx z) {
    if (a == cplx(0.0, 0.0)) return z;
    return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
  }

  static cplx factor_derivative(cplx a, cplx z) {
    if (a == cplx(0.0, 0.0)) return {1.0, 0.0};
    const cplx d = 1.0 - std::conj(a) * z;
    return (std::abs(a) / a) * (std::norm(a) - 1.0) / (d * d);
  }

  /// Valid for |z| <= 1 (boundary points included).
  cplx eval(cplx z) const {
    if (zeros_.size() <= kLogEvalThreshold) {
      cplx prod(1.0, 0.0);
      for (const auto& a : zeros_) prod *= factor(a.value(), z);
      return prod;
    }
    double log_mod = 0.0;
    double phase = 0.0;
    for (const auto& a : zeros_) {
      const cplx f = factor(a.value(), z);
      if (f == cplx(0.0, 0.0)) return {0.0, 0.0};
      log_mod += std::log(std::abs(f));
      phase += std::arg(f);
    }
    return std::polar(std::exp(log_mod), phase);
  }

  /// Product rule through prefix/suffix products; never divides by B.
  cplx derivative(cplx z) const {
    const std::size_t n = zeros_.size();
    if (n == 0) return {0.0, 0.0};
    std::vector<cplx> f(n), suffix(n + 1);
    for (std::size_t k = 0; k < n; ++k) f[k] = factor(zeros_[k].value(), z);
    suffix[n] = 1.0;
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * f[k];
    cplx prefix(1.0, 0.0), sum(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      sum += prefix * factor_derivative(zeros_[k].value(), z) * suffix[k + 1];
      prefix *= f[k];
    }
    return sum;
  }

  /// B'(z)/B(z) = sum_n (|z_n|^2 - 1) / ((z_n - z)(1 - conj(z_n) z)).
  /// Throws NearZero when z is within rho <= 1e-13 of a zero.
  cplx log_derivative(cplx z) const {
    cplx sum(0.0, 0.0);
    for (std::size_t k = 0; k < zeros_.size(); ++k) {
      const cplx a = zeros_[k].value();
      if (pseudo_hyperbolic(a, z) <= kDuplicateTolerance)
        fail(ErrorCode::NearZero, "log_derivative: evaluation point coincides with zero index " + std::to_string(k));
      sum += (std::norm(a) - 1.0) / ((a - z) * (1.0 - std::conj(a) * z));
    }
    return sum;
  }

  /// Zeros moved to sigma_c(zeros); up to a unimodular constant this is B o sigma_c.
  BlaschkeProduct composed_zeros(cplx c) const {
    std::vector<DiskPoint> out;
    out.reserve(zeros_.size());
    for (const auto& a : zeros_) out.emplace_back(mobius_transform(c, a.value()));
    return BlaschkeProduct(std::move(out));
  }

 private:
  std::vector<DiskPoint> zeros_;
};

/// Admissible range of the inner-function membership criterion:
/// 0 < s < 1 and p > max(s, 1 - s).
inline void require_inner_range(double p, double s) {
  if (!(s > 0.0 && s < 1.0 && p > std::max(s, 1.0 - s)))
    fail(ErrorCode::InvalidArgument, "inner membership needs 0 < s < 1 and p > max(s, 1-s); got p=" +
                                         std::to_string(p) + ", s=" + std::to_string(s));
}

/// B lies in F(p, p-2, s) iff sup_a sum_k (1 - |sigma_a(z_k)|^2)^s < infinity.
inline CarlesonReport inner_membership_test(const BlaschkeProduct& b, double p, double s, const SamplingNet& net,
                                            const CarlesonConfig& cfg = {}) {
  require_inner_range(p, s);
  auto rep = kernel_constant(weights_from_sequence(DiskSequence(b.zeros()), s), s, s, net, cfg);
  rep.test = "inner_membership";
  switch (rep.classification) {
    case Classification::Bounded:
      rep.note = "B in F(p,p-2,s): zero counting sum bounded";
      break;
    case Classification::Divergent:
      rep.note = "B not in F(p,p-2,s): zero counting sum grows";
      break;
    case Classification::Inconclusive:
      rep.note = "membership undecided at this truncation depth";
      break;
  }
  return rep;
}

}  // namespace diskinterp
