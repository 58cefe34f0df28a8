#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include "diskinterp/error.hpp"

namespace diskinterp {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Points closer than this to the unit circle are accepted but flagged:
/// weights like (1-|z|^2)^(p-2) amplify roundoff there.
inline constexpr double kBoundaryFlagMargin = 1e-14;

/// A point of the open unit disk. Construction with |z| >= 1 throws.
class DiskPoint {
 public:
  DiskPoint() = default;
  DiskPoint(double re, double im = 0.0) : DiskPoint(cplx(re, im)) {}
  DiskPoint(cplx z) : z_(z) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) >= 1.0) {
      std::ostringstream os;
      os.precision(17);
      os << "disk point must satisfy |z| < 1, got " << z;
      fail(ErrorCode::InvalidArgument, os.str());
    }
  }

  cplx value() const noexcept { return z_; }
  operator cplx() const noexcept { return z_; }  // NOLINT(google-explicit-constructor)
  double abs() const noexcept { return std::abs(z_); }
  bool near_boundary() const noexcept { return std::abs(z_) > 1.0 - kBoundaryFlagMargin; }

  friend bool operator==(const DiskPoint& a, const DiskPoint& b) { return a.z_ == b.z_; }

 private:
  cplx z_{0.0, 0.0};
};

/// Rotation z -> e^{i theta} z of the disk.
class Rotation {
 public:
  explicit Rotation(double theta) : theta_(theta) {
    require(std::isfinite(theta), "rotation angle must be finite");
  }
  double theta() const noexcept { return theta_; }
  cplx factor() const { return std::polar(1.0, theta_); }
  cplx operator()(cplx z) const { return factor() * z; }
  DiskPoint operator()(const DiskPoint& z) const { return DiskPoint(factor() * z.value()); }

 private:
  double theta_;
};

/// 1 - |z|^2 without forming |z|^2 first when z is close to the circle.
inline double one_minus_abs2(cplx z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

/// sigma_a(z) = (a - z) / (1 - conj(a) z), the involution swapping 0 and a.
inline cplx mobius_transform(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

inline DiskPoint mobius_transform(const DiskPoint& a, const DiskPoint& z) {
  cplx w = mobius_transform(a.value(), z.value());
  // |sigma_a(z)| < 1 holds exactly; guard the last ulp so the type invariant survives.
  if (std::abs(w) >= 1.0) w *= std::nextafter(1.0, 0.0) / std::abs(w);
  return DiskPoint(w);
}

/// rho(a, z) = |a - z| / |1 - conj(a) z|.
inline double pseudo_hyperbolic(cplx a, cplx z) {
  return std::abs(a - z) / std::abs(1.0 - std::conj(a) * z);
}

inline double pseudo_hyperbolic(const DiskPoint& a, const DiskPoint& z) {
  return pseudo_hyperbolic(a.value(), z.value());
}

/// (1-|a|^2)(1-|z|^2)/|1-conj(a) z|^2, which equals 1 - |sigma_a(z)|^2.
inline double invariant_weight(cplx a, cplx z) {
  return one_minus_abs2(a) * one_minus_abs2(z) / std::norm(1.0 - std::conj(a) * z);
}

inline double invariant_weight(const DiskPoint& a, const DiskPoint& z) {
  return invariant_weight(a.value(), z.value());
}

/// Hyperbolic distance 0.5*log((1+rho)/(1-rho)).
inline double hyperbolic_distance(cplx a, cplx z) {
  const double rho = pseudo_hyperbolic(a, z);
  return 0.5 * std::log((1.0 + rho) / (1.0 - rho));
}

}  // namespace diskinterp
