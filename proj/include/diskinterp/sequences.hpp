#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "diskinterp/error.hpp"
#include "diskinterp/mobius.hpp"
#include "diskinterp/rng.hpp"

namespace diskinterp {

/// Two points closer than this in the pseudo-hyperbolic metric are duplicates.
inline constexpr double kDuplicateTolerance = 1e-13;

/// Hard caps on generated families (desk scale).
inline constexpr int kMaxGeneratorLevels = 30;
inline constexpr std::size_t kMaxGeneratedPoints = std::size_t{1} << 20;

/// Finite ordered list of disk points.
struct DiskSequence {
  std::vector<DiskPoint> points;
  std::string label;

  DiskSequence() = default;
  DiskSequence(std::vector<DiskPoint> pts, std::string lbl = {})
      : points(std::move(pts)), label(std::move(lbl)) {}

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  const DiskPoint& operator[](std::size_t i) const { return points[i]; }

  std::vector<cplx> values() const {
    std::vector<cplx> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.value());
    return out;
  }
};

/// Dyadic level of a point: the smallest integer l >= 0 with 1-|z| >= 2^-l.
/// Points on the circle 1-|z| = 2^-k sit exactly on level k.
inline int point_level(cplx z) {
  const double u = 1.0 - std::abs(z);
  if (u >= 1.0) return 0;
  const double d = -std::log2(u);
  return std::max(0, static_cast<int>(std::ceil(d - 1e-9)));
}

inline int max_level(const DiskSequence& seq) {
  int m = 0;
  for (const auto& p : seq.points) m = std::max(m, point_level(p.value()));
  return m;
}

/// Keep the points whose level is at most `level`, preserving order.
inline DiskSequence truncate_to_level(const DiskSequence& seq, int level) {
  DiskSequence out;
  out.label = seq.label;
  for (const auto& p : seq.points)
    if (point_level(p.value()) <= level) out.points.push_back(p);
  return out;
}

inline DiskSequence apply_mobius(const DiskSequence& seq, const DiskPoint& c) {
  DiskSequence out;
  out.label = seq.label;
  out.points.reserve(seq.size());
  for (const auto& p : seq.points) out.points.push_back(mobius_transform(c, p));
  return out;
}

inline DiskSequence apply_rotation(const DiskSequence& seq, const Rotation& rot) {
  DiskSequence out;
  out.label = seq.label;
  for (const auto& p : seq.points) out.points.push_back(rot(p));
  return out;
}

struct SeparationReport {
  double separation = 1.0;
  double uniform_separation = 1.0;
  double blaschke_sum = 0.0;
  bool singleton = false;
  bool has_duplicates = false;
  /// Index pair attaining the separation constant.
  std::pair<std::size_t, std::size_t> closest_pair{0, 0};
  /// Index attaining the uniform separation constant.
  std::size_t weakest_index = 0;
};

/// min over unordered pairs of rho(z_n, z_k). Singletons report 1.
inline double separation_constant(const DiskSequence& seq) {
  const auto z = seq.values();
  double best = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) best = std::min(best, pseudo_hyperbolic(z[i], z[j]));
  return best;
}

/// inf_m prod_{n != m} rho(z_m, z_n), accumulated as a sum of logs.
/// Any duplicate pair makes the constant exactly 0.
inline double uniform_separation_constant(const DiskSequence& seq) {
  const auto z = seq.values();
  if (z.size() < 2) return 1.0;
  double worst_log = 0.0;
  for (std::size_t m = 0; m < z.size(); ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n) {
      if (n == m) continue;
      const double rho = pseudo_hyperbolic(z[m], z[n]);
      if (rho < kDuplicateTolerance) return 0.0;
      acc += std::log(rho);
    }
    worst_log = std::min(worst_log, acc);
  }
  return std::exp(worst_log);
}

/// sum of (1 - |z_n|), accumulated with Neumaier compensation.
inline double blaschke_sum(const DiskSequence& seq) {
  double sum = 0.0, comp = 0.0;
  for (const auto& p : seq.points) {
    const double x = 1.0 - p.abs();
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

inline SeparationReport separation_report(const DiskSequence& seq) {
  SeparationReport rep;
  rep.blaschke_sum = blaschke_sum(seq);
  const auto z = seq.values();
  if (z.size() < 2) {
    rep.singleton = true;
    return rep;
  }
  double worst_log = 0.0;
  bool zero_product = false;
  for (std::size_t m = 0; m < z.size(); ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n) {
      if (n == m) continue;
      const double rho = pseudo_hyperbolic(z[m], z[n]);
      if (n > m && rho < rep.separation) {
        rep.separation = rho;
        rep.closest_pair = {m, n};
      }
      if (rho < kDuplicateTolerance) {
        rep.has_duplicates = true;
        zero_product = true;
        continue;
      }
      acc += std::log(rho);
    }
    if (!zero_product && acc < worst_log) {
      worst_log = acc;
      rep.weakest_index = m;
    }
  }
  rep.uniform_separation = zero_product ? 0.0 : std::exp(worst_log);
  if (rep.has_duplicates) rep.separation = 0.0;
  return rep;
}

/// z_n = 1 - q^n, n = 1..count, on the positive real axis.
inline DiskSequence gen_radial(double q, int count) {
  require(q > 0.0 && q < 1.0, "gen_radial: q must lie in (0,1)");
  require(count >= 1, "gen_radial: count must be at least 1");
  DiskSequence seq;
  seq.label = "radial(q=" + std::to_string(q) + ",n=" + std::to_string(count) + ")";
  for (int n = 1; n <= count; ++n) {
    const double x = 1.0 - std::pow(q, n);
    if (x >= 1.0) fail(ErrorCode::InvalidArgument, "gen_radial: 1 - q^n rounds to 1 at n=" + std::to_string(n));
    seq.points.emplace_back(x);
  }
  return seq;
}

namespace detail {

/// `count` points at radius 1-2^-level, equally spaced in the arc
/// [0, 2*pi*arc) at the midpoints of `count` equal sub-arcs.
inline void place_on_arc(DiskSequence& seq, int level, std::size_t count, double arc) {
  const double r = 1.0 - std::ldexp(1.0, -level);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = 2.0 * kPi * arc * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    seq.points.emplace_back(std::polar(r, theta));
  }
}

inline std::size_t checked_count(double c) {
  if (!(c < static_cast<double>(kMaxGeneratedPoints)))
    fail(ErrorCode::InvalidArgument, "generator point cap exceeded");
  return static_cast<std::size_t>(std::ceil(c));
}

}  // namespace detail

/// Level k = 1..levels holds ceil(2^(growth k)) points at radius 1 - 2^-k in
/// an arc of normalized length 2^-k starting at angle 0.
inline DiskSequence gen_clustered(double s_target, double growth, int levels) {
  require(s_target > 0.0 && s_target < 1.0, "gen_clustered: s_target must lie in (0,1)");
  require(growth > s_target, "gen_clustered: growth must exceed s_target");
  require(levels >= 1 && levels <= kMaxGeneratorLevels, "gen_clustered: levels out of range [1, 30]");
  DiskSequence seq;
  seq.label = "clustered(s=" + std::to_string(s_target) + ",growth=" + std::to_string(growth) +
              ",levels=" + std::to_string(levels) + ")";
  std::size_t total = 0;
  for (int k = 1; k <= levels; ++k) {
    const std::size_t n = detail::checked_count(std::exp2(growth * k) - 1e-12);
    total += n;
    if (total > kMaxGeneratedPoints) fail(ErrorCode::InvalidArgument, "gen_clustered: point cap exceeded");
    detail::place_on_arc(seq, k, n, std::ldexp(1.0, -k));
  }
  return seq;
}

/// Parameters of the candidate family for the log-tempered counterexample.
/// Level k holds ceil(scale * 2^(s (k-1)) * k^log_power) points at radius
/// 1 - 2^-k, spread over an arc of normalized length 2^(-arc_exponent k)
/// (arc_exponent = 0 spreads them over the whole circle).
struct BwyCalibration {
  double scale = 1.0;
  double log_power = -2.0;
  double arc_exponent = 1.0;
  std::string name = "default";
};

inline DiskSequence gen_bwy_candidate(double s, int levels, const BwyCalibration& cal = {}) {
  require(s > 0.0 && s < 1.0, "gen_bwy_candidate: s must lie in (0,1)");
  require(levels >= 1 && levels <= kMaxGeneratorLevels, "gen_bwy_candidate: levels out of range [1, 30]");
  require(cal.scale > 0.0 && cal.arc_exponent >= 0.0, "gen_bwy_candidate: invalid calibration");
  DiskSequence seq;
  seq.label = "bwy_candidate(s=" + std::to_string(s) + ",levels=" + std::to_string(levels) +
              ",calibration=" + cal.name + ")";
  std::size_t total = 0;
  for (int k = 1; k <= levels; ++k) {
    const double c = cal.scale * std::exp2(s * (k - 1)) * std::pow(static_cast<double>(k), cal.log_power);
    const std::size_t n = std::max<std::size_t>(1, detail::checked_count(c - 1e-12));
    total += n;
    if (total > kMaxGeneratedPoints) fail(ErrorCode::InvalidArgument, "gen_bwy_candidate: point cap exceeded");
    detail::place_on_arc(seq, k, n, std::exp2(-cal.arc_exponent * k));
  }
  return seq;
}

/// Points inside a Stolz angle at 1: for each level k, `per_level` points at
/// radius 1 - 2^-k with angular offsets spread over +-aperture * 2^-k.
inline DiskSequence gen_stolz(int levels, int per_level = 3, double aperture = 1.0) {
  require(levels >= 1 && levels <= kMaxGeneratorLevels, "gen_stolz: levels out of range [1, 30]");
  require(per_level >= 1 && aperture > 0.0, "gen_stolz: invalid shape");
  DiskSequence seq;
  seq.label = "stolz(levels=" + std::to_string(levels) + ",per_level=" + std::to_string(per_level) + ")";
  for (int k = 1; k <= levels; ++k) {
    const double u = std::ldexp(1.0, -k);
    for (int i = 0; i < per_level; ++i) {
      const double frac = per_level == 1 ? 0.0 : -1.0 + 2.0 * i / (per_level - 1);
      seq.points.emplace_back(std::polar(1.0 - u, aperture * u * frac));
    }
  }
  return seq;
}

/// Radial family 1 - q^n with seeded multiplicative jitter on 1-|z| and a
/// small angular offset, both of relative size `jitter`.
inline DiskSequence gen_perturbed_radial(double q, int count, double jitter, std::uint64_t seed) {
  require(q > 0.0 && q < 1.0, "gen_perturbed_radial: q must lie in (0,1)");
  require(count >= 1, "gen_perturbed_radial: count must be at least 1");
  require(jitter >= 0.0 && jitter < 0.5, "gen_perturbed_radial: jitter must lie in [0, 0.5)");
  Rng rng(seed);
  DiskSequence seq;
  seq.label = "perturbed_radial(q=" + std::to_string(q) + ",n=" + std::to_string(count) + ",seed=" +
              std::to_string(seed) + ")";
  for (int n = 1; n <= count; ++n) {
    const double u = std::pow(q, n) * (1.0 + jitter * uniform(rng, -1.0, 1.0));
    const double theta = jitter * u * uniform(rng, -1.0, 1.0);
    seq.points.emplace_back(std::polar(1.0 - u, theta));
  }
  return seq;
}

/// Rejection-sampled node set with pairwise rho >= min_rho inside |z| <= max_radius.
inline DiskSequence gen_random_separated(std::size_t count, double min_rho, double max_radius, std::uint64_t seed) {
  require(min_rho > 0.0 && min_rho < 1.0, "gen_random_separated: min_rho must lie in (0,1)");
  require(max_radius > 0.0 && max_radius < 1.0, "gen_random_separated: max_radius must lie in (0,1)");
  Rng rng(seed);
  DiskSequence seq;
  seq.label = "random_separated(n=" + std::to_string(count) + ",seed=" + std::to_string(seed) + ")";
  std::size_t attempts = 0;
  while (seq.size() < count) {
    if (++attempts > 1000000) fail(ErrorCode::InvalidArgument, "gen_random_separated: could not place points");
    // area-uniform radius inside the hyperbolic disk of Euclidean radius max_radius
    const double r = max_radius * std::sqrt(uniform01(rng));
    const cplx z = std::polar(r, uniform(rng, 0.0, 2.0 * kPi));
    bool ok = true;
    for (const auto& p : seq.points)
      if (pseudo_hyperbolic(p.value(), z) < min_rho) {
        ok = false;
        break;
      }
    if (ok) seq.points.emplace_back(z);
  }
  return seq;
}

}  // namespace diskinterp
