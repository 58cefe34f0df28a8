#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "diskinterp/mobius.hpp"
#include "diskinterp/sequences.hpp"

namespace diskinterp {

/// Finite set of sample points standing in for "sup over a in the disk".
struct SamplingNet {
  std::vector<cplx> points;
  std::vector<int> levels;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  void add(cplx a) {
    points.push_back(a);
    levels.push_back(point_level(a));
  }
};

/// Net construction policy shared by the Carleson tests and the seminorm
/// suprema. The net is {0}, the atoms, radial rays through every atom at
/// radii 1 - 2^-j, and quasi-uniform rings with min(density 2^j, max_ring)
/// points at radius 1 - 2^-j, for j = 1 .. deepest atom level + extra_levels.
struct NetConfig {
  int density = 8;
  std::size_t max_ring = 4096;
  int extra_levels = 1;
  bool include_atoms = true;
  bool include_rays = true;
  bool include_rings = true;
  /// Ray directions are binned per level into arcs of normalized width
  /// 2^-j / ray_bins_per_arc before rays are cast (0 disables binning).
  int ray_bins_per_arc = 0;
};

namespace detail {

inline void dedupe_net(SamplingNet& net) {
  std::vector<std::size_t> order(net.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto key = [&](std::size_t i) { return std::pair(net.points[i].real(), net.points[i].imag()); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  SamplingNet out;
  for (std::size_t idx : order) {
    if (!out.empty() && std::abs(out.points.back() - net.points[idx]) < 1e-15) continue;
    out.points.push_back(net.points[idx]);
    out.levels.push_back(net.levels[idx]);
  }
  net = std::move(out);
}

}  // namespace detail

inline SamplingNet make_net(const DiskSequence& seq, const NetConfig& cfg = {}) {
  SamplingNet net;
  net.add(cplx(0.0, 0.0));
  const int depth = std::max(1, max_level(seq) + cfg.extra_levels);

  if (cfg.include_atoms)
    for (const auto& p : seq.points) net.add(p.value());

  if (cfg.include_rays) {
    std::vector<double> dirs;
    for (const auto& p : seq.points) {
      if (p.abs() == 0.0) continue;
      double theta = std::arg(p.value());
      if (cfg.ray_bins_per_arc > 0) {
        const int lev = std::max(1, point_level(p.value()));
        const double bin = 2.0 * kPi * std::ldexp(1.0, -lev) / cfg.ray_bins_per_arc;
        theta = (std::floor(theta / bin) + 0.5) * bin;
      }
      dirs.push_back(theta);
    }
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               dirs.end());
    for (double theta : dirs)
      for (int j = 1; j <= depth; ++j) net.add(std::polar(1.0 - std::ldexp(1.0, -j), theta));
  }

  if (cfg.include_rings) {
    for (int j = 1; j <= depth; ++j) {
      const double want = static_cast<double>(cfg.density) * std::ldexp(1.0, j);
      const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::min(want, static_cast<double>(cfg.max_ring))));
      const double r = 1.0 - std::ldexp(1.0, -j);
      for (std::size_t i = 0; i < n; ++i)
        net.add(std::polar(r, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
    }
  }
  detail::dedupe_net(net);
  return net;
}

/// Points 1 - 2^-j along the positive real axis, j = 0..levels (j = 0 is the origin).
inline SamplingNet radial_net(int levels, double theta = 0.0) {
  SamplingNet net;
  net.add(cplx(0.0, 0.0));
  for (int j = 1; j <= levels; ++j) net.add(std::polar(1.0 - std::ldexp(1.0, -j), theta));
  return net;
}

}  // namespace diskinterp
