#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "diskinterp/error.hpp"
#include "diskinterp/mobius.hpp"
#include "diskinterp/sequences.hpp"

namespace diskinterp {

/// Adaptive polar quadrature for integrals against the normalized area
/// measure dA = r dr dtheta / pi.
struct QuadratureConfig {
  /// Radial shells 2^-j <= 1-|z| <= 2^(1-j), j = 1..L, then one tail cell
  /// layer down to the circle. L is raised automatically to sit at least
  /// `feature_margin` levels below the deepest singular or focus point.
  int boundary_levels = 20;
  int feature_margin = 8;
  int max_levels = 50;
  /// Angular cells per shell before grading and refinement.
  int angular_base = 16;
  /// 0 treats flagged singular points like ordinary points. d >= 1 splits
  /// the cells around each point d-1 times and then integrates the final
  /// cells in singularity-adapted triangle coordinates.
  int zero_refinement_depth = 3;
  /// Angular width of initial cells is at most grading * max(distance to a
  /// focus point, depth of the shell, depth of the focus point).
  double grading = 0.5;
  double rel_tol = 1e-6;
  double abs_tol = 1e-300;
  std::size_t max_cells = 400000;
  /// When only the L versus L-1 comparison fails, L is raised by 4 and the
  /// integral recomputed, at most this many times.
  int depth_retries = 3;
  /// Extra splits spent on cells straddling the edge of an integration mask.
  int mask_refinement_depth = 6;
};

/// Known structure of an integrand: where it is singular or sharply peaked,
/// and how it behaves at the unit circle.
struct SingularStructure {
  /// Interior points p with integrand ~ |z - p|^(-point_exponent), point_exponent < 2.
  std::vector<cplx> points;
  double point_exponent = 0.0;
  /// Integrand ~ (1-|z|)^boundary_exponent near the circle; must exceed -1.
  double boundary_exponent = 0.0;
  /// Points (interior or on the circle) where the integrand varies on the
  /// scale of their distance to the circle.
  std::vector<cplx> focus;
};

struct QuadPoint {
  cplx z;
  /// 1 - |z| and 1 - |z|^2, computed from the radial parameter without cancellation.
  double u = 1.0;
  double one_minus_r2 = 1.0;
};

/// Integral of one final quadrature cell, placed at the cell centre.
struct CellAtom {
  cplx z;
  double mass = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  std::string verdict = "INCONCLUSIVE";
  int levels = 0;
  /// Cumulative integral over 1-|z| >= 2^-j, j = 1..levels.
  std::vector<double> per_level;
  /// Estimate with the tail starting one level earlier.
  double previous_level_value = 0.0;
  /// |value - previous_level_value| / |value|.
  double level_change = 0.0;
  bool cells_ok = false;
  std::size_t cells = 0;
  std::string note;
};

namespace detail {

struct GaussRule {
  std::vector<double> x, w;
};

// Nodes and weights on [0, 1].
inline const GaussRule& gauss(int n) {
  static const GaussRule g4 = [] {
    const double a = 0.3399810435848562648, b = 0.8611363115940525752;
    const double wa = 0.6521451548625461426, wb = 0.3478548451374538574;
    GaussRule r;
    for (double v : {-b, -a, a, b}) r.x.push_back(0.5 * (v + 1.0));
    for (double v : {wb, wa, wa, wb}) r.w.push_back(0.5 * v);
    return r;
  }();
  static const GaussRule g5 = [] {
    const double a = 0.5384693101056830910, b = 0.9061798459386639928;
    const double w0 = 0.5688888888888888889, wa = 0.4786286704993664680, wb = 0.2369268850561890875;
    GaussRule r;
    for (double v : {-b, -a, 0.0, a, b}) r.x.push_back(0.5 * (v + 1.0));
    for (double v : {wb, wa, w0, wa, wb}) r.w.push_back(0.5 * v);
    return r;
  }();
  return n == 4 ? g4 : g5;
}

enum class CellKind : unsigned char { Shell, Tail, Core, Duffy };

/// A parameter rectangle [a0,a1] x [b0,b1] together with its map to (u, theta).
struct Cell {
  CellKind kind = CellKind::Shell;
  double a0 = 0, a1 = 0, b0 = 0, b1 = 0;
  // Duffy apex and the two far corners, in (u, theta).
  double pu = 0, pt = 0, au = 0, at = 0, bu = 0, bt = 0;
  double value = 0, error = 0;
  int depth = 0;
};

struct MapParams {
  double tail_u = 0.0;
  double tail_beta = 1.0;
  double core_r = 0.5;
  double core_gamma = 1.0;
  double duffy_gamma = 1.0;
};

struct Mapped {
  double u, theta, jac;
};

inline Mapped map_point(const Cell& c, const MapParams& mp, double a, double b) {
  switch (c.kind) {
    case CellKind::Shell:
      return {a, b, 1.0};
    case CellKind::Tail: {
      const double u = mp.tail_u * std::pow(a, mp.tail_beta);
      return {u, b, mp.tail_u * mp.tail_beta * std::pow(a, mp.tail_beta - 1.0)};
    }
    case CellKind::Core: {
      const double r = mp.core_r * std::pow(a, mp.core_gamma);
      return {1.0 - r, b, mp.core_r * mp.core_gamma * std::pow(a, mp.core_gamma - 1.0)};
    }
    case CellKind::Duffy: {
      const double xi = std::pow(a, mp.duffy_gamma);
      const double du = (c.au - c.pu) + b * (c.bu - c.au);
      const double dt = (c.at - c.pt) + b * (c.bt - c.at);
      const double det = (c.au - c.pu) * (c.bt - c.at) - (c.at - c.pt) * (c.bu - c.au);
      const double jac = mp.duffy_gamma * std::pow(a, mp.duffy_gamma - 1.0) * xi * det;
      return {c.pu + xi * du, c.pt + xi * dt, jac};
    }
  }
  return {a, b, 1.0};
}

inline QuadPoint make_point(double u, double theta) {
  QuadPoint q;
  q.u = u;
  q.one_minus_r2 = u * (2.0 - u);
  q.z = std::polar(1.0 - u, theta);
  return q;
}

/// (u, theta) rectangle covered by a non-Duffy cell.
inline std::array<double, 4> uv_box(const Cell& c, const MapParams& mp) {
  const Mapped lo = map_point(c, mp, c.a0, c.b0), hi = map_point(c, mp, c.a1, c.b1);
  return {std::min(lo.u, hi.u), std::max(lo.u, hi.u), c.b0, c.b1};
}

inline double wrap_near(double theta, double center) {
  const double two_pi = 2.0 * kPi;
  return theta + two_pi * std::round((center - theta) / two_pi);
}

inline std::array<Cell, 4> split(const Cell& c) {
  const double am = 0.5 * (c.a0 + c.a1), bm = 0.5 * (c.b0 + c.b1);
  std::array<Cell, 4> out{c, c, c, c};
  out[0].a1 = am, out[0].b1 = bm;
  out[1].a0 = am, out[1].b1 = bm;
  out[2].a1 = am, out[2].b0 = bm;
  out[3].a0 = am, out[3].b0 = bm;
  for (auto& k : out) {
    k.depth = c.depth + 1;
    k.value = k.error = 0.0;
  }
  return out;
}

}  // namespace detail

namespace detail {

template <typename Integrand, typename Mask>
QuadratureResult integrate_at_depth(Integrand& integrand, Mask& mask, const QuadratureConfig& cfg,
                                    const SingularStructure& sing, std::vector<CellAtom>* atoms, int extra_levels) {

  int deepest = 0;
  for (const cplx p : sing.points) deepest = std::max(deepest, point_level(p));
  for (const cplx f : sing.focus)
    if (std::abs(f) < 1.0) deepest = std::max(deepest, point_level(f));
  const int L =
      std::min(cfg.max_levels, std::max(cfg.boundary_levels, deepest + cfg.feature_margin) + extra_levels);

  MapParams mp;
  mp.tail_u = std::ldexp(1.0, -L);
  mp.tail_beta = 1.0 / (1.0 + sing.boundary_exponent);
  const bool singular = cfg.zero_refinement_depth > 0 && sing.point_exponent > 0.0;
  mp.duffy_gamma = singular ? 1.0 / (2.0 - sing.point_exponent) : 1.0;
  bool origin_singular = false;
  for (const cplx p : sing.points) origin_singular |= singular && std::abs(p) < 1e-12;
  mp.core_gamma = origin_singular ? mp.duffy_gamma : 1.0;

  // Angular breakpoints for a shell of depth `u_shell`.
  struct Focus {
    double theta, depth;
  };
  std::vector<Focus> foci;
  auto add_focus = [&](cplx f) {
    if (std::abs(f) < 1e-12) return;
    foci.push_back({std::arg(f), 1.0 - std::min(1.0, std::abs(f))});
  };
  for (const cplx p : sing.points) add_focus(p);
  for (const cplx f : sing.focus) add_focus(f);
  const double max_width = 2.0 * kPi / cfg.angular_base;
  auto breakpoints = [&](double u_shell) {
    std::vector<double> bp{0.0};
    double theta = 0.0;
    while (theta < 2.0 * kPi) {
      double w = max_width;
      for (const auto& f : foci) {
        double d = std::abs(wrap_near(f.theta, theta) - theta);
        w = std::min(w, cfg.grading * std::max({d, u_shell, f.depth}));
      }
      w = std::max(w, 1e-15);
      theta = std::min(2.0 * kPi, theta + w);
      if (2.0 * kPi - theta < 0.25 * w) theta = 2.0 * kPi;
      bp.push_back(theta);
    }
    return bp;
  };

  std::vector<Cell> cells;
  for (int j = 1; j <= L; ++j) {
    const double lo = std::ldexp(1.0, -j), hi = std::ldexp(1.0, 1 - j);
    const auto bp = breakpoints(lo);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      Cell c;
      if (j == 1 && origin_singular) {
        c.kind = CellKind::Core;
        c.a0 = 0.0, c.a1 = 1.0;
      } else {
        c.kind = CellKind::Shell;
        c.a0 = lo, c.a1 = hi;
      }
      c.b0 = bp[i], c.b1 = bp[i + 1];
      cells.push_back(c);
    }
  }
  {
    const auto bp = breakpoints(mp.tail_u);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      Cell c;
      c.kind = CellKind::Tail;
      c.a0 = 0.0, c.a1 = 1.0, c.b0 = bp[i], c.b1 = bp[i + 1];
      cells.push_back(c);
    }
  }

  // Graded splitting and triangle coordinates around singular points.
  if (singular) {
    for (const cplx p : sing.points) {
      if (std::abs(p) < 1e-12) continue;
      const double pu = 1.0 - std::abs(p), pth = std::arg(p);
      auto contains = [&](const Cell& c) {
        if (c.kind == CellKind::Duffy || c.kind == CellKind::Tail) return false;
        const auto box = uv_box(c, mp);
        const double tol_u = 1e-12 * std::max(pu, 1e-300);
        const double th = wrap_near(pth, 0.5 * (box[2] + box[3]));
        return pu >= box[0] - tol_u && pu <= box[1] + tol_u && th >= box[2] - 1e-13 && th <= box[3] + 1e-13;
      };
      for (int round = 1; round < cfg.zero_refinement_depth; ++round) {
        std::vector<Cell> next;
        next.reserve(cells.size() + 8);
        for (const auto& c : cells) {
          if (contains(c)) {
            for (const auto& k : split(c)) next.push_back(k);
          } else {
            next.push_back(c);
          }
        }
        cells.swap(next);
      }
      std::vector<Cell> next;
      next.reserve(cells.size() + 8);
      for (const auto& c : cells) {
        if (!contains(c)) {
          next.push_back(c);
          continue;
        }
        const auto box = uv_box(c, mp);
        const double th = wrap_near(pth, 0.5 * (box[2] + box[3]));
        const std::array<std::pair<double, double>, 4> corner{
            {{box[0], box[2]}, {box[1], box[2]}, {box[1], box[3]}, {box[0], box[3]}}};
        for (int e = 0; e < 4; ++e) {
          Cell t;
          t.kind = CellKind::Duffy;
          t.a0 = 0.0, t.a1 = 1.0, t.b0 = 0.0, t.b1 = 1.0;
          t.pu = pu, t.pt = th;
          t.au = corner[e].first, t.at = corner[e].second;
          t.bu = corner[(e + 1) % 4].first, t.bt = corner[(e + 1) % 4].second;
          t.depth = c.depth;
          const double det = (t.au - t.pu) * (t.bt - t.at) - (t.at - t.pt) * (t.bu - t.au);
          if (det != 0.0) next.push_back(t);
        }
      }
      cells.swap(next);
    }
  }

  auto centre_in_mask = [&](const Cell& c, double a, double b) {
    const Mapped m = map_point(c, mp, a, b);
    return static_cast<bool>(mask(make_point(m.u, m.theta)));
  };

  auto evaluate = [&](Cell& c) {
    const double am = 0.5 * (c.a0 + c.a1), bm = 0.5 * (c.b0 + c.b1);
    const bool inside = centre_in_mask(c, am, bm);
    double q[2] = {0.0, 0.0};
    double full5 = 0.0;
    int idx = 0;
    for (int n : {5, 4}) {
      const auto& g = gauss(n);
      double sum = 0.0;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double a = c.a0 + (c.a1 - c.a0) * g.x[i];
        for (std::size_t k = 0; k < g.x.size(); ++k) {
          const double b = c.b0 + (c.b1 - c.b0) * g.x[k];
          const Mapped m = map_point(c, mp, a, b);
          if (m.jac == 0.0) continue;
          const QuadPoint qp = make_point(m.u, m.theta);
          const double val = integrand(qp);
          sum += g.w[i] * g.w[k] * val * m.jac * (1.0 - m.u) / kPi;
        }
      }
      q[idx++] = sum * (c.a1 - c.a0) * (c.b1 - c.b0);
    }
    full5 = q[0];
    c.value = inside ? q[0] : 0.0;
    c.error = inside ? std::abs(q[0] - q[1]) : 0.0;
    if (c.depth < cfg.mask_refinement_depth) {
      bool mixed = false;
      for (double fa : {0.25, 0.75})
        for (double fb : {0.25, 0.75})
          mixed |= centre_in_mask(c, c.a0 + fa * (c.a1 - c.a0), c.b0 + fb * (c.b1 - c.b0)) != inside;
      if (mixed) c.error += std::abs(full5);
    }
  };

  struct ByError {
    const std::vector<Cell>* cells;
    bool operator()(std::size_t x, std::size_t y) const {
      const auto& a = (*cells)[x];
      const auto& b = (*cells)[y];
      if (a.error != b.error) return a.error < b.error;
      return x > y;
    }
  };

  auto run_adaptive = [&](std::vector<Cell>& pool) {
    for (auto& c : pool) evaluate(c);
    std::priority_queue<std::size_t, std::vector<std::size_t>, ByError> heap(ByError{&pool});
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      heap.push(i);
      total += pool[i].value;
      err += pool[i].error;
    }
    std::vector<bool> dead(pool.size(), false);
    std::size_t live = pool.size();
    while (!heap.empty() && err > std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol) && live < cfg.max_cells) {
      const std::size_t top = heap.top();
      heap.pop();
      if (pool[top].error <= 0.0) break;
      const Cell parent = pool[top];
      dead[top] = true;
      total -= parent.value;
      err -= parent.error;
      for (auto k : split(parent)) {
        evaluate(k);
        total += k.value;
        err += k.error;
        pool.push_back(k);
        dead.push_back(false);
        heap.push(pool.size() - 1);
      }
      live += 3;
    }
    std::vector<Cell> kept;
    kept.reserve(live);
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!dead[i]) kept.push_back(pool[i]);
    pool.swap(kept);
    double v = 0.0, e = 0.0;
    for (const auto& c : pool) {
      v += c.value;
      e += c.error;
    }
    return std::pair(v, e);
  };

  QuadratureResult res;
  const auto [value, error] = run_adaptive(cells);
  res.value = value;
  res.error_estimate = error;
  res.levels = L;
  res.cells = cells.size();
  if (atoms) {
    atoms->clear();
    for (const auto& c : cells) {
      if (c.value == 0.0) continue;
      const Mapped m = map_point(c, mp, 0.5 * (c.a0 + c.a1), 0.5 * (c.b0 + c.b1));
      atoms->push_back({make_point(m.u, m.theta).z, c.value});
    }
  }

  // Cumulative shell sums; Duffy cells are attributed by their apex.
  res.per_level.assign(static_cast<std::size_t>(L), 0.0);
  for (const auto& c : cells) {
    double u_ref;
    if (c.kind == CellKind::Tail) continue;
    if (c.kind == CellKind::Duffy) {
      u_ref = c.pu;
    } else {
      const auto box = uv_box(c, mp);
      u_ref = 0.5 * (box[0] + box[1]);
    }
    const int j = std::clamp(static_cast<int>(std::ceil(-std::log2(u_ref) - 1e-12)), 1, L);
    res.per_level[static_cast<std::size_t>(j - 1)] += c.value;
  }
  for (std::size_t j = 1; j < res.per_level.size(); ++j) res.per_level[j] += res.per_level[j - 1];

  // Tail started one level earlier, for the level-(L-1) estimate.
  {
    MapParams saved = mp;
    mp.tail_u = std::ldexp(1.0, 1 - L);
    std::vector<Cell> tail;
    const auto bp = breakpoints(mp.tail_u);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      Cell c;
      c.kind = CellKind::Tail;
      c.a0 = 0.0, c.a1 = 1.0, c.b0 = bp[i], c.b1 = bp[i + 1];
      tail.push_back(c);
    }
    const double prev_tail = run_adaptive(tail).first;
    mp = saved;
    res.previous_level_value = (L >= 2 ? res.per_level[static_cast<std::size_t>(L - 2)] : 0.0) + prev_tail;
  }

  const double scale = std::max(std::abs(res.value), cfg.abs_tol);
  const bool adaptive_ok = res.error_estimate <= std::max(cfg.rel_tol * std::abs(res.value), cfg.abs_tol);
  const bool levels_ok = std::abs(res.value - res.previous_level_value) <= cfg.rel_tol * scale;
  res.level_change = std::abs(res.value - res.previous_level_value) / scale;
  res.cells_ok = adaptive_ok;
  res.converged = adaptive_ok && levels_ok;
  res.verdict = res.converged ? "CONVERGED" : "INCONCLUSIVE";
  if (!adaptive_ok) res.note = "cell budget exhausted before the error estimate met rel_tol";
  else if (!levels_ok) res.note = "estimates at levels L and L-1 differ by more than rel_tol";
  return res;
}

}  // namespace detail

/// integrand(const QuadPoint&) -> double. mask(const QuadPoint&) -> bool,
/// evaluated at cell centres, restricts the integral to a region.
template <typename Integrand, typename Mask>
QuadratureResult integrate_disk_masked(Integrand&& integrand, Mask&& mask, const QuadratureConfig& cfg,
                                       const SingularStructure& sing = {}, std::vector<CellAtom>* atoms = nullptr) {
  require(cfg.rel_tol > 0.0, "quadrature: rel_tol must be positive");
  require(cfg.angular_base >= 1, "quadrature: angular_base must be positive");
  require(cfg.boundary_levels >= 2, "quadrature: at least two boundary levels are needed");
  require(sing.boundary_exponent > -1.0, "quadrature: boundary exponent must exceed -1");
  require(sing.point_exponent < 2.0, "quadrature: point singularities must be integrable (exponent < 2)");
  QuadratureResult res;
  for (int attempt = 0;; ++attempt) {
    res = detail::integrate_at_depth(integrand, mask, cfg, sing, atoms, 4 * attempt);
    if (res.converged || !res.cells_ok || attempt >= cfg.depth_retries || res.levels >= cfg.max_levels) break;
  }
  return res;
}

template <typename Integrand>
QuadratureResult integrate_disk(Integrand&& integrand, const QuadratureConfig& cfg,
                                const SingularStructure& sing = {}, std::vector<CellAtom>* atoms = nullptr) {
  return integrate_disk_masked(std::forward<Integrand>(integrand), [](const QuadPoint&) { return true; }, cfg, sing,
                               atoms);
}

}  // namespace diskinterp
