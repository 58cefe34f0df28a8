#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "diskinterp/carleson.hpp"
#include "diskinterp/classify.hpp"
#include "diskinterp/error.hpp"
#include "diskinterp/functions.hpp"
#include "diskinterp/net.hpp"
#include "diskinterp/parallel.hpp"
#include "diskinterp/quadrature.hpp"

namespace diskinterp {

/// Exponent bundle (p, s, t). Which constraints apply depends on the space.
struct SpaceParams {
  double p = 1.0;
  double s = 0.5;
  double t = std::numeric_limits<double>::quiet_NaN();
};

inline std::string params_text(const SpaceParams& sp) {
  return "p=" + std::to_string(sp.p) + ", s=" + std::to_string(sp.s);
}

/// B_p(s) needs p > 0 and s > 1 - p; for s <= 1 - p the defining integral
/// is finite only for constant functions.
inline void require_bps(const SpaceParams& sp) {
  if (!(sp.p > 0.0))
    fail(ErrorCode::InvalidArgument, "B_p(s) needs p > 0 (" + params_text(sp) + ")");
  if (!(sp.s > 1.0 - sp.p))
    fail(ErrorCode::InvalidArgument, "B_p(s) with s <= 1-p contains only constants: the integral is finite only "
                                     "if f is constant (" + params_text(sp) + ")");
}

inline void require_fpps(const SpaceParams& sp) {
  if (!(sp.p > 0.0 && sp.s > 0.0 && sp.p + sp.s > 1.0))
    fail(ErrorCode::InvalidArgument, "F(p,p-2,s) needs p > 0, s > 0 and p + s > 1 (" + params_text(sp) + ")");
}

/// Range of the interpolating-sequence equivalences: 0 < s < 1, max(s, 1-s) < p <= 1.
inline void require_interpolation_range(const SpaceParams& sp) {
  if (!(sp.s > 0.0 && sp.s < 1.0 && sp.p > std::max(sp.s, 1.0 - sp.s) && sp.p <= 1.0))
    fail(ErrorCode::InvalidArgument,
         "parameters must satisfy 0 < s < 1 and max(s, 1-s) < p <= 1 (" + params_text(sp) + ")");
}

/// Supremum nets for function-based quantities: {0}, rays toward every
/// focus direction of f at radii 1 - 2^-j, the interior focus points, and
/// rings of min(ring_density 2^j, max_ring) points, j = 1..levels.
struct FunctionNetConfig {
  int levels = 10;
  int ring_density = 4;
  std::size_t max_ring = 32;
};

inline SamplingNet function_net(const AnalyticFunction& f, const FunctionNetConfig& cfg = {}) {
  require(cfg.levels >= 1 && cfg.levels <= 50, "function net levels out of range [1, 50]");
  SamplingNet net;
  net.add(0.0);
  std::vector<double> dirs{0.0};
  for (const cplx q : f.focus()) {
    if (std::abs(q) > 0.0) dirs.push_back(std::arg(q));
    if (std::abs(q) < 1.0 && std::abs(q) > 0.0) net.add(q);
  }
  std::sort(dirs.begin(), dirs.end());
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  for (double th : dirs)
    for (int j = 1; j <= cfg.levels; ++j) net.add(std::polar(1.0 - std::ldexp(1.0, -j), th));
  for (int j = 1; j <= cfg.levels; ++j) {
    const std::size_t n = std::min<std::size_t>(cfg.max_ring, static_cast<std::size_t>(cfg.ring_density) << j);
    const double r = 1.0 - std::ldexp(1.0, -j);
    for (std::size_t i = 0; i < n; ++i) net.add(std::polar(r, 2.0 * kPi * static_cast<double>(i) / n));
  }
  detail::dedupe_net(net);
  return net;
}

/// A supremum over a sampling net with growth classification by net level:
/// per_level[l] is the maximum over net points of level <= l.
struct SupReport {
  std::string quantity;
  double value = 0.0;
  double sup = 0.0;
  cplx witness{0.0, 0.0};
  Classification classification = Classification::Inconclusive;
  double growth_slope = 0.0;
  double raw_slope = 0.0;
  double tail_ratio = std::numeric_limits<double>::quiet_NaN();
  bool extrapolated = false;
  std::vector<int> levels;
  std::vector<double> per_level;
  std::size_t evaluations = 0;
  std::size_t nonconverged = 0;
  std::string verdict = "CONVERGED";
  std::string note;
};

namespace detail {

inline void finish_sup(SupReport& rep, const SamplingNet& net, const std::vector<double>& vals,
                       const ClassifierConfig& ccfg) {
  int depth = 0;
  for (int l : net.levels) depth = std::max(depth, l);
  rep.levels.clear();
  rep.per_level.assign(static_cast<std::size_t>(depth) + 1, 0.0);
  std::size_t arg = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    rep.per_level[static_cast<std::size_t>(net.levels[i])] =
        std::max(rep.per_level[static_cast<std::size_t>(net.levels[i])], vals[i]);
    if (vals[i] > vals[arg]) arg = i;
  }
  for (std::size_t l = 1; l < rep.per_level.size(); ++l) rep.per_level[l] = std::max(rep.per_level[l], rep.per_level[l - 1]);
  for (int l = 0; l <= depth; ++l) rep.levels.push_back(l);
  rep.sup = vals.empty() ? 0.0 : vals[arg];
  rep.witness = vals.empty() ? cplx(0.0) : net.points[arg];
  rep.evaluations = vals.size();
  const GrowthFit fit = classify_growth(rep.levels, rep.per_level, ccfg);
  rep.classification = fit.classification;
  rep.growth_slope = fit.slope;
  rep.raw_slope = fit.raw_slope;
  rep.tail_ratio = fit.tail_ratio;
  rep.extrapolated = fit.extrapolated;
}

inline SingularStructure function_structure(const AnalyticFunction& f, double boundary_exponent) {
  SingularStructure ss;
  ss.boundary_exponent = boundary_exponent;
  ss.focus = f.focus();
  return ss;
}

}  // namespace detail

struct NormReport {
  double value = 0.0;
  double integral = 0.0;
  QuadratureResult quadrature;
};

/// |f(0)| + (int |f'|^p (1-|z|^2)^(p-2+s) dA)^(1/p).
inline NormReport bps_norm(const AnalyticFunction& f, const SpaceParams& sp, const QuadratureConfig& qcfg = {}) {
  require_bps(sp);
  NormReport rep;
  if (f.is_constant()) {
    rep.value = std::abs(f.value(0.0));
    rep.quadrature.converged = true;
    rep.quadrature.verdict = "CONVERGED";
    return rep;
  }
  const double e = sp.p - 2.0 + sp.s;
  rep.quadrature = integrate_disk(
      [&](const QuadPoint& q) { return std::pow(std::abs(f.derivative(q.z)), sp.p) * std::pow(q.one_minus_r2, e); },
      qcfg, detail::function_structure(f, e));
  rep.integral = rep.quadrature.value;
  rep.value = std::abs(f.value(0.0)) + std::pow(rep.integral, 1.0 / sp.p);
  return rep;
}

/// int |f'|^p (1-|z|^2)^(p-2) (1-|sigma_a(z)|^2)^s dA at one point a.
inline QuadratureResult fpps_integral_at(const AnalyticFunction& f, const SpaceParams& sp, cplx a,
                                         const QuadratureConfig& qcfg = {}) {
  require_fpps(sp);
  const double e = sp.p - 2.0 + sp.s;
  const double wa = std::pow(one_minus_abs2(a), sp.s);
  auto ss = detail::function_structure(f, e);
  if (std::abs(a) > 0.0) ss.focus.push_back(a);
  return integrate_disk(
      [&](const QuadPoint& q) {
        const double k = wa / std::pow(std::norm(1.0 - std::conj(a) * q.z), sp.s);
        return std::pow(std::abs(f.derivative(q.z)), sp.p) * std::pow(q.one_minus_r2, e) * k;
      },
      qcfg, ss);
}

struct SeminormOptions {
  QuadratureConfig quadrature{};
  ClassifierConfig classifier{};
  unsigned jobs = default_jobs();
};

/// (sup over the net of fpps_integral_at)^(1/p), classified by net level.
inline SupReport fpps_seminorm(const AnalyticFunction& f, const SpaceParams& sp, const SamplingNet& net,
                               const SeminormOptions& opt = {}) {
  require_fpps(sp);
  require(!net.empty(), "fpps_seminorm: sampling net must be nonempty");
  SupReport rep;
  rep.quantity = "fpps_seminorm";
  std::vector<double> vals(net.size(), 0.0);
  std::vector<char> ok(net.size(), 1);
  if (!f.is_constant()) {
    parallel_for(net.size(), opt.jobs, [&](std::size_t i) {
      const auto r = fpps_integral_at(f, sp, net.points[i], opt.quadrature);
      vals[i] = r.value;
      ok[i] = r.converged;
    });
  }
  detail::finish_sup(rep, net, vals, opt.classifier);
  rep.nonconverged = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
  if (rep.nonconverged > 0) {
    rep.verdict = "INCONCLUSIVE";
    rep.note = std::to_string(rep.nonconverged) + " net points did not reach the quadrature tolerance";
  }
  rep.value = std::pow(rep.sup, 1.0 / sp.p);
  return rep;
}

/// Dense boundary-refined grid for pointwise suprema.
inline SamplingNet boundary_grid(const AnalyticFunction& f, int levels = 10) {
  FunctionNetConfig cfg;
  cfg.levels = levels;
  cfg.ring_density = 8;
  cfg.max_ring = 1024;
  return function_net(f, cfg);
}

/// sup over the grid of (1-|z|^2)|f'(z)|.
inline SupReport bloch_seminorm(const AnalyticFunction& f, const SamplingNet& grid, const ClassifierConfig& ccfg = {}) {
  require(!grid.empty(), "bloch_seminorm: grid must be nonempty");
  SupReport rep;
  rep.quantity = "bloch_seminorm";
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    vals[i] = one_minus_abs2(grid.points[i]) * std::abs(f.derivative(grid.points[i]));
  detail::finish_sup(rep, grid, vals, ccfg);
  rep.value = rep.sup;
  return rep;
}

/// sup over the grid of |f(z)|.
inline SupReport hinf_norm(const AnalyticFunction& f, const SamplingNet& grid, const ClassifierConfig& ccfg = {}) {
  require(!grid.empty(), "hinf_norm: grid must be nonempty");
  SupReport rep;
  rep.quantity = "hinf_norm";
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = std::abs(f.value(grid.points[i]));
  detail::finish_sup(rep, grid, vals, ccfg);
  rep.value = rep.sup;
  return rep;
}

/// B_p(s) norms of the test functions f_a, one per a. Needs p > 1, 0 < s <= 1.
inline std::vector<NormReport> test_function_norms(const std::vector<DiskPoint>& a_list, const SpaceParams& sp,
                                                   const QuadratureConfig& qcfg = {}) {
  if (!(sp.p > 1.0 && sp.s > 0.0 && sp.s <= 1.0))
    fail(ErrorCode::InvalidArgument, "test functions need p > 1 and 0 < s <= 1 (" + params_text(sp) + ")");
  std::vector<NormReport> out;
  for (const auto& a : a_list) out.push_back(bps_norm(AnalyticFunction::test_fn_a(a.value(), sp.s, sp.p), sp, qcfg));
  return out;
}

struct MultiplierReport {
  SupReport hinf;
  CarlesonReport carleson;
  /// Relative change of the ratio estimate when the discretizing quadrature is refined tenfold.
  double discretization_change = 0.0;
  std::size_t atoms = 0;
  bool member = false;
  std::string verdict;
};

struct MultiplierOptions {
  QuadratureConfig quadrature = [] {
    QuadratureConfig q;
    q.rel_tol = 1e-3;
    q.boundary_levels = 16;
    return q;
  }();
  FunctionNetConfig samples{};
  int hinf_levels = 10;
  ClassifierConfig classifier{};
  unsigned jobs = default_jobs();
};

/// g is a multiplier of B_p(s) iff g is bounded and |g'|^p (1-|z|^2)^(p-2+s) dA
/// is a Carleson measure for B_p(s). The measure is discretized by placing
/// each final quadrature cell's mass at its centre.
inline MultiplierReport multiplier_test(const AnalyticFunction& g, const SpaceParams& sp,
                                        const MultiplierOptions& opt = {}) {
  if (!(sp.p > 0.0 && sp.s >= 0.0 && sp.p + sp.s > 1.0))
    fail(ErrorCode::InvalidArgument, "multiplier test needs p > 0, s >= 0, p + s > 1 (" + params_text(sp) + ")");
  require(sp.s <= 1.0, "multiplier test uses the B_p(s) Carleson ratio, which needs s <= 1");
  MultiplierReport rep;
  rep.hinf = hinf_norm(g, boundary_grid(g, opt.hinf_levels), opt.classifier);
  const double e = sp.p - 2.0 + sp.s;
  auto discretize = [&](const QuadratureConfig& q) {
    PointMassMeasure mu;
    if (g.is_constant()) return mu;
    std::vector<CellAtom> atoms;
    integrate_disk([&](const QuadPoint& x) { return std::pow(std::abs(g.derivative(x.z)), sp.p) * std::pow(x.one_minus_r2, e); },
                   q, detail::function_structure(g, e), &atoms);
    for (const auto& a : atoms) mu.add(DiskPoint(a.z), a.mass);
    return mu;
  };
  CarlesonConfig ccfg;
  ccfg.classifier = opt.classifier;
  ccfg.jobs = opt.jobs;
  const SamplingNet samples = function_net(g, opt.samples);
  const PointMassMeasure mu = discretize(opt.quadrature);
  rep.atoms = mu.size();
  rep.carleson = bps_carleson_ratio(mu, sp.s, samples, ccfg);
  if (!mu.empty()) {
    QuadratureConfig finer = opt.quadrature;
    finer.rel_tol /= 10.0;
    const double refined = bps_carleson_ratio(discretize(finer), sp.s, samples, ccfg).constant_estimate;
    const double base = rep.carleson.constant_estimate;
    rep.discretization_change = base > 0.0 ? std::abs(refined - base) / base : 0.0;
  }
  const auto h = rep.hinf.classification, c = rep.carleson.classification;
  rep.member = h == Classification::Bounded && c == Classification::Bounded;
  if (rep.member) rep.verdict = "MEMBER";
  else if (h == Classification::Divergent || c == Classification::Divergent) rep.verdict = "NOT MEMBER";
  else rep.verdict = "UNDECIDED";
  return rep;
}

}  // namespace diskinterp
