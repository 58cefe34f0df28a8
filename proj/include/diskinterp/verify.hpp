#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "diskinterp/blaschke.hpp"
#include "diskinterp/carleson.hpp"
#include "diskinterp/classify.hpp"
#include "diskinterp/earl.hpp"
#include "diskinterp/functions.hpp"
#include "diskinterp/net.hpp"
#include "diskinterp/parallel.hpp"
#include "diskinterp/quadrature.hpp"
#include "diskinterp/rng.hpp"
#include "diskinterp/sequences.hpp"
#include "diskinterp/spaces.hpp"

namespace diskinterp {

/// One side of an equivalence: a classification with the data behind it.
struct ConditionVerdict {
  std::string name;
  Classification classification = Classification::Inconclusive;
  double constant = 0.0;
  double slope = 0.0;
  double raw_slope = 0.0;
  bool extrapolated = false;
  /// False when a quadrature behind this verdict missed its tolerance.
  bool converged = true;
  std::vector<int> levels;
  std::vector<double> values;
  std::string note;
};

inline ConditionVerdict verdict_from(const std::string& name, const CarlesonReport& r) {
  ConditionVerdict v;
  v.name = name;
  v.classification = r.classification;
  v.constant = r.constant_estimate;
  v.slope = r.growth_slope;
  v.raw_slope = r.raw_slope;
  v.extrapolated = r.extrapolated;
  v.levels = r.levels;
  v.values = r.constants;
  v.note = r.witness;
  return v;
}

inline ConditionVerdict verdict_from(const std::string& name, const SupReport& r) {
  ConditionVerdict v;
  v.name = name;
  v.classification = r.classification;
  v.constant = r.value;
  v.slope = r.growth_slope;
  v.raw_slope = r.raw_slope;
  v.extrapolated = r.extrapolated;
  v.converged = r.nonconverged == 0;
  v.levels = r.levels;
  v.values = r.per_level;
  v.note = r.note;
  return v;
}

struct EquivalenceReport {
  std::string theorem;
  std::string family;
  std::vector<ConditionVerdict> conditions;
  /// Every compared condition has the same classification.
  bool consistent = false;
  /// Every quadrature behind the compared conditions converged.
  bool converged = true;
  std::vector<std::string> notes;
};

namespace detail {

inline Classification conjunction(Classification a, Classification b) {
  if (a == Classification::Divergent || b == Classification::Divergent) return Classification::Divergent;
  if (a == Classification::Bounded && b == Classification::Bounded) return Classification::Bounded;
  return Classification::Inconclusive;
}

inline void settle(EquivalenceReport& rep, const std::vector<std::size_t>& compared) {
  rep.consistent = true;
  rep.converged = true;
  for (std::size_t i : compared) {
    rep.consistent &= rep.conditions[i].classification == rep.conditions[compared.front()].classification;
    rep.converged &= rep.conditions[i].converged;
  }
}

}  // namespace detail

/// Separation along truncation levels: classifies 1 / (min pairwise rho of
/// the points up to level l). Duplicates force DIVERGENT.
inline ConditionVerdict separation_verdict(const DiskSequence& seq, const ClassifierConfig& ccfg = {}) {
  ConditionVerdict v;
  v.name = "separated";
  const auto rep = separation_report(seq);
  v.constant = rep.separation;
  if (rep.has_duplicates) {
    v.classification = Classification::Divergent;
    v.note = "NOT SEPARATED: duplicate points";
    return v;
  }
  const int depth = std::max(3, max_level(seq));
  for (int l = 0; l <= depth; ++l) {
    const auto part = truncate_to_level(seq, l);
    v.levels.push_back(l);
    v.values.push_back(part.size() < 2 ? 1.0 : 1.0 / separation_constant(part));
  }
  std::vector<int> lv;
  for (const auto& z : seq.points) lv.push_back(point_level(z.value()));
  detail::drop_plateau_levels(v.levels, v.values, lv);
  const auto fit = classify_growth(v.levels, v.values, ccfg);
  v.classification = fit.classification;
  v.slope = fit.slope;
  v.raw_slope = fit.raw_slope;
  v.extrapolated = fit.extrapolated;
  v.note = "values are 1/separation";
  return v;
}

/// Greedy node subset for the interpolation trials: points in order of
/// level, kept when rho to every kept point is at least min_rho.
inline std::vector<std::size_t> interpolation_subset(const DiskSequence& seq, std::size_t max_nodes, double min_rho) {
  std::vector<std::size_t> order(seq.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return point_level(seq[a].value()) < point_level(seq[b].value()); });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    if (kept.size() >= max_nodes) break;
    bool ok = true;
    for (std::size_t k : kept) ok &= pseudo_hyperbolic(seq[i], seq[k]) >= min_rho;
    if (ok) kept.push_back(i);
  }
  return kept;
}

struct InterpolationTrials {
  int trials = 0;
  int successes = 0;
  double max_residual = 0.0;
  /// max over trials of max_n rho(z_n, zeta_n) / (delta/3).
  double max_perturbation_ratio = 0.0;
  double delta = 0.0;
  std::size_t subset_size = 0;
  std::vector<std::string> statuses;
  ConditionVerdict membership;
};

struct Theorem21Options {
  NetConfig net{};
  CarlesonConfig carleson{};
  int max_generation = 40;
  EarlConfig earl{};
  std::size_t subset_size = 8;
  double subset_min_rho = 0.3;
  double residual_tol = 1e-8;
  std::uint64_t seed = 1;
};

/// Targets: `trials` seeded vectors with entries uniform in the closed unit
/// disk, interpolated on a separated node subset. The Blaschke part of each
/// interpolant, with the subset zeros moved to the solver's zeros and the
/// rest of the family kept, is run through the inner-membership test.
inline InterpolationTrials run_interpolation_trials(const DiskSequence& seq, double p, double s, int trials,
                                                    const Theorem21Options& opt) {
  InterpolationTrials out;
  const auto subset = interpolation_subset(seq, opt.subset_size, opt.subset_min_rho);
  out.subset_size = subset.size();
  DiskSequence nodes;
  for (std::size_t i : subset) nodes.points.push_back(seq[i]);
  out.delta = uniform_separation_constant(nodes);
  Rng rng(opt.seed);
  Classification membership = Classification::Bounded;
  CarlesonReport worst;
  for (int k = 0; k < trials; ++k) {
    InterpolationProblem prob;
    prob.nodes = nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double r = std::sqrt(uniform01(rng));
      prob.values.push_back(std::polar(r, uniform(rng, 0.0, 2.0 * kPi)));
    }
    ++out.trials;
    EarlSolution sol;
    try {
      sol = earl_interpolate(prob, opt.earl);
    } catch (const Error& e) {
      out.statuses.push_back(to_string(e.code()));
      continue;
    }
    out.statuses.push_back(to_string(sol.status));
    const double ratio = sol.delta > 0.0 ? sol.max_perturbation / (sol.delta / 3.0) : 0.0;
    out.max_residual = std::max(out.max_residual, sol.max_residual);
    out.max_perturbation_ratio = std::max(out.max_perturbation_ratio, ratio);
    if (sol.status == EarlStatus::Converged && sol.max_residual <= opt.residual_tol && ratio <= 1.0 + 1e-12)
      ++out.successes;

    DiskSequence zeros = seq;
    for (std::size_t j = 0; j < subset.size(); ++j) zeros.points[subset[j]] = sol.perturbed_zeros[j];
    const auto rep = inner_membership_test(BlaschkeProduct(zeros), p, s, make_net(zeros, opt.net), opt.carleson);
    if (rep.classification != Classification::Bounded && membership == Classification::Bounded) worst = rep;
    if (rep.classification == Classification::Divergent) membership = Classification::Divergent;
    else if (rep.classification == Classification::Inconclusive && membership == Classification::Bounded)
      membership = Classification::Inconclusive;
    if (k == 0 && membership == Classification::Bounded) worst = rep;
  }
  out.membership = verdict_from("inner_membership", worst);
  out.membership.classification = membership;
  return out;
}

struct Theorem21Report {
  EquivalenceReport equivalence;
  bool interpolation_run = false;
  InterpolationTrials interpolation;
};

/// (c) separated + s-Carleson box test, (d) separated + kernel sum with
/// exponents (s, t); when (c) holds, interpolation trials stand in for (b).
inline Theorem21Report check_theorem21(const DiskSequence& seq, double p, double s, double t, int trials,
                                       const Theorem21Options& opt = {}) {
  require_interpolation_range(SpaceParams{p, s});
  require(t > 0.0, "check_theorem21: t must be positive");
  require(trials >= 0, "check_theorem21: trials must be nonnegative");
  Theorem21Report out;
  auto& rep = out.equivalence;
  rep.theorem = "interpolating sequences: (b) <=> (c) <=> (d)";
  rep.family = seq.label;

  const auto sep = separation_verdict(seq, opt.carleson.classifier);
  const auto mu = weights_from_sequence(seq, s);
  auto box = verdict_from("box", box_constant(mu, s, opt.max_generation, opt.carleson));
  auto ker = verdict_from("kernel", kernel_constant(mu, s, t, make_net(seq, opt.net), opt.carleson));

  ConditionVerdict c = box, d = ker;
  c.name = "(c) separated and s-Carleson";
  d.name = "(d) separated and kernel sum bounded";
  c.classification = detail::conjunction(sep.classification, box.classification);
  d.classification = detail::conjunction(sep.classification, ker.classification);
  if (sep.classification == Classification::Divergent) {
    c.note = d.note = sep.note.empty() ? "not separated" : sep.note;
    rep.notes.push_back("NOT SEPARATED");
  }
  rep.conditions = {sep, c, d};
  std::vector<std::size_t> compared{1, 2};

  if (c.classification == Classification::Bounded && trials > 0) {
    out.interpolation_run = true;
    out.interpolation = run_interpolation_trials(seq, p, s, trials, opt);
    ConditionVerdict b = out.interpolation.membership;
    b.name = "(b) interpolation certified and Blaschke part in F(p,p-2,s)";
    if (out.interpolation.successes < out.interpolation.trials) b.classification = Classification::Divergent;
    b.note = std::to_string(out.interpolation.successes) + "/" + std::to_string(out.interpolation.trials) +
             " interpolation certificates";
    rep.conditions.push_back(b);
    compared.push_back(rep.conditions.size() - 1);
  } else if (c.classification != Classification::Bounded) {
    rep.notes.push_back("interpolation step skipped: (c) is not BOUNDED");
  }
  detail::settle(rep, compared);
  return out;
}

/// int |B'/B|^p (1-|z|^2)^(p-2) (1-|sigma_a(z)|^2)^s dA for the Blaschke
/// product with the given zeros, with graded refinement at every zero.
inline QuadratureResult theorem32_integral_at(const std::vector<cplx>& zeros, double p, double s, cplx a,
                                              const QuadratureConfig& qcfg) {
  if (zeros.empty()) {
    QuadratureResult r;
    r.converged = true;
    r.verdict = "CONVERGED";
    return r;
  }
  std::vector<double> w(zeros.size());
  for (std::size_t k = 0; k < zeros.size(); ++k) w[k] = std::norm(zeros[k]) - 1.0;
  const double e = p - 2.0 + s;
  const double wa = std::pow(one_minus_abs2(a), s);
  SingularStructure ss;
  ss.points = zeros;
  ss.point_exponent = p;
  ss.boundary_exponent = e;
  if (std::abs(a) > 0.0) ss.focus.push_back(a);
  return integrate_disk(
      [&](const QuadPoint& q) {
        // real arithmetic: std::complex division goes through a slow library call
        const double x = q.z.real(), y = q.z.imag();
        double sr = 0.0, si = 0.0;
        for (std::size_t k = 0; k < zeros.size(); ++k) {
          const double a = zeros[k].real(), b = zeros[k].imag();
          const double ur = a - x, ui = b - y;                      // zero - z
          const double vr = 1.0 - (a * x + b * y), vi = b * x - a * y;  // 1 - conj(zero) z
          const double dr = ur * vr - ui * vi, di = ur * vi + ui * vr;
          const double f = w[k] / (dr * dr + di * di);
          sr += f * dr;
          si -= f * di;
        }
        const cplx sum(sr, si);
        const double kernel = wa / std::pow(std::norm(1.0 - std::conj(a) * q.z), s);
        return std::pow(std::abs(sum), p) * std::pow(q.one_minus_r2, e) * kernel;
      },
      qcfg, ss);
}

/// The same integral after z = sigma_a(w): int |B_W'/B_W|^p (1-|w|^2)^(p-2+s) dA
/// with W = sigma_a(zeros).
inline QuadratureResult theorem32_integral_moved(const std::vector<cplx>& zeros, double p, double s, cplx a,
                                                 const QuadratureConfig& qcfg) {
  std::vector<cplx> moved;
  for (const cplx z : zeros) moved.push_back(mobius_transform(a, z));
  return theorem32_integral_at(moved, p, s, 0.0, qcfg);
}

struct Theorem32Options {
  NetConfig net_a{};
  /// Net for the singular integrals: binned rays, no rings.
  NetConfig net_b = [] {
    NetConfig n;
    n.include_atoms = false;
    n.include_rings = false;
    n.ray_bins_per_arc = 1;
    return n;
  }();
  /// Net points deeper than truncation level + this are skipped at that level.
  int net_depth_margin = 2;
  CarlesonConfig carleson{};
  QuadratureConfig quadrature = [] {
    QuadratureConfig q;
    q.rel_tol = 1e-3;
    q.boundary_levels = 16;
    q.zero_refinement_depth = 3;
    return q;
  }();
};

/// Side (a): zeros' measure sum (1-|z_n|^2)^s delta_{z_n} via the Garnett
/// form sup_a sum (1-|sigma_a(z_n)|^2)^s. Side (b): sup over the net of the
/// singular log-derivative integral. Both are classified along truncation
/// levels of the zero sequence.
inline EquivalenceReport check_theorem32(const DiskSequence& zeros, double p, double s,
                                         const Theorem32Options& opt = {}) {
  require_interpolation_range(SpaceParams{p, s});
  EquivalenceReport rep;
  rep.theorem = "Blaschke product in F(p,p-2,s) <=> zeros s-Carleson";
  rep.family = zeros.label;
  auto a_side = verdict_from("(a) zero measure s-Carleson", kernel_constant(weights_from_sequence(zeros, s), s, s,
                                                                            make_net(zeros, opt.net_a), opt.carleson));

  const SamplingNet net = make_net(zeros, opt.net_b);
  std::vector<int> zl;
  for (const auto& z : zeros.points) zl.push_back(point_level(z.value()));
  const int depth = std::max(opt.carleson.min_levels, zeros.empty() ? 0 : *std::max_element(zl.begin(), zl.end()));
  ConditionVerdict b;
  b.name = "(b) sup_a int |B'/B|^p (1-|z|^2)^(p-2) (1-|sigma_a|^2)^s dA";
  std::size_t nonconverged = 0, evaluations = 0;
  double running = 0.0;
  cplx witness(0.0);
  std::vector<double> cache(net.size(), 0.0);
  for (int l = 0; l <= depth; ++l) {
    std::vector<cplx> part;
    bool changed = l == 0;
    for (std::size_t k = 0; k < zeros.size(); ++k) {
      if (zl[k] <= l) part.push_back(zeros[k].value());
      changed |= zl[k] == l;
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < net.size(); ++i)
      if (net.levels[i] <= l + opt.net_depth_margin && (changed || net.levels[i] == l + opt.net_depth_margin))
        idx.push_back(i);
    std::vector<double> vals(idx.size());
    std::vector<char> ok(idx.size(), 1);
    parallel_for(idx.size(), opt.carleson.jobs, [&](std::size_t j) {
      const auto r = theorem32_integral_at(part, p, s, net.points[idx[j]], opt.quadrature);
      vals[j] = r.value;
      ok[j] = r.converged;
    });
    for (std::size_t j = 0; j < idx.size(); ++j) {
      cache[idx[j]] = vals[j];
      ++evaluations;
      if (!ok[j]) ++nonconverged;
    }
    for (std::size_t i = 0; i < net.size(); ++i)
      if (net.levels[i] <= l + opt.net_depth_margin && cache[i] > running) {
        running = cache[i];
        witness = net.points[i];
      }
    b.levels.push_back(l);
    b.values.push_back(running);
  }
  detail::drop_plateau_levels(b.levels, b.values, zl);
  const auto fit = classify_growth(b.levels, b.values, opt.carleson.classifier);
  b.classification = fit.classification;
  b.constant = running;
  b.slope = fit.slope;
  b.raw_slope = fit.raw_slope;
  b.extrapolated = fit.extrapolated;
  b.converged = nonconverged == 0;
  b.note = std::to_string(evaluations) + " quadratures, " + std::to_string(nonconverged) + " missed tolerance";
  rep.conditions = {a_side, b};
  detail::settle(rep, {0, 1});
  return rep;
}

struct ZhuReport {
  double c = 0.0, t = 0.0;
  std::vector<cplx> samples;
  std::vector<double> values;
  std::vector<bool> converged;
  /// Least-squares slope of log I against log(1/(1-|z|^2)).
  double fitted_exponent = 0.0;
  Classification classification = Classification::Inconclusive;
  /// c = 0: range of I / log(2/(1-|z|^2)) and max/min.
  double log_ratio_min = 0.0, log_ratio_max = 0.0, log_bracket = 0.0;
  bool pass = false;
  std::string expectation;
};

/// I(z) = int (1-|w|^2)^t / |1 - conj(z) w|^(2+t+c) dA(w) at the samples.
inline double zhu_integral(cplx z, double c, double t, const QuadratureConfig& qcfg, bool* converged = nullptr) {
  SingularStructure ss;
  ss.boundary_exponent = t;
  if (std::abs(z) > 0.0) ss.focus.push_back(z);
  const double e = 0.5 * (2.0 + t + c);
  const auto r = integrate_disk(
      [&](const QuadPoint& q) { return std::pow(q.one_minus_r2, t) / std::pow(std::norm(1.0 - std::conj(z) * q.z), e); },
      qcfg, ss);
  if (converged) *converged = r.converged;
  return r.value;
}

/// Checks the three regimes: c < 0 bounded, c = 0 logarithmic, c > 0 power
/// (1-|z|^2)^(-c) with the fitted exponent within exponent_tol of c.
inline ZhuReport validate_zhu_estimate(double c, double t, const std::vector<cplx>& z_samples,
                                       const QuadratureConfig& qcfg = {}, double exponent_tol = 0.05,
                                       double log_bracket_limit = 3.0) {
  require(t > -1.0, "validate_zhu_estimate: t must exceed -1");
  require(z_samples.size() >= 2, "validate_zhu_estimate: at least two samples are needed");
  ZhuReport rep;
  rep.c = c;
  rep.t = t;
  rep.samples = z_samples;
  std::vector<double> x, y;
  std::vector<int> lv;
  for (const cplx z : z_samples) {
    bool ok = false;
    const double v = zhu_integral(z, c, t, qcfg, &ok);
    rep.values.push_back(v);
    rep.converged.push_back(ok);
    x.push_back(-std::log(one_minus_abs2(z)));
    y.push_back(std::log(v));
    lv.push_back(point_level(z));
  }
  rep.fitted_exponent = detail::ls_slope(x, y);
  rep.classification = classify_growth(lv, rep.values).classification;
  if (c < 0.0) {
    rep.expectation = "bounded";
    rep.pass = rep.classification == Classification::Bounded;
  } else if (c == 0.0) {
    rep.expectation = "comparable to log(2/(1-|z|^2))";
    rep.log_ratio_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z_samples.size(); ++i) {
      const double ratio = rep.values[i] / std::log(2.0 / one_minus_abs2(z_samples[i]));
      rep.log_ratio_min = std::min(rep.log_ratio_min, ratio);
      rep.log_ratio_max = std::max(rep.log_ratio_max, ratio);
    }
    rep.log_bracket = rep.log_ratio_max / rep.log_ratio_min;
    rep.pass = rep.log_bracket <= log_bracket_limit;
  } else {
    rep.expectation = "power growth with exponent c";
    rep.pass = std::abs(rep.fitted_exponent - c) <= exponent_tol;
  }
  for (bool ok : rep.converged) rep.pass &= ok;
  return rep;
}

struct ForelliRudinReport {
  double s = 0.0, r = 0.0, t = 0.0;
  std::size_t pairs = 0;
  double max_ratio = 0.0;
  double max_ratio_refined = 0.0;
  /// |max_ratio_refined - max_ratio| / max_ratio.
  double relative_change = 0.0;
  std::size_t nonconverged = 0;
  cplx worst_z{0.0}, worst_zeta{0.0};
  bool pass = false;
};

/// Seeded (z, zeta) pairs: z = (1-2^-j) e^{i theta} with j uniform in
/// 1..max_level; half the pairs take zeta independent, half take zeta
/// pseudo-hyperbolically close to z.
inline std::vector<std::pair<cplx, cplx>> forelli_rudin_pairs(std::size_t count, int max_level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<cplx, cplx>> out;
  auto deep_point = [&] {
    const int j = 1 + static_cast<int>(uniform01(rng) * max_level);
    return std::polar(1.0 - std::ldexp(1.0, -std::min(j, max_level)), uniform(rng, 0.0, 2.0 * kPi));
  };
  for (std::size_t i = 0; i < count; ++i) {
    const cplx z = deep_point();
    cplx zeta;
    if (i % 2 == 0) {
      zeta = deep_point();
    } else {
      const cplx w = std::polar(0.5 * uniform01(rng), uniform(rng, 0.0, 2.0 * kPi));
      zeta = mobius_transform(z, w);
    }
    out.emplace_back(z, zeta);
  }
  return out;
}

/// max over pairs of LHS / RHS-factor, where LHS = int (1-|w|^2)^s /
/// (|1-conj(w) z|^r |1-conj(w) zeta|^t) dA(w) and the factor is
/// (1-|z|^2)^(2+s-r) / |1-conj(zeta) z|^t; computed at depth L and L+1.
inline ForelliRudinReport validate_forelli_rudin(double s, double r, double t,
                                                 const std::vector<std::pair<cplx, cplx>>& pairs,
                                                 const QuadratureConfig& qcfg = {}, double stability = 0.1,
                                                 unsigned jobs = default_jobs()) {
  require(s > -1.0 && r > 0.0 && t > 0.0 && t < s + 2.0 && s + 2.0 < r,
          "validate_forelli_rudin: needs s > -1, r > 0, t > 0 and t < s + 2 < r");
  require(!pairs.empty(), "validate_forelli_rudin: no sample pairs");
  ForelliRudinReport rep;
  rep.s = s, rep.r = r, rep.t = t;
  rep.pairs = pairs.size();
  QuadratureConfig finer = qcfg;
  finer.boundary_levels += 1;
  finer.feature_margin += 1;
  auto lhs = [&](cplx z, cplx zeta, const QuadratureConfig& q, bool& ok) {
    SingularStructure ss;
    ss.boundary_exponent = s;
    ss.focus = {z, zeta};
    const auto res = integrate_disk(
        [&](const QuadPoint& w) {
          return std::pow(w.one_minus_r2, s) / (std::pow(std::norm(1.0 - std::conj(w.z) * z), 0.5 * r) *
                                                std::pow(std::norm(1.0 - std::conj(w.z) * zeta), 0.5 * t));
        },
        q, ss);
    ok = res.converged;
    return res.value;
  };
  std::vector<double> base(pairs.size()), fine(pairs.size());
  std::vector<char> ok(pairs.size(), 1);
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const auto [z, zeta] = pairs[i];
    const double factor = std::pow(one_minus_abs2(z), 2.0 + s - r) / std::pow(std::abs(1.0 - std::conj(zeta) * z), t);
    bool ok1 = false, ok2 = false;
    base[i] = lhs(z, zeta, qcfg, ok1) / factor;
    fine[i] = lhs(z, zeta, finer, ok2) / factor;
    ok[i] = ok1 && ok2;
  });
  std::size_t arg = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (base[i] > base[arg]) arg = i;
    rep.max_ratio_refined = std::max(rep.max_ratio_refined, fine[i]);
    if (!ok[i]) ++rep.nonconverged;
  }
  rep.max_ratio = base[arg];
  rep.worst_z = pairs[arg].first;
  rep.worst_zeta = pairs[arg].second;
  rep.relative_change = std::abs(rep.max_ratio_refined - rep.max_ratio) / rep.max_ratio;
  rep.pass = std::isfinite(rep.max_ratio) && rep.relative_change < stability;
  return rep;
}

struct ClosureReport {
  std::vector<double> epsilons;
  std::vector<ConditionVerdict> per_epsilon;
  SupReport bloch;
  bool in_closure = false;
  std::string verdict;
};

struct ClosureOptions {
  QuadratureConfig quadrature = [] {
    QuadratureConfig q;
    q.rel_tol = 1e-3;
    q.boundary_levels = 16;
    q.mask_refinement_depth = 8;
    return q;
  }();
  ClassifierConfig classifier{};
  unsigned jobs = default_jobs();
};

namespace detail {

template <typename Deriv>
QuadratureResult closure_integral(Deriv&& fprime, const std::vector<cplx>& focus, double eps, double t, double s,
                                  cplx a, const QuadratureConfig& qcfg) {
  SingularStructure ss;
  ss.boundary_exponent = std::max(t - 2.0 + s, -0.5);
  ss.focus = focus;
  if (std::abs(a) > 0.0) ss.focus.push_back(a);
  const double wa = std::pow(one_minus_abs2(a), s);
  return integrate_disk_masked(
      [&](const QuadPoint& q) {
        const double d = std::abs(fprime(q.z));
        const double kernel = wa / std::pow(std::norm(1.0 - std::conj(a) * q.z), s);
        return std::pow(d, t) * std::pow(q.one_minus_r2, t - 2.0 + s) * kernel;
      },
      [&](const QuadPoint& q) { return std::abs(fprime(q.z)) * q.one_minus_r2 >= eps; }, qcfg, ss);
}

inline void check_closure_args(const std::vector<double>& eps, double t, double s) {
  require(s > 0.0 && s <= 1.0, "closure_test: s must lie in (0, 1]");
  require(t >= 0.0, "closure_test: t must be nonnegative");
  require(!eps.empty(), "closure_test: epsilon grid is empty");
  for (double e : eps) require(e > 0.0, "closure_test: epsilons must be positive");
}

inline void settle_closure(ClosureReport& rep) {
  rep.in_closure = true;
  bool any_divergent = false;
  for (const auto& v : rep.per_epsilon) {
    rep.in_closure &= v.classification == Classification::Bounded;
    any_divergent |= v.classification == Classification::Divergent;
  }
  rep.verdict = rep.in_closure ? "IN CLOSURE" : (any_divergent ? "NOT IN CLOSURE" : "UNDECIDED");
}

}  // namespace detail

/// For each epsilon: sup over the net of the integral of
/// |f'|^t (1-|z|^2)^(t-2) (1-|sigma_a|^2)^s over Omega_eps(f), classified by net level.
inline ClosureReport closure_test(const AnalyticFunction& f, const std::vector<double>& epsilons, double t, double s,
                                  const SamplingNet& net, const ClosureOptions& opt = {}) {
  detail::check_closure_args(epsilons, t, s);
  require(!net.empty(), "closure_test: net must be nonempty");
  ClosureReport rep;
  rep.epsilons = epsilons;
  rep.bloch = bloch_seminorm(f, boundary_grid(f), opt.classifier);
  if (rep.bloch.classification == Classification::Divergent)
    fail(ErrorCode::InvalidArgument, "closure_test: f is not in the Bloch space (seminorm classified DIVERGENT)");
  for (double eps : epsilons) {
    std::vector<double> vals(net.size(), 0.0);
    std::vector<char> ok(net.size(), 1);
    if (!f.is_constant()) {
      parallel_for(net.size(), opt.jobs, [&](std::size_t i) {
        const auto r = detail::closure_integral([&](cplx z) { return f.derivative(z); }, f.focus(), eps, t, s,
                                                net.points[i], opt.quadrature);
        vals[i] = r.value;
        ok[i] = r.converged;
      });
    }
    SupReport sup;
    detail::finish_sup(sup, net, vals, opt.classifier);
    sup.nonconverged = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
    auto v = verdict_from("eps=" + std::to_string(eps), sup);
    v.constant = sup.sup;
    rep.per_epsilon.push_back(v);
  }
  detail::settle_closure(rep);
  return rep;
}

/// closure_test for a Blaschke product, classified along truncation levels
/// of its zero sequence (net points up to truncation level + margin).
inline ClosureReport closure_test_zeros(const DiskSequence& zeros, const std::vector<double>& epsilons, double t,
                                        double s, const SamplingNet& net, const ClosureOptions& opt = {},
                                        int net_depth_margin = 2) {
  detail::check_closure_args(epsilons, t, s);
  require(!net.empty(), "closure_test: net must be nonempty");
  ClosureReport rep;
  rep.epsilons = epsilons;
  const BlaschkeProduct full(zeros);
  rep.bloch = bloch_seminorm(AnalyticFunction::blaschke(full), boundary_grid(AnalyticFunction::blaschke(full)),
                             opt.classifier);
  std::vector<int> zl;
  for (const auto& z : zeros.points) zl.push_back(point_level(z.value()));
  const int depth = std::max(3, zeros.empty() ? 0 : *std::max_element(zl.begin(), zl.end()));
  for (double eps : epsilons) {
    ConditionVerdict v;
    v.name = "eps=" + std::to_string(eps);
    double running = 0.0;
    std::size_t missed = 0;
    for (int l = 0; l <= depth; ++l) {
      std::vector<DiskPoint> part;
      std::vector<cplx> focus;
      for (std::size_t k = 0; k < zeros.size(); ++k)
        if (zl[k] <= l) {
          part.push_back(zeros[k]);
          focus.push_back(zeros[k].value());
        }
      const BlaschkeProduct b(part);
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < net.size(); ++i)
        if (net.levels[i] <= l + net_depth_margin) idx.push_back(i);
      std::vector<double> vals(idx.size(), 0.0);
      std::vector<char> ok(idx.size(), 1);
      if (!part.empty()) {
        parallel_for(idx.size(), opt.jobs, [&](std::size_t j) {
          const auto r = detail::closure_integral([&](cplx z) { return b.derivative(z); }, focus, eps, t, s,
                                                  net.points[idx[j]], opt.quadrature);
          vals[j] = r.value;
          ok[j] = r.converged;
        });
      }
      for (std::size_t j = 0; j < idx.size(); ++j) {
        running = std::max(running, vals[j]);
        if (!ok[j]) ++missed;
      }
      v.levels.push_back(l);
      v.values.push_back(running);
    }
    detail::drop_plateau_levels(v.levels, v.values, zl);
    const auto fit = classify_growth(v.levels, v.values, opt.classifier);
    v.classification = fit.classification;
    v.constant = running;
    v.slope = fit.slope;
    v.raw_slope = fit.raw_slope;
    v.extrapolated = fit.extrapolated;
    v.converged = missed == 0;
    v.note = std::to_string(missed) + " quadratures missed tolerance";
    rep.per_epsilon.push_back(v);
  }
  detail::settle_closure(rep);
  return rep;
}

/// sup over the net of sum_n x_n^s / log(2/x_n)^2 with x_n = 1 - |sigma_w(z_n)|^2.
inline CarlesonReport log_tempered_test(const DiskSequence& seq, double s, const SamplingNet& net,
                                        const CarlesonConfig& cfg = {}) {
  require(s > 0.0 && s < 1.0, "log_tempered_test: s must lie in (0, 1)");
  require(!net.empty(), "log_tempered_test: net must be nonempty");
  CarlesonReport rep;
  rep.test = "log_tempered";
  std::vector<int> lv;
  std::vector<cplx> z;
  for (const auto& p : seq.points) {
    lv.push_back(point_level(p.value()));
    z.push_back(p.value());
  }
  const int depth = detail::truncation_depth(lv, cfg);
  std::vector<double> best;
  std::vector<std::size_t> arg;
  detail::sup_series(net.size(), lv, depth, cfg,
                     [&](std::size_t i, std::size_t k) {
                       const double x = invariant_weight(net.points[i], z[k]);
                       const double lg = std::log(2.0 / x);
                       return std::pow(x, s) / (lg * lg);
                     },
                     best, arg);
  for (int l = 0; l <= depth; ++l) rep.levels.push_back(l);
  rep.constants = best;
  rep.witness_point = net.points[arg.back()];
  rep.witness = "net point " + detail::point_text(rep.witness_point);
  detail::finish_report(rep, cfg, lv);
  return rep;
}

/// The strict-inclusion mechanism on one sequence: (i) log-tempered sum
/// bounded, (ii) s-Carleson box and kernel tests divergent, (iii) t-Carleson
/// tests bounded for every t in t_list.
struct WitnessReport {
  std::string family;
  CarlesonReport tempered;
  CarlesonReport box_s, kernel_s;
  std::vector<double> t_values;
  std::vector<CarlesonReport> box_t, kernel_t;
  bool tempered_ok = false, s_divergent = false, t_bounded = false;
  bool reproduced = false;
};

inline WitnessReport witness_test(const DiskSequence& seq, double s, const std::vector<double>& t_list,
                                  const NetConfig& ncfg = {}, const CarlesonConfig& cfg = {}, int max_generation = 40) {
  require(s > 0.0 && s < 1.0, "witness_test: s must lie in (0, 1)");
  WitnessReport rep;
  rep.family = seq.label;
  const SamplingNet net = make_net(seq, ncfg);
  rep.tempered = log_tempered_test(seq, s, net, cfg);
  rep.box_s = box_constant(weights_from_sequence(seq, s), s, max_generation, cfg);
  rep.kernel_s = kernel_constant(weights_from_sequence(seq, s), s, s, net, cfg);
  rep.t_values = t_list;
  rep.t_bounded = true;
  for (double t : t_list) {
    require(t > s, "witness_test: every t must exceed s");
    rep.box_t.push_back(box_constant(weights_from_sequence(seq, t), t, max_generation, cfg));
    rep.kernel_t.push_back(kernel_constant(weights_from_sequence(seq, t), t, t, net, cfg));
    rep.t_bounded &= rep.box_t.back().classification == Classification::Bounded &&
                     rep.kernel_t.back().classification == Classification::Bounded;
  }
  rep.tempered_ok = rep.tempered.classification == Classification::Bounded;
  rep.s_divergent = rep.box_s.classification == Classification::Divergent &&
                    rep.kernel_s.classification == Classification::Divergent;
  rep.reproduced = rep.tempered_ok && rep.s_divergent && rep.t_bounded;
  return rep;
}

struct Prop22Entry {
  std::string function;
  MultiplierReport multiplier;
  SupReport fpps, hinf;
  bool intersection_member = false;
  bool agree = false;
};

struct Prop22Report {
  std::vector<Prop22Entry> entries;
  bool consistent = false;
};

struct Prop22Options {
  MultiplierOptions multiplier{};
  SeminormOptions seminorm = [] {
    SeminormOptions o;
    o.quadrature.rel_tol = 1e-3;
    o.quadrature.boundary_levels = 16;
    return o;
  }();
  FunctionNetConfig net{};
};

/// M(B_p(s)) = F(p,p-2,s) cap H-infinity, compared function by function.
inline Prop22Report check_prop22(const std::vector<AnalyticFunction>& family, double p, double s,
                                 const Prop22Options& opt = {}) {
  if (!(p > 0.0 && p <= 1.0 && s > 1.0 - p && s <= 1.0))
    fail(ErrorCode::InvalidArgument, "check_prop22 needs 0 < p <= 1 and 1-p < s <= 1 (" + params_text({p, s}) + ")");
  Prop22Report rep;
  rep.consistent = true;
  const SpaceParams sp{p, s};
  for (const auto& g : family) {
    Prop22Entry e;
    e.function = g.description();
    e.multiplier = multiplier_test(g, sp, opt.multiplier);
    e.hinf = e.multiplier.hinf;
    e.fpps = fpps_seminorm(g, sp, function_net(g, opt.net), opt.seminorm);
    e.intersection_member =
        e.fpps.classification == Classification::Bounded && e.hinf.classification == Classification::Bounded;
    e.agree = e.intersection_member == e.multiplier.member;
    rep.consistent &= e.agree;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace diskinterp
