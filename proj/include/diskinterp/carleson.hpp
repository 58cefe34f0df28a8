#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "diskinterp/classify.hpp"
#include "diskinterp/error.hpp"
#include "diskinterp/mobius.hpp"
#include "diskinterp/net.hpp"
#include "diskinterp/parallel.hpp"
#include "diskinterp/sequences.hpp"

namespace diskinterp {

struct Atom {
  DiskPoint point;
  double weight = 0.0;
};

/// sum_n w_n delta_{z_n}; weights finite and nonnegative.
class PointMassMeasure {
 public:
  PointMassMeasure() = default;
  explicit PointMassMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (const auto& a : atoms_)
      require(std::isfinite(a.weight) && a.weight >= 0.0, "point mass weights must be finite and nonnegative");
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  void add(const DiskPoint& p, double w) {
    require(std::isfinite(w) && w >= 0.0, "point mass weights must be finite and nonnegative");
    atoms_.push_back({p, w});
  }

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.weight;
    return m;
  }

  PointMassMeasure scaled(double lambda) const {
    require(lambda >= 0.0, "scale factor must be nonnegative");
    auto out = *this;
    for (auto& a : out.atoms_) a.weight *= lambda;
    return out;
  }

 private:
  std::vector<Atom> atoms_;
};

/// Outcome of a Carleson-type supremum test. `constants[i]` is the estimate
/// for the truncation of the measure to atoms of level <= levels[i].
struct CarlesonReport {
  std::string test;
  double constant_estimate = 0.0;
  std::string witness;
  cplx witness_point{0.0, 0.0};
  Classification classification = Classification::Inconclusive;
  double growth_slope = 0.0;
  double raw_slope = 0.0;
  double tail_ratio = std::numeric_limits<double>::quiet_NaN();
  bool extrapolated = false;
  std::vector<int> levels;
  std::vector<double> constants;
  std::string note;
};

struct CarlesonConfig {
  ClassifierConfig classifier{};
  /// Truncation levels run 0..max(deepest atom level, min_levels).
  int min_levels = 3;
  unsigned jobs = default_jobs();
};

/// atoms (z_n, (1 - |z_n|^2)^s).
inline PointMassMeasure weights_from_sequence(const DiskSequence& seq, double s) {
  require(s > 0.0, "weights_from_sequence: s must be positive");
  std::vector<Atom> atoms;
  atoms.reserve(seq.size());
  for (const auto& p : seq.points) atoms.push_back({p, std::pow(one_minus_abs2(p.value()), s)});
  return PointMassMeasure(std::move(atoms));
}

namespace detail {

inline void finish_report(CarlesonReport& rep, const CarlesonConfig& cfg) {
  const GrowthFit fit = classify_growth(rep.levels, rep.constants, cfg.classifier);
  rep.classification = fit.classification;
  rep.growth_slope = fit.slope;
  rep.raw_slope = fit.raw_slope;
  rep.tail_ratio = fit.tail_ratio;
  rep.extrapolated = fit.extrapolated;
  rep.constant_estimate = rep.constants.empty() ? 0.0 : rep.constants.back();
}

/// Truncation series only change at levels that hold atoms; the other
/// levels repeat the previous value and would stall the tail fit. Keep the
/// levels holding atoms (all levels when fewer than two do).
inline void drop_plateau_levels(std::vector<int>& levels, std::vector<double>& values,
                                const std::vector<int>& atom_levels) {
  std::vector<int> kept_levels;
  std::vector<double> kept_values;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (std::find(atom_levels.begin(), atom_levels.end(), levels[i]) != atom_levels.end()) {
      kept_levels.push_back(levels[i]);
      kept_values.push_back(values[i]);
    }
  if (kept_levels.size() < 2) return;
  levels = std::move(kept_levels);
  values = std::move(kept_values);
}

inline void finish_report(CarlesonReport& rep, const CarlesonConfig& cfg, const std::vector<int>& atom_levels) {
  drop_plateau_levels(rep.levels, rep.constants, atom_levels);
  finish_report(rep, cfg);
}

inline int truncation_depth(const std::vector<int>& atom_levels, const CarlesonConfig& cfg) {
  int depth = cfg.min_levels;
  for (int l : atom_levels) depth = std::max(depth, l);
  return depth;
}

/// For every truncation level l, max over sample points a of
/// sum_{atoms of level <= l} kernel(a, atom). kernel(a_index, atom_index).
template <typename Kernel>
void sup_series(std::size_t n_samples, const std::vector<int>& atom_levels, int depth, const CarlesonConfig& cfg,
                Kernel&& kernel, std::vector<double>& best, std::vector<std::size_t>& argbest) {
  const std::size_t levels = static_cast<std::size_t>(depth) + 1;
  std::vector<std::vector<double>> per_sample(n_samples);
  parallel_for(n_samples, cfg.jobs, [&](std::size_t i) {
    std::vector<double> bucket(levels, 0.0);
    for (std::size_t k = 0; k < atom_levels.size(); ++k) bucket[atom_levels[k]] += kernel(i, k);
    for (std::size_t l = 1; l < levels; ++l) bucket[l] += bucket[l - 1];
    per_sample[i] = std::move(bucket);
  });
  best.assign(levels, 0.0);
  argbest.assign(levels, 0);
  for (std::size_t i = 0; i < n_samples; ++i)
    for (std::size_t l = 0; l < levels; ++l)
      if (per_sample[i][l] > best[l]) {
        best[l] = per_sample[i][l];
        argbest[l] = i;
      }
}

inline std::string point_text(cplx a) {
  std::ostringstream os;
  os.precision(17);
  os << "a=(" << a.real() << "," << a.imag() << ")";
  return os.str();
}

}  // namespace detail

/// Supremum of mu(S(I)) / |I|^s over dyadic arcs of generations 0..max_generation.
/// S(I) uses the closed inner edge 1 - |I| <= r.
inline CarlesonReport box_constant(const PointMassMeasure& mu, double s, int max_generation,
                                   const CarlesonConfig& cfg = {}) {
  require(s > 0.0, "box_constant: s must be positive");
  require(max_generation >= 1 && max_generation <= 60, "box_constant: max_generation must lie in [1, 60]");
  CarlesonReport rep;
  rep.test = "box";
  if (mu.empty()) {
    rep.levels = {0};
    rep.constants = {0.0};
    rep.classification = Classification::Bounded;
    rep.witness = "empty measure";
    return rep;
  }

  std::vector<int> atom_levels;
  for (const auto& a : mu.atoms()) atom_levels.push_back(point_level(a.point.value()));
  const int depth = detail::truncation_depth(atom_levels, cfg);

  std::vector<std::size_t> order(mu.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atom_levels[a] < atom_levels[b]; });

  std::vector<std::unordered_map<std::uint64_t, double>> mass(static_cast<std::size_t>(max_generation) + 1);
  double best = 0.0;
  int best_g = 0;
  std::uint64_t best_idx = 0;
  std::size_t cursor = 0;
  for (int level = 0; level <= depth; ++level) {
    for (; cursor < order.size() && atom_levels[order[cursor]] <= level; ++cursor) {
      const Atom& atom = mu.atoms()[order[cursor]];
      const cplx z = atom.point.value();
      const double u = 1.0 - std::abs(z);
      // closed inner edge: the atom lies in generation-g boxes with 2^-g >= u;
      // the slack keeps atoms placed on 1 - 2^-g inside despite roundoff in |z|
      const int gmax = std::min(max_generation, static_cast<int>(std::floor(-std::log2(u) + 1e-12)));
      double t = std::arg(z) / (2.0 * kPi);
      if (t < 0.0) t += 1.0;
      for (int g = 0; g <= gmax; ++g) {
        const std::uint64_t count = std::uint64_t{1} << g;
        const auto idx = std::min<std::uint64_t>(static_cast<std::uint64_t>(t * static_cast<double>(count)), count - 1);
        double& m = mass[static_cast<std::size_t>(g)][idx];
        m += atom.weight;
        const double ratio = m / std::exp2(-s * g);
        if (ratio > best) {
          best = ratio;
          best_g = g;
          best_idx = idx;
        }
      }
    }
    rep.levels.push_back(level);
    rep.constants.push_back(best);
  }
  std::ostringstream os;
  os.precision(17);
  const double width = std::ldexp(1.0, -best_g);
  os << "dyadic box generation " << best_g << ", arc [" << static_cast<double>(best_idx) * width << ", "
     << static_cast<double>(best_idx + 1) * width << ") of the normalized circle";
  rep.witness = os.str();
  rep.witness_point = std::polar(1.0 - width, 2.0 * kPi * (static_cast<double>(best_idx) + 0.5) * width);
  detail::finish_report(rep, cfg, atom_levels);
  return rep;
}

/// max over the net of sum_n (1-|a|^2)^t w_n / |1 - conj(a) z_n|^(s+t).
inline CarlesonReport kernel_constant(const PointMassMeasure& mu, double s, double t, const SamplingNet& net,
                                      const CarlesonConfig& cfg = {}) {
  require(s > 0.0 && t > 0.0, "kernel_constant: s and t must be positive");
  require(!net.empty(), "kernel_constant: sampling net must be nonempty");
  CarlesonReport rep;
  rep.test = "kernel";
  std::vector<int> atom_levels;
  std::vector<cplx> z;
  std::vector<double> w;
  for (const auto& a : mu.atoms()) {
    atom_levels.push_back(point_level(a.point.value()));
    z.push_back(a.point.value());
    w.push_back(a.weight);
  }
  const int depth = detail::truncation_depth(atom_levels, cfg);
  std::vector<double> pre(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) pre[i] = std::pow(one_minus_abs2(net.points[i]), t);
  const double half = 0.5 * (s + t);
  std::vector<double> best;
  std::vector<std::size_t> arg;
  detail::sup_series(net.size(), atom_levels, depth, cfg,
                     [&](std::size_t i, std::size_t k) {
                       const double d = std::norm(1.0 - std::conj(net.points[i]) * z[k]);
                       return pre[i] * w[k] * std::exp(-half * std::log(d));
                     },
                     best, arg);
  for (int l = 0; l <= depth; ++l) rep.levels.push_back(l);
  rep.constants = best;
  rep.witness_point = net.points[arg.back()];
  rep.witness = "net point " + detail::point_text(rep.witness_point);
  detail::finish_report(rep, cfg, atom_levels);
  return rep;
}

/// Value of the kernel sum at a single point a (no supremum).
inline double kernel_sum_at(const PointMassMeasure& mu, double s, double t, cplx a) {
  const double pre = std::pow(one_minus_abs2(a), t);
  double sum = 0.0;
  for (const auto& atom : mu.atoms())
    sum += pre * atom.weight / std::pow(std::abs(1.0 - std::conj(a) * atom.point.value()), s + t);
  return sum;
}

/// sum_n (1 - |sigma_a(z_n)|^2)^s, the Moebius-invariant form of the same sum.
inline double sigma_sum_at(const DiskSequence& seq, double s, cplx a) {
  double sum = 0.0;
  for (const auto& p : seq.points) sum += std::pow(invariant_weight(a, p.value()), s);
  return sum;
}

/// sup over samples z of (1-|z|^2)^(2-s) * sum_n w_n / |1 - conj(w_n) z|^2.
inline CarlesonReport bps_carleson_ratio(const PointMassMeasure& mu, double s, const SamplingNet& samples,
                                         const CarlesonConfig& cfg = {}) {
  require(s > 0.0 && s <= 1.0, "bps_carleson_ratio: s must lie in (0, 1]");
  require(!samples.empty(), "bps_carleson_ratio: sample list must be nonempty");
  CarlesonReport rep;
  rep.test = "bps_ratio";
  std::vector<int> atom_levels;
  std::vector<cplx> z;
  std::vector<double> w;
  for (const auto& a : mu.atoms()) {
    atom_levels.push_back(point_level(a.point.value()));
    z.push_back(a.point.value());
    w.push_back(a.weight);
  }
  const int depth = detail::truncation_depth(atom_levels, cfg);
  std::vector<double> pre(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) pre[i] = std::pow(one_minus_abs2(samples.points[i]), 2.0 - s);
  std::vector<double> best;
  std::vector<std::size_t> arg;
  detail::sup_series(samples.size(), atom_levels, depth, cfg,
                     [&](std::size_t i, std::size_t k) {
                       return pre[i] * w[k] / std::norm(1.0 - std::conj(z[k]) * samples.points[i]);
                     },
                     best, arg);
  for (int l = 0; l <= depth; ++l) rep.levels.push_back(l);
  rep.constants = best;
  rep.witness_point = samples.points[arg.back()];
  rep.witness = "sample point " + detail::point_text(rep.witness_point);
  detail::finish_report(rep, cfg, atom_levels);
  return rep;
}

}  // namespace diskinterp
