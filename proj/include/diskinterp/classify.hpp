#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "diskinterp/error.hpp"

namespace diskinterp {

/// Numeric surrogate for "the supremum is finite".
enum class Classification { Bounded, Divergent, Inconclusive };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Bounded: return "BOUNDED";
    case Classification::Divergent: return "DIVERGENT";
    case Classification::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

inline Classification classification_from_string(const std::string& s) {
  if (s == "BOUNDED") return Classification::Bounded;
  if (s == "DIVERGENT") return Classification::Divergent;
  if (s == "INCONCLUSIVE") return Classification::Inconclusive;
  fail(ErrorCode::InvalidArgument, "unknown classification '" + s + "'");
}

/// Thresholds of the growth classifier. Slopes are per level of the natural
/// log of the constant; one level is one dyadic step toward the circle.
struct ClassifierConfig {
  double bounded_slope = 0.02;
  double divergent_slope = 0.1;
  /// Fraction of the trailing levels used for the fit.
  double tail_fraction = 0.5;
  std::size_t min_tail = 3;
  /// Geometric tail extrapolation is applied only when the fitted ratio of
  /// consecutive increments is at most this value.
  double max_tail_ratio = 0.95;
  bool extrapolate = true;
  /// Increments that are all positive and do not decay (fitted ratio at
  /// least this value) mark growth as divergent once the raw slope exceeds
  /// bounded_slope; this catches logarithmic growth, whose log-slope is small.
  double steady_growth_ratio = 0.99;
  /// ... and no single increment may drop below this fraction of the one before.
  double steady_min_step = 0.8;
};

struct GrowthFit {
  Classification classification = Classification::Inconclusive;
  /// Slope used for the verdict (after tail extrapolation, if any).
  double slope = 0.0;
  /// Slope of the raw constants over the same window.
  double raw_slope = 0.0;
  /// Fitted ratio of consecutive increments; NaN when no geometric tail was detected.
  double tail_ratio = std::numeric_limits<double>::quiet_NaN();
  bool extrapolated = false;
  /// Fitted ratio of consecutive increments when all of them are positive, else NaN.
  double increment_ratio = std::numeric_limits<double>::quiet_NaN();
  /// Smallest ratio of consecutive increments in the window (NaN as above).
  double min_step_ratio = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> levels;
  std::vector<double> values;
};

namespace detail {

inline double ls_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace detail

/// Classify the growth of a nonnegative sequence of constants indexed by
/// level. The verdict is taken from the least-squares slope of log(value)
/// over the trailing window. When the increments inside the window decay
/// geometrically, the remaining geometric tail is added to each value first,
/// so a convergent-but-slow sequence is judged by its extrapolated limit.
inline GrowthFit classify_growth(std::span<const int> levels, std::span<const double> values,
                                 const ClassifierConfig& cfg = {}) {
  require(levels.size() == values.size(), "classify_growth: levels and values differ in length");
  GrowthFit fit;
  fit.levels.assign(levels.begin(), levels.end());
  fit.values.assign(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return fit;

  const bool all_zero = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    fit.classification = Classification::Bounded;
    return fit;
  }
  if (n < 2) return fit;

  std::size_t tail = static_cast<std::size_t>(std::ceil(cfg.tail_fraction * static_cast<double>(n)));
  tail = std::clamp<std::size_t>(std::max(tail, cfg.min_tail), 2, n);
  const std::size_t start = n - tail;

  std::vector<double> x, y;
  for (std::size_t i = start; i < n; ++i) {
    if (values[i] > 0) {
      x.push_back(levels[i]);
      y.push_back(std::log(values[i]));
    }
  }
  if (x.size() < 2) return fit;
  fit.raw_slope = detail::ls_slope(x, y);

  std::vector<double> adjusted(values.begin(), values.end());
  if (start >= 1) {
    std::vector<double> dx, dy;
    bool positive = true;
    for (std::size_t i = start; i < n; ++i) {
      const double inc = values[i] - values[i - 1];
      if (!(inc > 0)) {
        positive = false;
        break;
      }
      dx.push_back(levels[i]);
      dy.push_back(std::log(inc));
    }
    if (positive && dx.size() >= 2) {
      const double ratio = std::exp(detail::ls_slope(dx, dy));
      fit.increment_ratio = ratio;
      fit.min_step_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < dy.size(); ++i) fit.min_step_ratio = std::min(fit.min_step_ratio, std::exp(dy[i] - dy[i - 1]));
      if (cfg.extrapolate && ratio < 1.0 && ratio <= cfg.max_tail_ratio) {
        fit.tail_ratio = ratio;
        fit.extrapolated = true;
        for (std::size_t i = start; i < n; ++i) {
          adjusted[i] = values[i] + (values[i] - values[i - 1]) * ratio / (1.0 - ratio);
        }
      }
    }
  }

  if (fit.extrapolated) {
    std::vector<double> ey;
    x.clear();
    for (std::size_t i = start; i < n; ++i) {
      x.push_back(levels[i]);
      ey.push_back(std::log(adjusted[i]));
    }
    fit.slope = detail::ls_slope(x, ey);
  } else {
    fit.slope = fit.raw_slope;
  }

  const bool steady = fit.increment_ratio >= cfg.steady_growth_ratio && fit.min_step_ratio >= cfg.steady_min_step &&
                      fit.raw_slope > cfg.bounded_slope;
  if (steady) {
    fit.classification = Classification::Divergent;
  } else if (fit.slope < cfg.bounded_slope) {
    fit.classification = Classification::Bounded;
  } else if (fit.slope > cfg.divergent_slope) {
    fit.classification = Classification::Divergent;
  } else {
    fit.classification = Classification::Inconclusive;
  }
  return fit;
}

}  // namespace diskinterp
