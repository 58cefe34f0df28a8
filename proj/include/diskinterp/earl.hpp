#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "diskinterp/blaschke.hpp"
#include "diskinterp/error.hpp"
#include "diskinterp/mobius.hpp"
#include "diskinterp/sequences.hpp"

namespace diskinterp {

struct InterpolationProblem {
  DiskSequence nodes;
  std::vector<cplx> values;

  /// Uniform separation constant of the nodes.
  double delta() const { return uniform_separation_constant(nodes); }
  double sup_value() const {
    double m = 0.0;
    for (const cplx v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

enum class EarlStatus { Converged, NonConvergence, ConstraintViolation };

inline const char* to_string(EarlStatus s) {
  switch (s) {
    case EarlStatus::Converged: return "CONVERGED";
    case EarlStatus::NonConvergence: return "NON_CONVERGENCE";
    case EarlStatus::ConstraintViolation: return "CONSTRAINT_VIOLATION";
  }
  return "NON_CONVERGENCE";
}

/// f = scale * B, B the normalized Blaschke product with zeros perturbed_zeros.
/// Residuals are |f(z_n) - a_n| recomputed through BlaschkeProduct::eval.
struct EarlSolution {
  EarlStatus status = EarlStatus::NonConvergence;
  DiskSequence perturbed_zeros;
  cplx scale{0.0, 0.0};
  std::vector<double> residuals;
  double max_residual = 0.0;
  double max_perturbation = 0.0;
  double delta = 0.0;
  /// |scale| / sup |a_n|: the constant the values had to be amplified by.
  double amplification = 0.0;
  int iterations = 0;
  int restarts = 0;
  std::string message;

  BlaschkeProduct blaschke() const { return BlaschkeProduct(perturbed_zeros); }
  cplx eval(cplx z) const { return scale * blaschke().eval(z); }
};

struct EarlConfig {
  double tol = 1e-10;
  int max_iter = 100;
  std::size_t max_nodes = 16;
  /// Initial lambda = prescale * sup|a_n| / delta^2; doubled when the
  /// perturbation bound blocks convergence.
  double prescale = 6.0;
  int max_restarts = 8;
};

namespace detail {

// sigma_zeta(z) = (zeta - z) / (1 - conj(zeta) z), as a function of zeta.
inline cplx sigma_of_zero(cplx zeta, cplx z) { return (zeta - z) / (1.0 - std::conj(zeta) * z); }

inline double residual_norm(const std::vector<cplx>& zeta, const std::vector<cplx>& nodes,
                            const std::vector<cplx>& values, double lambda, std::vector<cplx>* out = nullptr) {
  double worst = 0.0;
  if (out) out->resize(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    cplx prod(1.0, 0.0);
    for (const cplx zk : zeta) prod *= sigma_of_zero(zk, nodes[n]);
    const cplx r = lambda * prod - values[n];
    if (out) (*out)[n] = r;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// Pull zeta back onto the pseudo-hyperbolic disk of radius `bound` around z.
inline bool project(cplx& zeta, cplx z, double bound) {
  const cplx w = mobius_transform(z, zeta);
  if (std::abs(w) <= bound) return false;
  zeta = mobius_transform(z, bound * w / std::abs(w));
  return true;
}

}  // namespace detail

/// Solve lambda * prod_k sigma_{zeta_k}(z_n) = a_n for zeros zeta_k near the
/// nodes, with lambda > 0 fixed by the value size and separation, by damped
/// Newton iteration in the 2N real coordinates of the zeros. Each zero stays
/// within rho(z_n, zeta_n) <= delta/3 by projection.
inline EarlSolution earl_interpolate(const InterpolationProblem& prob, const EarlConfig& cfg = {}) {
  const std::size_t N = prob.nodes.size();
  require(N >= 1, "earl_interpolate: no nodes");
  require(prob.values.size() == N, "earl_interpolate: node and value counts differ");
  require(N <= cfg.max_nodes, "earl_interpolate: node count exceeds the configured cap of " + std::to_string(cfg.max_nodes));
  require(cfg.tol > 0.0 && cfg.max_iter >= 1, "earl_interpolate: tol must be positive and max_iter at least 1");
  for (const cplx v : prob.values) require(std::isfinite(v.real()) && std::isfinite(v.imag()), "earl_interpolate: values must be finite");

  EarlSolution sol;
  sol.delta = prob.delta();
  if (!(sol.delta > 0.0))
    fail(ErrorCode::NotUniformlySeparated, "earl_interpolate: nodes are not uniformly separated (delta = 0)");
  const double bound = sol.delta / 3.0;
  const double M = prob.sup_value();
  const std::vector<cplx> z = prob.nodes.values();

  auto finish = [&](const std::vector<cplx>& zeta, double lambda) {
    std::vector<DiskPoint> pts;
    cplx phase(1.0, 0.0);
    for (const cplx zk : zeta) {
      pts.emplace_back(zk);
      phase *= std::abs(zk) > 0.0 ? zk / std::abs(zk) : cplx(-1.0, 0.0);
    }
    sol.perturbed_zeros = DiskSequence(std::move(pts), "earl_zeros");
    sol.scale = lambda * phase;
    const BlaschkeProduct b(sol.perturbed_zeros);
    sol.residuals.assign(N, 0.0);
    sol.max_residual = 0.0;
    sol.max_perturbation = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      sol.residuals[n] = std::abs(sol.scale * b.eval(z[n]) - prob.values[n]);
      sol.max_residual = std::max(sol.max_residual, sol.residuals[n]);
      sol.max_perturbation = std::max(sol.max_perturbation, pseudo_hyperbolic(z[n], zeta[n]));
    }
    sol.amplification = M > 0.0 ? lambda / M : 0.0;
  };

  if (M == 0.0) {
    sol.iterations = 1;
    finish(z, 1.0);
    sol.status = EarlStatus::Converged;
    return sol;
  }

  double lambda = cfg.prescale * M / (sol.delta * sol.delta);
  std::vector<cplx> best_zeta = z;
  double best_lambda = lambda, best_res = std::numeric_limits<double>::infinity();
  bool blocked_by_bound = false;

  for (int restart = 0; restart <= cfg.max_restarts; ++restart) {
    sol.restarts = restart;
    std::vector<cplx> zeta = z, r;
    double res = detail::residual_norm(zeta, z, prob.values, lambda, &r);
    bool projected_at_end = false;
    for (int it = 0; it < cfg.max_iter && res > cfg.tol; ++it) {
      ++sol.iterations;
      Eigen::MatrixXd J(2 * N, 2 * N);
      Eigen::VectorXd rhs(2 * N);
      for (std::size_t n = 0; n < N; ++n) {
        rhs(2 * n) = -r[n].real();
        rhs(2 * n + 1) = -r[n].imag();
        for (std::size_t k = 0; k < N; ++k) {
          cplx others(1.0, 0.0);
          for (std::size_t j = 0; j < N; ++j)
            if (j != k) others *= detail::sigma_of_zero(zeta[j], z[n]);
          const cplx d = 1.0 - std::conj(zeta[k]) * z[n];
          const cplx dz = 1.0 / d;                                  // d/d zeta
          const cplx dzbar = (zeta[k] - z[n]) * z[n] / (d * d);     // d/d conj(zeta)
          const cplx dx = lambda * others * (dz + dzbar);
          const cplx dy = lambda * others * cplx(0.0, 1.0) * (dz - dzbar);
          J(2 * n, 2 * k) = dx.real();
          J(2 * n + 1, 2 * k) = dx.imag();
          J(2 * n, 2 * k + 1) = dy.real();
          J(2 * n + 1, 2 * k + 1) = dy.imag();
        }
      }
      const Eigen::VectorXd step = J.fullPivLu().solve(rhs);
      if (!step.allFinite()) break;
      double damping = 1.0;
      bool improved = false;
      for (int h = 0; h < 40; ++h) {
        std::vector<cplx> trial = zeta;
        bool proj = false;
        for (std::size_t k = 0; k < N; ++k) {
          trial[k] += damping * cplx(step(2 * k), step(2 * k + 1));
          if (!(std::abs(trial[k]) < 1.0)) trial[k] *= 0.999999 / std::abs(trial[k]);
          proj |= detail::project(trial[k], z[k], bound);
        }
        std::vector<cplx> tr;
        const double tres = detail::residual_norm(trial, z, prob.values, lambda, &tr);
        if (tres < res) {
          zeta = std::move(trial);
          r = std::move(tr);
          res = tres;
          projected_at_end = proj;
          improved = true;
          break;
        }
        damping *= 0.5;
      }
      if (!improved) break;
    }
    if (res < best_res) {
      best_res = res;
      best_zeta = zeta;
      best_lambda = lambda;
    }
    if (res <= cfg.tol) {
      finish(zeta, lambda);
      // the certificate, not the iteration, decides
      sol.status = sol.max_residual <= cfg.tol && sol.max_perturbation <= bound * (1 + 1e-12)
                       ? EarlStatus::Converged
                       : EarlStatus::NonConvergence;
      if (sol.status != EarlStatus::Converged) sol.message = "iteration converged but re-evaluation missed tol";
      return sol;
    }
    blocked_by_bound = projected_at_end;
    lambda *= 2.0;
  }
  finish(best_zeta, best_lambda);
  if (blocked_by_bound) {
    sol.status = EarlStatus::ConstraintViolation;
    sol.message = "perturbation bound delta/3 active at the best residual " + std::to_string(best_res);
  } else {
    sol.status = EarlStatus::NonConvergence;
    sol.message = "best residual " + std::to_string(best_res) + " after " + std::to_string(sol.iterations) + " iterations";
  }
  return sol;
}

/// Ranges of the ratios comparing nodes z_n with zeros zeta_n:
/// (1-|z_n|)/(1-|zeta_n|), |1-conj(z_n) zeta_n|/(1-|z_n|),
/// (1-|z_n|^2)/(1-|zeta_n|^2), and |1-conj(z_n) w|/|1-conj(zeta_n) w| over w.
struct ComparabilityReport {
  struct Range {
    std::string name;
    double min = std::numeric_limits<double>::infinity();
    double max = 0.0;
    void add(double v) {
      min = std::min(min, v);
      max = std::max(max, v);
    }
  };
  std::vector<Range> ratios;
  double max_rho = 0.0;
  /// Smallest c with every ratio in [1/c, c].
  double bracket = 1.0;
};

inline ComparabilityReport verify_perturbation_comparabilities(const DiskSequence& nodes, const DiskSequence& zeros,
                                                               const std::vector<cplx>& w_samples) {
  require(nodes.size() == zeros.size(), "comparabilities: node and zero counts differ");
  ComparabilityReport rep;
  rep.ratios = {{"(1-|z|)/(1-|zeta|)"}, {"|1-conj(z) zeta|/(1-|z|)"}, {"(1-|z|^2)/(1-|zeta|^2)"},
                {"|1-conj(z) w|/|1-conj(zeta) w|"}};
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const cplx z = nodes[n].value(), zeta = zeros[n].value();
    rep.max_rho = std::max(rep.max_rho, pseudo_hyperbolic(z, zeta));
    rep.ratios[0].add((1.0 - std::abs(z)) / (1.0 - std::abs(zeta)));
    rep.ratios[1].add(std::abs(1.0 - std::conj(z) * zeta) / (1.0 - std::abs(z)));
    rep.ratios[2].add(one_minus_abs2(z) / one_minus_abs2(zeta));
    for (const cplx w : w_samples) rep.ratios[3].add(std::abs(1.0 - std::conj(z) * w) / std::abs(1.0 - std::conj(zeta) * w));
  }
  for (const auto& r : rep.ratios) {
    if (r.max == 0.0) continue;
    rep.bracket = std::max({rep.bracket, r.max, 1.0 / r.min});
  }
  return rep;
}

}  // namespace diskinterp
