#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "graphpde/errors.hpp"
#include "graphpde/evolution.hpp"
#include "graphpde/function.hpp"
#include "graphpde/spectral.hpp"

namespace graphpde {

/// Nonlinear Schrodinger problem i u_t + Laplacian u = |u|^(p-1) u with
/// Dirichlet data, propagated by Duhamel/Picard restarts of length at most
/// `substep` up to the horizon T.
struct NlsProblem {
  DomainPtr domain;
  double p;
  GraphFunction initial;
  double horizon;
  double picardTol = 1e-12;
  int maxPicardIters = 50;
  double substep = 0.01;

  NlsProblem(DomainPtr dom, double exponent, GraphFunction f, double T)
      : domain(std::move(dom)), p(exponent), initial(std::move(f)), horizon(T) {
    if (!(p > 1.0)) throw std::invalid_argument("nonlinearity exponent p must exceed 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon T must be positive");
    require_on_domain(initial, *domain);
    require_dirichlet(initial, "initial datum");
  }

  void validate_solver_knobs() const {
    if (!(picardTol > 0.0)) throw std::invalid_argument("picardTol must be positive");
    if (maxPicardIters < 1) throw std::invalid_argument("maxPicardIters must be at least 1");
    if (!(substep > 0.0)) throw std::invalid_argument("substep must be positive");
    if (substep > horizon) throw std::invalid_argument("substep must not exceed the horizon");
  }
};

/// Per-call diagnostics of the Picard iteration. `gaps[i]` is the sup-norm
/// (over the quadrature grid) of the i-th iterate update.
struct PicardReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> gaps;
  double lastRatio = std::numeric_limits<double>::quiet_NaN();
};

/// Gauge-invariant power nonlinearity N(u) = |u|^(p-1) u.
struct PowerNonlinearity {
  double pMinus1;
  cplx operator()(cplx u) const {
    const double r = std::abs(u);
    if (r == 0.0) return cplx(0.0, 0.0);
    return std::pow(r, pMinus1) * u;
  }
};

namespace detail {

inline constexpr int kPicardCells = 8;  // quadrature sub-intervals per substep

/// Integration weights over [0, k*d] on a uniform grid of spacing d, using
/// values at nodes 0..max(k,2). Composite Simpson for even k; Simpson plus a
/// trailing 3/8 rule for odd k >= 3; for k = 1 a left-cell rule on the first
/// three nodes. Every rule has O(d^4) local accuracy.
inline std::vector<double> newton_cotes_weights(int k, double d) {
  if (k == 0) return {};
  if (k == 1) return {5.0 * d / 12.0, 8.0 * d / 12.0, -d / 12.0};
  std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
  const int simpsonEnd = (k % 2 == 0) ? k : k - 3;
  for (int m = 0; m + 2 <= simpsonEnd; m += 2) {
    w[m] += d / 3.0;
    w[m + 1] += 4.0 * d / 3.0;
    w[m + 2] += d / 3.0;
  }
  if (k % 2 == 1) {
    w[k - 3] += 3.0 * d / 8.0;
    w[k - 2] += 9.0 * d / 8.0;
    w[k - 1] += 9.0 * d / 8.0;
    w[k] += 3.0 * d / 8.0;
  }
  return w;
}

/// One Duhamel fixed-point solve over [0, tau] in spectral coefficient
/// space: iterate u <- S_t f - i * integral of S_(t-s) N(u(s)) ds on a fixed
/// quadrature grid until the sup-norm update drops below `tol`. Returns the
/// coefficients at tau.
template <typename Nonlin>
std::vector<cplx> duhamel_picard_coeffs(const Spectrum& spec, const std::vector<cplx>& c0,
                                        double tau, double tol, int maxIters, Nonlin&& nl,
                                        PicardReport* report) {
  const int n = spec.size();
  const int M = kPicardCells;
  const double d = tau / M;

  // Phases exp(-i lambda (k - m) d) for every node offset used by the rules.
  std::vector<std::vector<cplx>> phase(static_cast<std::size_t>(M) + 3);
  for (int delta = -2; delta <= M; ++delta) {
    auto& row = phase[static_cast<std::size_t>(delta + 2)];
    row.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) row[j] = std::exp(cplx(0.0, -spec.eigenvalue(j) * (delta * d)));
  }

  std::vector<std::vector<double>> weights(static_cast<std::size_t>(M) + 1);
  for (int k = 0; k <= M; ++k) weights[k] = newton_cotes_weights(k, d);

  // Free flow at every node; also the zeroth Picard iterate.
  std::vector<std::vector<cplx>> freeFlow(static_cast<std::size_t>(M) + 1);
  for (int k = 0; k <= M; ++k) {
    freeFlow[k].resize(static_cast<std::size_t>(n));
    const double sk = k * d;
    for (int j = 0; j < n; ++j) freeFlow[k][j] = c0[j] * std::exp(cplx(0.0, -spec.eigenvalue(j) * sk));
  }

  auto cur = freeFlow;
  auto next = freeFlow;
  std::vector<std::vector<cplx>> nonlin(static_cast<std::size_t>(M) + 1);
  std::vector<cplx> vertexValues(static_cast<std::size_t>(n));

  PicardReport localReport;
  PicardReport& rep = report ? *report : localReport;
  rep = PicardReport{};

  double prevGap = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 1; iter <= maxIters; ++iter) {
    for (int m = 0; m <= M; ++m) {
      for (int x = 0; x < n; ++x) {
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) acc += cur[m][j] * spec.phi(j, x);
        vertexValues[x] = nl(acc);
      }
      nonlin[m].assign(static_cast<std::size_t>(n), cplx(0.0, 0.0));
      for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (int x = 0; x < n; ++x) acc += vertexValues[x] * spec.phi(j, x);
        nonlin[m][j] = acc;
      }
    }

    double gap = 0.0;
    for (int k = 0; k <= M; ++k) {
      const auto& w = weights[k];
      for (int j = 0; j < n; ++j) {
        cplx integral = 0.0;
        for (int m = 0; m < static_cast<int>(w.size()); ++m)
          integral += w[m] * phase[static_cast<std::size_t>(k - m + 2)][j] * nonlin[m][j];
        next[k][j] = freeFlow[k][j] - cplx(0.0, 1.0) * integral;
      }
      double nodeGapSq = 0.0;
      for (int j = 0; j < n; ++j) nodeGapSq += std::norm(next[k][j] - cur[k][j]);
      gap = std::max(gap, std::sqrt(nodeGapSq));
    }
    std::swap(cur, next);

    rep.iterations = iter;
    rep.gaps.push_back(gap);
    if (iter > 1 && prevGap > 0.0) rep.lastRatio = gap / prevGap;
    if (!std::isfinite(gap)) {
      rep.lastRatio = std::numeric_limits<double>::infinity();
      throw ConvergenceError("Picard iterate diverged to a non-finite state", iter,
                             rep.lastRatio);
    }
    if (gap <= tol) {
      rep.converged = true;
      return cur[static_cast<std::size_t>(M)];
    }
    prevGap = gap;
  }
  throw ConvergenceError("Picard iteration did not converge within " + std::to_string(maxIters) +
                             " iterations (last contraction ratio " + std::to_string(rep.lastRatio) +
                             "); the substep is too large for the contraction",
                         maxIters, rep.lastRatio);
}

template <typename Nonlin>
GraphFunction duhamel_picard_with(const Spectrum& spec, const GraphFunction& f0, double tau,
                                  double tol, int maxIters, Nonlin&& nl,
                                  PicardReport* report = nullptr) {
  const auto c0 = spectral_coefficients(spec, f0);
  const auto cTau = duhamel_picard_coeffs(spec, c0, tau, tol, maxIters, nl, report);
  return from_coefficients(spec, cTau);
}

inline std::string interval_text(double t0, double tau) {
  return "[" + std::to_string(t0) + ", " + std::to_string(t0 + tau) + "]";
}

}  // namespace detail

/// Solution at time tau of the Duhamel fixed point started from f0. tau must
/// not exceed the problem substep; t0 is the absolute start time of the
/// sub-interval and enters only the failure diagnostics.
inline GraphFunction duhamel_picard(const NlsProblem& prob, double t0, const GraphFunction& f0,
                                    double tau, PicardReport* report = nullptr) {
  prob.validate_solver_knobs();
  require_on_domain(f0, *prob.domain);
  require_dirichlet(f0, "restart datum");
  if (!(tau > 0.0) || tau > prob.substep * (1.0 + 1e-12))
    throw std::invalid_argument("tau must lie in (0, substep]");

  const Spectrum spec = eigendecompose(assemble(prob.domain));
  try {
    return detail::duhamel_picard_with(spec, f0, tau, prob.picardTol, prob.maxPicardIters,
                                       PowerNonlinearity{prob.p - 1.0}, report);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("on sub-interval " + detail::interval_text(t0, tau) + ": " + e.what(),
                           e.iterations(), e.diagnostic());
  }
}

/// Propagate the nonlinear Schrodinger flow to each sample time by repeated
/// Duhamel/Picard restarts over sub-intervals of length at most substep.
/// Records mass and Dirichlet energy at every sample.
inline Trajectory solve_nls(const NlsProblem& prob, const std::vector<double>& times) {
  prob.validate_solver_knobs();
  detail::require_sample_times(times);
  const double slack = 1e-12 * std::max(1.0, prob.horizon);
  for (const double t : times)
    if (t < 0.0 || t > prob.horizon + slack)
      throw std::invalid_argument("sample times must lie within [0, T]");

  const Spectrum spec = eigendecompose(assemble(prob.domain));
  const PowerNonlinearity nl{prob.p - 1.0};

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  traj.conserved.reserve(times.size());

  std::vector<cplx> coeffs = spectral_coefficients(spec, prob.initial);
  double reached = 0.0;
  for (const double t : times) {
    const double dt = t - reached;
    if (dt > 0.0) {
      const int chunks = std::max(1, static_cast<int>(std::ceil(dt / prob.substep - 1e-9)));
      const double h = dt / chunks;
      for (int i = 0; i < chunks; ++i) {
        try {
          coeffs = detail::duhamel_picard_coeffs(spec, coeffs, h, prob.picardTol,
                                                 prob.maxPicardIters, nl, nullptr);
        } catch (const ConvergenceError& e) {
          throw ConvergenceError("on sub-interval " + detail::interval_text(reached + i * h, h) +
                                     ": " + e.what(),
                                 e.iterations(), e.diagnostic());
        }
      }
      reached = t;
    }
    if (t == 0.0) {
      traj.states.push_back(prob.initial);
    } else {
      traj.states.push_back(from_coefficients(spec, coeffs));
    }
    const auto& u = traj.states.back();
    traj.conserved.push_back({mass_norm_sq(u), dirichlet_energy(u), std::nullopt});
  }
  return traj;
}

}  // namespace graphpde
