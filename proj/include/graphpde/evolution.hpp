#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graphpde/calculus.hpp"
#include "graphpde/function.hpp"
#include "graphpde/spectral.hpp"

namespace graphpde {

struct ConservedRecord {
  double mass = 0.0;
  double dirichletEnergy = 0.0;
  std::optional<double> waveEnergy;
};

/// Sampled evolution. States are Dirichlet; the state at an exact t = 0
/// sample is a bitwise copy of the initial datum. `velocities` is populated
/// by the wave solver only.
struct Trajectory {
  std::vector<double> times;
  std::vector<GraphFunction> states;
  std::vector<GraphFunction> velocities;
  std::vector<ConservedRecord> conserved;
};

namespace detail {

inline void require_sample_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("sample time list is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw std::invalid_argument("sample time is not finite");
    if (i > 0 && times[i] < times[i - 1])
      throw std::invalid_argument("sample times must be ascending");
  }
}

/// sin(w t) / w with the w -> 0 limit t. The spectrum keeps all eigenvalues
/// positive, so the guard is for robustness only.
inline double sin_over_freq(double w, double t) {
  const double wt = w * t;
  if (std::abs(wt) < 1e-8) return t * (1.0 - wt * wt / 6.0);
  return std::sin(wt) / w;
}

/// Conserved wave energy: per-edge gradient form u^T L u plus velocity mass.
/// The gradient part is half of the ordered-pair dirichlet_energy sum.
inline double wave_energy(const GraphFunction& u, const GraphFunction& ut) {
  return 0.5 * dirichlet_energy(u) + mass_norm_sq(ut);
}

}  // namespace detail

/// Exact spectral solution of i u_t + Laplacian u = 0 with Dirichlet datum f:
/// u(t) = sum_j c_j exp(-i lambda_j t) phi_j, sampled independently per time.
/// Records mass and Dirichlet energy at every sample.
inline Trajectory solve_schrodinger(const Spectrum& spec, const GraphFunction& f,
                                    const std::vector<double>& times) {
  require_on_domain(f, spec.domain());
  require_dirichlet(f, "initial datum");
  detail::require_sample_times(times);

  const auto c0 = spectral_coefficients(spec, f);
  const int n = spec.size();

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  traj.conserved.reserve(times.size());
  std::vector<cplx> ct(static_cast<std::size_t>(n));
  for (const double t : times) {
    if (t == 0.0) {
      traj.states.push_back(f);
    } else {
      for (int j = 0; j < n; ++j) ct[j] = c0[j] * std::exp(cplx(0.0, -spec.eigenvalue(j) * t));
      traj.states.push_back(from_coefficients(spec, ct));
    }
    const auto& u = traj.states.back();
    traj.conserved.push_back({mass_norm_sq(u), dirichlet_energy(u), std::nullopt});
  }
  return traj;
}

inline Trajectory solve_schrodinger(const DomainPtr& domain, const GraphFunction& f,
                                    const std::vector<double>& times) {
  return solve_schrodinger(eigendecompose(assemble(domain)), f, times);
}

/// Exact spectral solution of u_tt = Laplacian u with u(0) = f, u_t(0) = g:
/// u(t) = sum_j [a_j cos(w_j t) + b_j sin(w_j t)/w_j] phi_j with w_j =
/// sqrt(lambda_j). Velocities are the analytic derivative series. Records
/// mass, Dirichlet energy and the conserved wave energy at every sample.
inline Trajectory solve_wave(const Spectrum& spec, const GraphFunction& f, const GraphFunction& g,
                             const std::vector<double>& times) {
  require_on_domain(f, spec.domain());
  require_on_domain(g, spec.domain());
  require_dirichlet(f, "initial datum");
  require_dirichlet(g, "initial velocity");
  detail::require_sample_times(times);

  const auto a = spectral_coefficients(spec, f);
  const auto b = spectral_coefficients(spec, g);
  const int n = spec.size();

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  traj.velocities.reserve(times.size());
  traj.conserved.reserve(times.size());
  std::vector<cplx> cu(static_cast<std::size_t>(n)), cv(static_cast<std::size_t>(n));
  for (const double t : times) {
    if (t == 0.0) {
      traj.states.push_back(f);
      traj.velocities.push_back(g);
    } else {
      for (int j = 0; j < n; ++j) {
        const double w = std::sqrt(spec.eigenvalue(j));
        cu[j] = a[j] * std::cos(w * t) + b[j] * detail::sin_over_freq(w, t);
        cv[j] = -a[j] * w * std::sin(w * t) + b[j] * std::cos(w * t);
      }
      traj.states.push_back(from_coefficients(spec, cu));
      traj.velocities.push_back(from_coefficients(spec, cv));
    }
    const auto& u = traj.states.back();
    const auto& ut = traj.velocities.back();
    traj.conserved.push_back({mass_norm_sq(u), dirichlet_energy(u), detail::wave_energy(u, ut)});
  }
  return traj;
}

inline Trajectory solve_wave(const DomainPtr& domain, const GraphFunction& f, const GraphFunction& g,
                             const std::vector<double>& times) {
  return solve_wave(eigendecompose(assemble(domain)), f, g, times);
}

}  // namespace graphpde
