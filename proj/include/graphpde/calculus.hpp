#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "graphpde/function.hpp"

namespace graphpde {

/// Edge difference f(y) - f(x). Defined only along edges of the closure.
inline cplx gradient(const GraphFunction& f, int x, int y) {
  if (!f.domain().adjacent(x, y))
    throw std::invalid_argument("gradient requested for non-adjacent vertices '" +
                                f.domain().id(x) + "' and '" + f.domain().id(y) + "'");
  return f[y] - f[x];
}

inline cplx gradient(const GraphFunction& f, const std::string& x, const std::string& y) {
  const int cx = f.domain().index_of(x);
  const int cy = f.domain().index_of(y);
  if (cx < 0 || cy < 0) throw std::invalid_argument("gradient endpoint outside the closure");
  return gradient(f, cx, cy);
}

namespace detail {

/// Neighbor sum over the closure; valid at every closure vertex. At boundary
/// vertices only neighbors inside the closure contribute.
inline cplx laplacian_closure(const GraphFunction& f, int x) {
  cplx acc = 0.0;
  for (const int y : f.domain().neighbors(x)) acc += f[y] - f[x];
  return acc;
}

}  // namespace detail

/// (Laplacian f)(x) = sum over neighbors y of f(y) - f(x). The operator acts
/// on interior vertices; all neighbors of an interior vertex lie in the
/// closure by construction.
inline cplx laplacian_apply(const GraphFunction& f, int x) {
  if (!f.domain().is_interior(x))
    throw std::invalid_argument("laplacian requested at boundary vertex '" + f.domain().id(x) + "'");
  return detail::laplacian_closure(f, x);
}

inline cplx laplacian_apply(const GraphFunction& f, const std::string& x) {
  const int cx = f.domain().index_of(x);
  if (cx < 0) throw std::invalid_argument("vertex '" + x + "' is not in the closure");
  return laplacian_apply(f, cx);
}

/// Squared L2 mass over the closure.
inline double mass_norm_sq(const GraphFunction& f) {
  double acc = 0.0;
  for (const cplx v : f.values()) acc += std::norm(v);
  return acc;
}

/// Sum of |f(y) - f(x)|^2 over ordered adjacent pairs of the closure; each
/// undirected edge counts twice.
inline double dirichlet_energy(const GraphFunction& f) {
  double acc = 0.0;
  const int n = f.domain().closure_count();
  for (int x = 0; x < n; ++x)
    for (const int y : f.domain().neighbors(x)) acc += std::norm(f[y] - f[x]);
  return acc;
}

/// Sum over closure vertices of (Laplacian f)(x) * conj(g(x)).
inline cplx laplacian_pairing(const GraphFunction& f, const GraphFunction& g) {
  require_same_domain(f, g);
  cplx acc = 0.0;
  for (int x = 0; x < f.domain().closure_count(); ++x)
    acc += detail::laplacian_closure(f, x) * std::conj(g[x]);
  return acc;
}

/// Sum over ordered adjacent pairs of grad_xy f * conj(grad_xy g).
inline cplx gradient_pairing(const GraphFunction& f, const GraphFunction& g) {
  require_same_domain(f, g);
  cplx acc = 0.0;
  const int n = f.domain().closure_count();
  for (int x = 0; x < n; ++x)
    for (const int y : f.domain().neighbors(x)) acc += (f[y] - f[x]) * std::conj(g[y] - g[x]);
  return acc;
}

/// |LHS - RHS| of the Green identity: sum of (Laplacian f, g) over the closure
/// against -1/2 times the ordered-pair gradient pairing. Exact arithmetic
/// would give zero for any f, g.
inline double green_identity_residual(const GraphFunction& f, const GraphFunction& g) {
  return std::abs(laplacian_pairing(f, g) + 0.5 * gradient_pairing(f, g));
}

/// Boundary flux pairing: sum over interior x with boundary neighbors y of
/// conj(f(x)) * grad_xy f. For Dirichlet f this equals minus the boundary
/// gradient mass and is real.
inline cplx boundary_flux_pairing(const GraphFunction& f) {
  cplx acc = 0.0;
  const auto& d = f.domain();
  for (int x = 0; x < d.interior_count(); ++x)
    for (const int y : d.neighbors(x))
      if (!d.is_interior(y)) acc += std::conj(f[x]) * (f[y] - f[x]);
  return acc;
}

/// Sum of |grad_xy f|^2 over interior-to-boundary pairs.
inline double boundary_gradient_sq(const GraphFunction& f) {
  double acc = 0.0;
  const auto& d = f.domain();
  for (int x = 0; x < d.interior_count(); ++x)
    for (const int y : d.neighbors(x))
      if (!d.is_interior(y)) acc += std::norm(f[y] - f[x]);
  return acc;
}

}  // namespace graphpde
