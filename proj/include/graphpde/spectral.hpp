#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "graphpde/calculus.hpp"
#include "graphpde/errors.hpp"
#include "graphpde/function.hpp"
#include "graphpde/matrix.hpp"

namespace graphpde {

/// Matrix of -Laplacian restricted to Dirichlet functions on the interior:
/// diagonal = closure degree, off-diagonal = -1 along interior edges.
/// Symmetric positive definite whenever the boundary is nonempty and the
/// interior is connected.
struct DirichletLaplacian {
  DomainPtr domain;
  RealMatrix matrix;
};

inline DirichletLaplacian assemble(DomainPtr domain) {
  const int n = domain->interior_count();
  RealMatrix L(n, n);
  for (int x = 0; x < n; ++x) {
    L(x, x) = static_cast<double>(domain->degree(x));
    for (const int y : domain->neighbors(x))
      if (domain->is_interior(y)) L(x, y) = -1.0;
  }
  return {std::move(domain), std::move(L)};
}

namespace detail {

/// Cyclic Jacobi rotations on a symmetric matrix. Consumes a copy of the
/// matrix; returns unsorted eigenvalues in `d` and accumulated rotations in
/// the columns of `v`. Throws when the off-diagonal mass fails to vanish
/// within `maxSweeps`.
inline void jacobi_eigen_symmetric(RealMatrix a, std::vector<double>& d, RealMatrix& v,
                                   int maxSweeps = 50) {
  const int n = a.rows();
  v = RealMatrix::identity(n);
  d.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> b(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) b[i] = d[i] = a(i, i);

  auto rotate = [](RealMatrix& m, int i, int j, int k, int l, double s, double tau) {
    const double g = m(i, j);
    const double h = m(k, l);
    m(i, j) = g - s * (h + g * tau);
    m(k, l) = h + s * (g - h * tau);
  };

  double sm = 0.0;
  for (int sweep = 1; sweep <= maxSweeps; ++sweep) {
    sm = 0.0;
    for (int ip = 0; ip < n - 1; ++ip)
      for (int iq = ip + 1; iq < n; ++iq) sm += std::abs(a(ip, iq));
    if (sm == 0.0) return;

    const double tresh = sweep < 4 ? 0.2 * sm / (n * n) : 0.0;
    for (int ip = 0; ip < n - 1; ++ip) {
      for (int iq = ip + 1; iq < n; ++iq) {
        const double g = 100.0 * std::abs(a(ip, iq));
        if (sweep > 4 && std::abs(d[ip]) + g == std::abs(d[ip]) &&
            std::abs(d[iq]) + g == std::abs(d[iq])) {
          a(ip, iq) = 0.0;
        } else if (std::abs(a(ip, iq)) > tresh) {
          double h = d[iq] - d[ip];
          double t;
          if (std::abs(h) + g == std::abs(h)) {
            t = a(ip, iq) / h;
          } else {
            const double theta = 0.5 * h / a(ip, iq);
            t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
            if (theta < 0.0) t = -t;
          }
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          const double tau = s / (1.0 + c);
          h = t * a(ip, iq);
          z[ip] -= h;
          z[iq] += h;
          d[ip] -= h;
          d[iq] += h;
          a(ip, iq) = 0.0;
          for (int j = 0; j < ip; ++j) rotate(a, j, ip, j, iq, s, tau);
          for (int j = ip + 1; j < iq; ++j) rotate(a, ip, j, j, iq, s, tau);
          for (int j = iq + 1; j < n; ++j) rotate(a, ip, j, iq, j, s, tau);
          for (int j = 0; j < n; ++j) rotate(v, j, ip, j, iq, s, tau);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      b[i] += z[i];
      d[i] = b[i];
      z[i] = 0.0;
    }
  }
  throw ConvergenceError("Jacobi eigensolver did not converge: off-diagonal mass " +
                             std::to_string(sm) + " after " + std::to_string(maxSweeps) + " sweeps",
                         maxSweeps, sm);
}

}  // namespace detail

/// Full eigendecomposition of the Dirichlet Laplacian: ascending positive
/// eigenvalues with orthonormal real eigenvectors on the interior (extended
/// by zero to the boundary when viewed as GraphFunctions).
class Spectrum {
public:
  Spectrum(DomainPtr domain, std::vector<double> eigenvalues, RealMatrix vectors)
      : domain_(std::move(domain)), eigenvalues_(std::move(eigenvalues)), vectors_(std::move(vectors)) {}

  const Domain& domain() const noexcept { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }

  int size() const noexcept { return static_cast<int>(eigenvalues_.size()); }
  double eigenvalue(int j) const { return eigenvalues_[j]; }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  double max_eigenvalue() const { return eigenvalues_.back(); }

  /// Component of the j-th eigenvector at interior index x.
  double phi(int j, int x) const { return vectors_(x, j); }

  GraphFunction eigenfunction(int j) const {
    std::vector<cplx> vals(static_cast<std::size_t>(size()));
    for (int x = 0; x < size(); ++x) vals[x] = vectors_(x, j);
    return GraphFunction::dirichlet(domain_, std::move(vals));
  }

private:
  DomainPtr domain_;
  std::vector<double> eigenvalues_;
  RealMatrix vectors_;  // column j = j-th eigenvector
};

inline Spectrum eigendecompose(const DirichletLaplacian& L, int maxSweeps = 50) {
  const int n = L.matrix.rows();
  std::vector<double> d;
  RealMatrix v;
  detail::jacobi_eigen_symmetric(L.matrix, d, v, maxSweeps);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&d](int a, int b) { return d[a] < d[b]; });

  std::vector<double> lam(static_cast<std::size_t>(n));
  RealMatrix vecs(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    lam[j] = d[src];
    double peak = 0.0;
    for (int i = 0; i < n; ++i) peak = std::max(peak, std::abs(v(i, src)));
    double sign = 1.0;
    for (int i = 0; i < n; ++i)
      if (std::abs(v(i, src)) > 1e-12 * peak) {
        sign = v(i, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    for (int i = 0; i < n; ++i) vecs(i, j) = sign * v(i, src);
  }
  if (lam.front() <= 0.0)
    throw ConvergenceError("Dirichlet Laplacian spectrum is not positive; smallest eigenvalue " +
                               std::to_string(lam.front()),
                           0, lam.front());
  return Spectrum(L.domain, std::move(lam), std::move(vecs));
}

/// Coefficient of f against the j-th (real) eigenvector over the interior.
inline cplx project(const Spectrum& spec, const GraphFunction& f, int j) {
  if (j < 0 || j >= spec.size()) throw std::out_of_range("eigenfunction index out of range");
  require_on_domain(f, spec.domain());
  require_dirichlet(f);
  cplx acc = 0.0;
  for (int x = 0; x < spec.size(); ++x) acc += f[x] * spec.phi(j, x);
  return acc;
}

/// All spectral coefficients of a Dirichlet function at once.
inline std::vector<cplx> spectral_coefficients(const Spectrum& spec, const GraphFunction& f) {
  require_on_domain(f, spec.domain());
  require_dirichlet(f);
  const int n = spec.size();
  std::vector<cplx> c(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (int x = 0; x < n; ++x) acc += f[x] * spec.phi(j, x);
    c[j] = acc;
  }
  return c;
}

/// Synthesis of a Dirichlet function from spectral coefficients.
inline GraphFunction from_coefficients(const Spectrum& spec, std::span<const cplx> coeffs) {
  const int n = spec.size();
  if (static_cast<int>(coeffs.size()) != n)
    throw std::invalid_argument("coefficient count does not match the spectrum");
  std::vector<cplx> vals(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) acc += coeffs[j] * spec.phi(j, x);
    vals[x] = acc;
  }
  return GraphFunction::dirichlet(spec.domain_ptr(), std::move(vals));
}

/// Propagator matrix S_t(x,y) = sum_j exp(-i lambda_j t) phi_j(x) phi_j(y).
/// S_0 is the exact identity by construction; for t != 0 the matrix is
/// unitary within roundoff.
inline ComplexMatrix schrodinger_kernel(const Spectrum& spec, double t) {
  const int n = spec.size();
  if (t == 0.0) return ComplexMatrix::identity(n);
  ComplexMatrix K(n, n);
  for (int j = 0; j < n; ++j) {
    const cplx phase = std::exp(cplx(0.0, -spec.eigenvalue(j) * t));
    for (int x = 0; x < n; ++x) {
      const cplx px = phase * spec.phi(j, x);
      for (int y = 0; y < n; ++y) K(x, y) += px * spec.phi(j, y);
    }
  }
  return K;
}

}  // namespace graphpde
