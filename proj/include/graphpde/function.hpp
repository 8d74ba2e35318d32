#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graphpde/graph.hpp"

namespace graphpde {

using cplx = std::complex<double>;

/// Complex-valued function on the closure of a domain, indexed by
/// closure-local vertex index. Dirichlet states carry exact zeros on the
/// boundary; `is_dirichlet` tests for that exactly, not within a tolerance.
class GraphFunction {
public:
  explicit GraphFunction(DomainPtr domain)
      : domain_(std::move(domain)), values_(static_cast<std::size_t>(domain_->closure_count())) {}

  /// Interior values with an exactly-zero boundary extension.
  static GraphFunction dirichlet(DomainPtr domain, std::vector<cplx> interiorValues) {
    if (static_cast<int>(interiorValues.size()) != domain->interior_count())
      throw std::invalid_argument("interior value count does not match the domain");
    GraphFunction f(std::move(domain));
    std::copy(interiorValues.begin(), interiorValues.end(), f.values_.begin());
    return f;
  }

  static GraphFunction on_closure(DomainPtr domain, std::vector<cplx> closureValues) {
    if (static_cast<int>(closureValues.size()) != domain->closure_count())
      throw std::invalid_argument("closure value count does not match the domain");
    GraphFunction f(std::move(domain));
    f.values_ = std::move(closureValues);
    return f;
  }

  static GraphFunction constant(DomainPtr domain, cplx value) {
    GraphFunction f(std::move(domain));
    std::fill(f.values_.begin(), f.values_.end(), value);
    return f;
  }

  /// Indicator of a single vertex (by id), zero elsewhere.
  static GraphFunction delta(DomainPtr domain, const std::string& vertexId, cplx amplitude = 1.0) {
    const int c = domain->index_of(vertexId);
    if (c < 0) throw std::invalid_argument("vertex '" + vertexId + "' is not in the closure");
    GraphFunction f(std::move(domain));
    f.values_[c] = amplitude;
    return f;
  }

  const Domain& domain() const noexcept { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }

  cplx operator[](int c) const { return values_[c]; }
  cplx& operator[](int c) { return values_[c]; }

  cplx value_of(const std::string& vertexId) const {
    const int c = domain_->index_of(vertexId);
    if (c < 0) throw std::invalid_argument("vertex '" + vertexId + "' is not in the closure");
    return values_[c];
  }

  std::span<const cplx> values() const noexcept { return values_; }

  std::vector<cplx> interior_values() const {
    return {values_.begin(), values_.begin() + domain_->interior_count()};
  }

  bool is_dirichlet() const {
    for (int c = domain_->interior_count(); c < domain_->closure_count(); ++c)
      if (values_[c] != cplx(0.0, 0.0)) return false;
    return true;
  }

private:
  DomainPtr domain_;
  std::vector<cplx> values_;
};

inline void require_same_domain(const GraphFunction& f, const GraphFunction& g) {
  if (&f.domain() != &g.domain() && !f.domain().same_structure(g.domain()))
    throw std::invalid_argument("functions live on different domains");
}

inline void require_on_domain(const GraphFunction& f, const Domain& domain) {
  if (&f.domain() != &domain && !f.domain().same_structure(domain))
    throw std::invalid_argument("function does not live on the given domain");
}

inline void require_dirichlet(const GraphFunction& f, const char* what = "function") {
  if (!f.is_dirichlet())
    throw std::invalid_argument(std::string(what) + " violates the Dirichlet boundary condition");
}

}  // namespace graphpde
