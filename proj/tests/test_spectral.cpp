#include <catch2/catch_amalgamated.hpp>

#include "graphpde/graphpde.hpp"
#include "support/expm_oracle.hpp"
#include "support/test_support.hpp"

using namespace graphpde;

namespace {

double eigen_residual(const DirichletLaplacian& L, const Spectrum& spec) {
  const int n = spec.size();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double resSq = 0.0;
    for (int x = 0; x < n; ++x) {
      double acc = -spec.eigenvalue(j) * spec.phi(j, x);
      for (int y = 0; y < n; ++y) acc += L.matrix(x, y) * spec.phi(j, y);
      resSq += acc * acc;
    }
    worst = std::max(worst, std::sqrt(resSq));
  }
  return worst;
}

double orthonormality_defect(const Spectrum& spec) {
  const int n = spec.size();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int x = 0; x < n; ++x) dot += spec.phi(i, x) * spec.phi(j, x);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("assemble produces the Dirichlet Laplacian matrix") {
  SECTION("P3: single vertex of degree 2") {
    const auto L = assemble(testsupport::p3_domain());
    REQUIRE(L.matrix.rows() == 1);
    REQUIRE(L.matrix(0, 0) == 2.0);
  }
  SECTION("P4: tridiagonal block") {
    const auto L = assemble(testsupport::p4_domain());
    REQUIRE(L.matrix(0, 0) == 2.0);
    REQUIRE(L.matrix(1, 1) == 2.0);
    REQUIRE(L.matrix(0, 1) == -1.0);
    REQUIRE(L.matrix(1, 0) == -1.0);
  }
  SECTION("star center counts all leaves") {
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < 6; ++i) edges.emplace_back("c", "l" + std::to_string(i));
    const auto dom = Domain::build(Graph::from_edges(edges), {"c"});
    const auto L = assemble(dom);
    REQUIRE(L.matrix.rows() == 1);
    REQUIRE(L.matrix(0, 0) == 6.0);
  }
  SECTION("matrix is exactly symmetric on random domains") {
    SplitMix64 rng(31);
    const auto dom = testsupport::random_domain(rng, 40);
    const auto L = assemble(dom);
    for (int x = 0; x < L.matrix.rows(); ++x)
      for (int y = 0; y < L.matrix.cols(); ++y) REQUIRE(L.matrix(x, y) == L.matrix(y, x));
  }
}

TEST_CASE("eigendecompose: hand-computed spectra") {
  SECTION("1x1") {
    const auto spec = eigendecompose(assemble(testsupport::p3_domain()));
    REQUIRE(spec.eigenvalue(0) == 2.0);
    REQUIRE(spec.phi(0, 0) == 1.0);
  }
  SECTION("P4: eigenvalues 1 and 3 with symmetric/antisymmetric vectors") {
    const auto spec = eigendecompose(assemble(testsupport::p4_domain()));
    REQUIRE(std::abs(spec.eigenvalue(0) - 1.0) <= 1e-12);
    REQUIRE(std::abs(spec.eigenvalue(1) - 3.0) <= 1e-12);
    const double s = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(spec.phi(0, 0) - s) <= 1e-12);
    REQUIRE(std::abs(spec.phi(0, 1) - s) <= 1e-12);
    REQUIRE(std::abs(spec.phi(1, 0) - s) <= 1e-12);
    REQUIRE(std::abs(spec.phi(1, 1) + s) <= 1e-12);
  }
}

TEST_CASE("eigendecompose satisfies the spectrum invariants on random domains") {
  SplitMix64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const auto dom = testsupport::random_domain(rng, 50);
    const auto L = assemble(dom);
    const auto spec = eigendecompose(L);
    REQUIRE(spec.eigenvalue(0) > 0.0);
    for (int j = 1; j < spec.size(); ++j)
      REQUIRE(spec.eigenvalue(j) >= spec.eigenvalue(j - 1));
    REQUIRE(eigen_residual(L, spec) <= 1e-10 * std::max(1.0, spec.max_eigenvalue()));
    REQUIRE(orthonormality_defect(spec) <= 1e-10);
  }
}

TEST_CASE("eigendecompose reports non-convergence diagnostics") {
  REQUIRE_THROWS_AS(eigendecompose(assemble(testsupport::p4_domain()), 0), ConvergenceError);
}

TEST_CASE("spectral reconstruction and completeness") {
  SplitMix64 rng(41);
  const auto dom = testsupport::random_domain(rng, 40);
  const auto L = assemble(dom);
  const auto spec = eigendecompose(L);
  const int n = spec.size();

  double reconstruction = 0.0;
  double completeness = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double sumL = 0.0, sumI = 0.0;
      for (int j = 0; j < n; ++j) {
        sumL += spec.eigenvalue(j) * spec.phi(j, x) * spec.phi(j, y);
        sumI += spec.phi(j, x) * spec.phi(j, y);
      }
      reconstruction = std::max(reconstruction, std::abs(sumL - L.matrix(x, y)));
      completeness = std::max(completeness, std::abs(sumI - (x == y ? 1.0 : 0.0)));
    }
  REQUIRE(reconstruction <= 1e-10 * std::max(1.0, spec.max_eigenvalue()));
  REQUIRE(completeness <= 1e-10);
}

TEST_CASE("projection coefficients") {
  const auto dom = testsupport::p4_domain();
  const auto spec = eigendecompose(assemble(dom));
  SECTION("eigenfunctions project to a Kronecker delta") {
    for (int k = 0; k < spec.size(); ++k)
      for (int j = 0; j < spec.size(); ++j) {
        const cplx c = project(spec, spec.eigenfunction(k), j);
        REQUIRE(std::abs(c - cplx(j == k ? 1.0 : 0.0, 0.0)) <= 1e-12);
      }
  }
  SECTION("zero function") {
    const GraphFunction zero(dom);
    for (int j = 0; j < spec.size(); ++j) REQUIRE(project(spec, zero, j) == cplx(0.0, 0.0));
  }
  SECTION("delta at vertex 1 meets the hand computation") {
    const auto f = GraphFunction::delta(dom, "1");
    const double s = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(project(spec, f, 0) - cplx(s, 0.0)) <= 1e-12);
    REQUIRE(std::abs(project(spec, f, 1) - cplx(s, 0.0)) <= 1e-12);
  }
  SECTION("index out of range") {
    const auto f = GraphFunction::delta(dom, "1");
    REQUIRE_THROWS_AS(project(spec, f, 2), std::out_of_range);
    REQUIRE_THROWS_AS(project(spec, f, -1), std::out_of_range);
  }
}

TEST_CASE("schrodinger kernel") {
  SECTION("S_0 is the exact identity") {
    SplitMix64 rng(43);
    const auto dom = testsupport::random_domain(rng, 30);
    const auto K = schrodinger_kernel(eigendecompose(assemble(dom)), 0.0);
    for (int x = 0; x < K.rows(); ++x)
      for (int y = 0; y < K.cols(); ++y)
        REQUIRE(K(x, y) == cplx(x == y ? 1.0 : 0.0, 0.0));
  }
  SECTION("single-vertex kernel is a pure phase") {
    const auto spec = eigendecompose(assemble(testsupport::p3_domain()));
    const double t = 0.73;
    const auto K = schrodinger_kernel(spec, t);
    REQUIRE(std::abs(K(0, 0) - std::exp(cplx(0.0, -2.0 * t))) <= 1e-15);
  }
  SECTION("unitarity") {
    SplitMix64 rng(47);
    for (int i = 0; i < 5; ++i) {
      const auto dom = testsupport::random_domain(rng, 50);
      const auto spec = eigendecompose(assemble(dom));
      const double t = rng.uniform(-10.0, 10.0);
      const auto K = schrodinger_kernel(spec, t);
      REQUIRE(max_abs_diff_from_identity(product(K, adjoint(K))) <= 1e-10);
    }
  }
  SECTION("group property") {
    SplitMix64 rng(53);
    const auto dom = testsupport::random_domain(rng, 40);
    const auto spec = eigendecompose(assemble(dom));
    for (int i = 0; i < 5; ++i) {
      const double t = rng.uniform(-10.0, 10.0);
      const double s = rng.uniform(-10.0, 10.0);
      const auto lhs = schrodinger_kernel(spec, t + s);
      const auto rhs = product(schrodinger_kernel(spec, t), schrodinger_kernel(spec, s));
      REQUIRE(max_abs_diff(lhs, rhs) <= 1e-10);
    }
  }
}

TEST_CASE("kernel agrees with an independent matrix exponential") {
  SplitMix64 rng(59);
  for (int i = 0; i < 8; ++i) {
    const auto dom = testsupport::random_domain(rng, 20);
    const auto L = assemble(dom);
    const auto spec = eigendecompose(L);
    for (const double t : {0.1, 1.0, 5.0}) {
      const auto K = schrodinger_kernel(spec, t);
      const auto E = testsupport::expm_minus_it(L.matrix, t);
      REQUIRE(max_abs_diff(K, E) <= 1e-9);
    }
  }
}

TEST_CASE("eigenvector sign convention is deterministic") {
  SplitMix64 rng(61);
  const auto dom = testsupport::random_domain(rng, 30);
  const auto a = eigendecompose(assemble(dom));
  const auto b = eigendecompose(assemble(dom));
  for (int j = 0; j < a.size(); ++j)
    for (int x = 0; x < a.size(); ++x) REQUIRE(a.phi(j, x) == b.phi(j, x));
}
