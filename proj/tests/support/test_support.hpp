#pragma once

// Shared test utilities: deterministic random domains and random states.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graphpde/graphpde.hpp"

namespace testsupport {

using graphpde::cplx;

/// Random connected ambient graph (3..maxAmbient vertices) with a connected
/// interior subset grown by adjacency, so the boundary is always nonempty.
inline graphpde::DomainPtr random_domain(graphpde::SplitMix64& rng, int maxAmbient = 50) {
  const int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(maxAmbient - 2)));

  std::vector<std::pair<int, int>> edgePairs;
  std::set<std::pair<int, int>> have;
  auto addEdge = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == b || have.count({a, b})) return;
    have.insert({a, b});
    edgePairs.emplace_back(a, b);
  };
  for (int i = 1; i < n; ++i) addEdge(static_cast<int>(rng.below(i)), i);
  for (int tries = 0; tries < n; ++tries)
    addEdge(static_cast<int>(rng.below(n)), static_cast<int>(rng.below(n)));

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edgePairs) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  // Grow the interior from a random seed vertex along edges.
  const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
  std::vector<int> interior;
  std::vector<char> inS(static_cast<std::size_t>(n), 0);
  std::vector<int> frontier;
  const int seed = static_cast<int>(rng.below(n));
  interior.push_back(seed);
  inS[seed] = 1;
  while (static_cast<int>(interior.size()) < k) {
    frontier.clear();
    for (const int v : interior)
      for (const int w : adj[v])
        if (!inS[w]) frontier.push_back(w);
    const int pick = frontier[rng.below(frontier.size())];
    inS[pick] = 1;
    interior.push_back(pick);
  }

  auto name = [](int v) { return "v" + std::to_string(v); };
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(edgePairs.size());
  for (const auto& [a, b] : edgePairs) edges.emplace_back(name(a), name(b));
  std::vector<std::string> interiorIds;
  interiorIds.reserve(interior.size());
  for (const int v : interior) interiorIds.push_back(name(v));

  return graphpde::Domain::build(graphpde::Graph::from_edges(edges), interiorIds);
}

inline graphpde::GraphFunction random_dirichlet(const graphpde::DomainPtr& dom,
                                                graphpde::SplitMix64& rng, bool normalize = true) {
  std::vector<cplx> vals(static_cast<std::size_t>(dom->interior_count()));
  for (auto& v : vals) v = cplx(rng.normal(), rng.normal());
  auto f = graphpde::GraphFunction::dirichlet(dom, std::move(vals));
  if (normalize) {
    const double m = std::sqrt(graphpde::mass_norm_sq(f));
    if (m > 0.0)
      for (int x = 0; x < dom->interior_count(); ++x) f[x] /= m;
  }
  return f;
}

inline graphpde::GraphFunction random_closure(const graphpde::DomainPtr& dom,
                                              graphpde::SplitMix64& rng, bool normalize = true) {
  std::vector<cplx> vals(static_cast<std::size_t>(dom->closure_count()));
  for (auto& v : vals) v = cplx(rng.normal(), rng.normal());
  auto f = graphpde::GraphFunction::on_closure(dom, std::move(vals));
  if (normalize) {
    const double m = std::sqrt(graphpde::mass_norm_sq(f));
    if (m > 0.0)
      for (int c = 0; c < dom->closure_count(); ++c) f[c] /= m;
  }
  return f;
}

inline double max_abs_diff(const graphpde::GraphFunction& f, const graphpde::GraphFunction& g) {
  double m = 0.0;
  for (int c = 0; c < f.domain().closure_count(); ++c) m = std::max(m, std::abs(f[c] - g[c]));
  return m;
}

/// L2 distance in the mass norm.
inline double mass_distance(const graphpde::GraphFunction& f, const graphpde::GraphFunction& g) {
  double acc = 0.0;
  for (int c = 0; c < f.domain().closure_count(); ++c) acc += std::norm(f[c] - g[c]);
  return std::sqrt(acc);
}

/// P4 path domain 0-1-2-3 with interior {1,2}; Dirichlet spectrum {1, 3}.
inline graphpde::DomainPtr p4_domain() {
  return graphpde::Domain::build(
      graphpde::Graph::from_edges({{"0", "1"}, {"1", "2"}, {"2", "3"}}), {"1", "2"});
}

/// P3 path domain a-b-c with single interior vertex b of degree 2.
inline graphpde::DomainPtr p3_domain() {
  return graphpde::Domain::build(graphpde::Graph::from_edges({{"a", "b"}, {"b", "c"}}), {"b"});
}

}  // namespace testsupport
