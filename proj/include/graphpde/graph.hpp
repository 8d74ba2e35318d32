#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphpde/errors.hpp"

namespace graphpde {

/// Undirected simple graph over string vertex identifiers. Vertices are
/// indexed by first appearance in the edge list; adjacency lists are sorted.
class Graph {
public:
  static Graph from_edges(const std::vector<std::pair<std::string, std::string>>& edges) {
    Graph g;
    auto intern = [&g](const std::string& id) {
      if (id.empty()) throw ParseError("empty vertex identifier");
      for (const char ch : id)
        if (std::isspace(static_cast<unsigned char>(ch)))
          throw ParseError("vertex identifier '" + id + "' contains whitespace");
      auto it = g.index_.find(id);
      if (it != g.index_.end()) return it->second;
      const int v = static_cast<int>(g.ids_.size());
      g.ids_.push_back(id);
      g.index_.emplace(id, v);
      g.adj_.emplace_back();
      return v;
    };

    for (const auto& [a, b] : edges) {
      const int x = intern(a);
      const int y = intern(b);
      if (x == y) throw ParseError("self-loop at vertex '" + a + "'");
      if (std::find(g.adj_[x].begin(), g.adj_[x].end(), y) != g.adj_[x].end())
        throw ParseError("duplicate edge between '" + a + "' and '" + b + "'");
      g.adj_[x].push_back(y);
      g.adj_[y].push_back(x);
    }
    for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());
    return g;
  }

  int vertex_count() const noexcept { return static_cast<int>(ids_.size()); }
  const std::string& id(int v) const { return ids_[v]; }

  /// Index of a vertex id, or -1 when absent.
  int index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
  }

  std::span<const int> neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  bool adjacent(int x, int y) const {
    const auto& nbrs = adj_[x];
    return std::binary_search(nbrs.begin(), nbrs.end(), y);
  }

  Graph() = default;

private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;
};

/// Induced subgraph with Dirichlet boundary: interior set S (ordered as
/// given), boundary dS = vertices outside S adjacent to S, closure
/// cl(S) = S + dS. Closure-local indices put the interior first (0..|S|-1,
/// in input order) followed by the boundary; adjacency is restricted to the
/// closure. Immutable after construction.
class Domain {
public:
  static std::shared_ptr<const Domain> build(Graph graph, const std::vector<std::string>& interior) {
    if (interior.empty()) throw ParseError("interior vertex list is empty");

    std::vector<int> interiorAmbient;
    interiorAmbient.reserve(interior.size());
    std::vector<char> inS(static_cast<std::size_t>(graph.vertex_count()), 0);
    for (const auto& id : interior) {
      const int v = graph.index_of(id);
      if (v < 0) throw ParseError("interior vertex '" + id + "' does not appear in the edge list");
      if (inS[v]) throw ParseError("duplicate interior vertex '" + id + "'");
      inS[v] = 1;
      interiorAmbient.push_back(v);
    }

    // Connectivity of the induced subgraph G(S).
    {
      std::vector<char> seen(static_cast<std::size_t>(graph.vertex_count()), 0);
      std::queue<int> frontier;
      frontier.push(interiorAmbient.front());
      seen[interiorAmbient.front()] = 1;
      int reached = 1;
      while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (const int w : graph.neighbors(v))
          if (inS[w] && !seen[w]) {
            seen[w] = 1;
            ++reached;
            frontier.push(w);
          }
      }
      if (reached != static_cast<int>(interiorAmbient.size()))
        throw ParseError("the induced subgraph on the interior set is disconnected");
    }

    // Boundary discovery order depends only on the interior order and vertex
    // ids, so re-parsing a serialized domain reproduces the same layout.
    std::vector<int> boundaryAmbient;
    {
      std::vector<char> inBoundary(static_cast<std::size_t>(graph.vertex_count()), 0);
      for (const int v : interiorAmbient) {
        std::vector<int> candidates;
        for (const int w : graph.neighbors(v))
          if (!inS[w] && !inBoundary[w]) candidates.push_back(w);
        std::sort(candidates.begin(), candidates.end(),
                  [&graph](int a, int b) { return graph.id(a) < graph.id(b); });
        for (const int w : candidates) {
          inBoundary[w] = 1;
          boundaryAmbient.push_back(w);
        }
      }
    }
    if (boundaryAmbient.empty())
      throw ParseError("the boundary is empty: every vertex of the graph is interior");

    auto d = std::make_shared<Domain>(PrivateTag{});
    d->graph_ = std::move(graph);
    d->interiorCount_ = static_cast<int>(interiorAmbient.size());

    std::vector<int> closureAmbient = interiorAmbient;
    closureAmbient.insert(closureAmbient.end(), boundaryAmbient.begin(), boundaryAmbient.end());

    std::unordered_map<int, int> localOf;
    localOf.reserve(closureAmbient.size());
    for (int c = 0; c < static_cast<int>(closureAmbient.size()); ++c)
      localOf.emplace(closureAmbient[c], c);

    d->ids_.reserve(closureAmbient.size());
    d->adj_.resize(closureAmbient.size());
    for (int c = 0; c < static_cast<int>(closureAmbient.size()); ++c) {
      const int v = closureAmbient[c];
      d->ids_.push_back(d->graph_.id(v));
      d->indexOf_.emplace(d->graph_.id(v), c);
      for (const int w : d->graph_.neighbors(v)) {
        auto it = localOf.find(w);
        if (it != localOf.end()) d->adj_[c].push_back(it->second);
      }
      std::sort(d->adj_[c].begin(), d->adj_[c].end());
    }
    d->dropped_ = d->graph_.vertex_count() - static_cast<int>(closureAmbient.size());
    return d;
  }

  const Graph& graph() const noexcept { return graph_; }

  int interior_count() const noexcept { return interiorCount_; }
  int closure_count() const noexcept { return static_cast<int>(ids_.size()); }
  int boundary_count() const noexcept { return closure_count() - interiorCount_; }
  bool is_interior(int c) const noexcept { return c < interiorCount_; }

  const std::string& id(int c) const { return ids_[c]; }

  /// Closure-local index of a vertex id, or -1 when the vertex is not in cl(S).
  int index_of(const std::string& id) const {
    auto it = indexOf_.find(id);
    return it == indexOf_.end() ? -1 : it->second;
  }

  /// Neighbors within the closure, as sorted closure-local indices.
  std::span<const int> neighbors(int c) const { return adj_[c]; }

  /// Degree counted within the closure. For interior vertices this equals the
  /// ambient degree (every neighbor of an interior vertex lies in cl(S)).
  int degree(int c) const { return static_cast<int>(adj_[c].size()); }

  bool adjacent(int x, int y) const {
    const auto& nbrs = adj_[x];
    return std::binary_search(nbrs.begin(), nbrs.end(), y);
  }

  /// Ambient vertices that ended up outside the closure (reported as warnings).
  int dropped_vertex_count() const noexcept { return dropped_; }

  /// Structural equality of the discretized domain: same closure vertices in
  /// the same order with the same restricted adjacency. Ambient vertices
  /// outside the closure do not participate.
  bool same_structure(const Domain& other) const {
    return interiorCount_ == other.interiorCount_ && ids_ == other.ids_ && adj_ == other.adj_;
  }

  struct PrivateTag {};
  explicit Domain(PrivateTag) {}

private:
  Graph graph_;
  int interiorCount_ = 0;
  int dropped_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> indexOf_;
  std::vector<std::vector<int>> adj_;
};

using DomainPtr = std::shared_ptr<const Domain>;

}  // namespace graphpde
