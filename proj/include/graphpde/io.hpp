#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphpde/errors.hpp"
#include "graphpde/function.hpp"
#include "graphpde/graph.hpp"

namespace graphpde {

/// Parsed graph document: the validated domain plus optional initial data,
/// initial velocity and potential sections.
struct GraphDocument {
  DomainPtr domain;
  std::optional<GraphFunction> initial;
  std::optional<GraphFunction> initialVelocity;
  std::vector<double> potential;  // per interior vertex, zeros when absent
  bool hasPotential = false;
};

namespace detail {

inline GraphFunction parse_value_map(const nlohmann::json& node, const DomainPtr& domain,
                                     const char* section) {
  std::vector<cplx> values(static_cast<std::size_t>(domain->closure_count()), cplx(0.0, 0.0));
  if (!node.is_object())
    throw ParseError(std::string(section) + " must be an object of vertex -> [re, im]");
  for (const auto& [key, entry] : node.items()) {
    const int c = domain->index_of(key);
    if (c < 0)
      throw ParseError(std::string(section) + " refers to vertex '" + key +
                       "' outside the domain closure");
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
      throw ParseError(std::string(section) + " entry for '" + key + "' must be a [re, im] pair");
    const cplx v(entry[0].get<double>(), entry[1].get<double>());
    if (!domain->is_interior(c) && v != cplx(0.0, 0.0))
      throw ParseError(std::string(section) + " assigns a nonzero value to boundary vertex '" +
                       key + "'");
    values[static_cast<std::size_t>(c)] = v;
  }
  return GraphFunction::on_closure(domain, std::move(values));
}

}  // namespace detail

inline GraphDocument parse_graph_document(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid graph document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph document must be a JSON object");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw ParseError("graph document requires an 'edges' array");
  if (!doc.contains("interior") || !doc["interior"].is_array())
    throw ParseError("graph document requires an 'interior' array");

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw ParseError("each edge must be a pair of vertex identifiers");
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  std::vector<std::string> interior;
  for (const auto& v : doc["interior"]) {
    if (!v.is_string()) throw ParseError("interior entries must be vertex identifiers");
    interior.push_back(v.get<std::string>());
  }

  GraphDocument out;
  out.domain = Domain::build(Graph::from_edges(edges), interior);
  out.potential.assign(static_cast<std::size_t>(out.domain->interior_count()), 0.0);

  if (doc.contains("initial")) {
    out.initial = detail::parse_value_map(doc["initial"], out.domain, "initial");
  }
  if (doc.contains("initial_velocity")) {
    out.initialVelocity = detail::parse_value_map(doc["initial_velocity"], out.domain,
                                                  "initial_velocity");
  }
  if (doc.contains("potential")) {
    const auto& node = doc["potential"];
    if (!node.is_object()) throw ParseError("potential must be an object of vertex -> value");
    for (const auto& [key, entry] : node.items()) {
      const int c = out.domain->index_of(key);
      if (c < 0 || !out.domain->is_interior(c))
        throw ParseError("potential refers to non-interior vertex '" + key + "'");
      if (!entry.is_number()) throw ParseError("potential entry for '" + key + "' must be a number");
      const double v = entry.get<double>();
      if (!(v >= 0.0)) throw ParseError("potential at '" + key + "' must be nonnegative");
      out.potential[static_cast<std::size_t>(c)] = v;
    }
    out.hasPotential = true;
  }
  return out;
}

inline GraphDocument load_graph_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph_document(buf.str());
}

/// Canonical serialization of a domain: the closure-induced edge list in
/// closure order plus the interior list. Parsing the output reconstructs a
/// structurally identical domain (ambient vertices outside the closure are
/// not representable and are dropped).
inline std::string serialize_domain(const Domain& domain) {
  nlohmann::ordered_json doc;
  doc["edges"] = nlohmann::ordered_json::array();
  for (int x = 0; x < domain.closure_count(); ++x)
    for (const int y : domain.neighbors(x))
      if (y > x) doc["edges"].push_back({domain.id(x), domain.id(y)});
  doc["interior"] = nlohmann::ordered_json::array();
  for (int x = 0; x < domain.interior_count(); ++x) doc["interior"].push_back(domain.id(x));
  return doc.dump(2) + "\n";
}

}  // namespace graphpde
