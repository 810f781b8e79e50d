#pragma once

// JSON document {"n": .., "adj": [[[neighbor, reversePort], ...], ...]} and
// DOT export with port numbers as edge-end labels.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "xfam/port_graph.hpp"

namespace xfam {

inline nlohmann::json graph_to_json(const PortGraph& g) {
  nlohmann::json adj = nlohmann::json::array();
  for (const auto& ports : g.adjacency()) {
    nlohmann::json row = nlohmann::json::array();
    for (const HalfEdge& e : ports) row.push_back({e.node, e.port});
    adj.push_back(std::move(row));
  }
  return {{"n", g.size()}, {"adj", std::move(adj)}};
}

inline PortGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("adj"))
    throw InvalidParameter("graph document needs fields n and adj");
  const int n = doc.at("n").get<int>();
  const auto& rows = doc.at("adj");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw InvalidParameter("adj must hold one row per node");
  PortGraph::Adjacency adj(n);
  for (int u = 0; u < n; ++u) {
    for (const auto& pair : rows[u]) {
      if (!pair.is_array() || pair.size() != 2)
        throw InvalidParameter("adjacency entries are [neighbor, reversePort] pairs");
      adj[u].push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
  }
  PortGraph g(std::move(adj));
  require_valid(g);
  return g;
}

inline std::string graph_to_dot(const PortGraph& g, const std::string& name = "G") {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (NodeId u = 0; u < g.size(); ++u) out << "  n" << u << " [label=\"" << g.degree(u) << "\"];\n";
  for (NodeId u = 0; u < g.size(); ++u) {
    for (Port p = 0; p < g.degree(u); ++p) {
      const HalfEdge e = g.follow(u, p);
      if (u < e.node)
        out << "  n" << u << " -- n" << e.node << " [taillabel=\"" << p << "\", headlabel=\""
            << e.port << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

inline PortGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open graph file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter("malformed graph file " + path + ": " + e.what());
  }
  return graph_from_json(doc);
}

}  // namespace xfam
