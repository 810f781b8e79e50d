#pragma once

// Anonymous port-numbered graphs: the model, validation, canonical codes and
// the concrete constructions (clockwise rings, C_k, D_j).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xfam/error.hpp"

namespace xfam {

using NodeId = int;
using Port = int;

/// Far end of an edge seen from a port: the neighbor and the port it uses.
struct HalfEdge {
  NodeId node = 0;
  Port port = 0;

  friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

/// Finite connected simple graph with local port numbers 0..d-1 at each node.
///
/// Node ids are internal handles: agents only ever see degrees and ports.
/// The constructor does not validate; call validate() on untrusted input.
class PortGraph {
 public:
  using Adjacency = std::vector<std::vector<HalfEdge>>;

  PortGraph() = default;
  explicit PortGraph(Adjacency adj) : adj_(std::move(adj)) {}

  int size() const { return static_cast<int>(adj_.size()); }
  int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }
  HalfEdge follow(NodeId v, Port p) const { return adj_[v][p]; }
  const Adjacency& adjacency() const { return adj_; }

  int edge_count() const {
    std::size_t total = 0;
    for (const auto& ports : adj_) total += ports.size();
    return static_cast<int>(total / 2);
  }

  bool is_tree() const { return size() >= 1 && edge_count() == size() - 1; }

  bool valid_node(NodeId v) const { return v >= 0 && v < size(); }

  friend bool operator==(const PortGraph&, const PortGraph&) = default;

 private:
  Adjacency adj_;
};

/// Names the first violated model invariant, or nullopt if the graph is valid.
inline std::optional<std::string> validate(const PortGraph& g) {
  const int n = g.size();
  if (n < 1) return "node count";
  for (NodeId u = 0; u < n; ++u) {
    for (Port p = 0; p < g.degree(u); ++p) {
      const HalfEdge e = g.follow(u, p);
      if (e.node < 0 || e.node >= n) return "neighbor out of range";
      if (e.port < 0 || e.port >= g.degree(e.node)) return "reverse port out of range";
      const HalfEdge back = g.follow(e.node, e.port);
      if (back.node != u || back.port != p) return "port symmetry";
      if (e.node == u) return "self-loop";
    }
    for (Port p = 0; p < g.degree(u); ++p)
      for (Port q = p + 1; q < g.degree(u); ++q)
        if (g.follow(u, p).node == g.follow(u, q).node) return "parallel edge";
  }
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const HalfEdge& e : g.adjacency()[u]) {
      if (!seen[e.node]) {
        seen[e.node] = 1;
        ++reached;
        stack.push_back(e.node);
      }
    }
  }
  if (reached != n) return "connected";
  return std::nullopt;
}

inline void require_valid(const PortGraph& g) {
  if (auto violation = validate(g)) throw InvalidParameter("invalid graph: " + *violation);
}

// ---------------------------------------------------------------------------
// Canonical codes

/// Isomorphism-invariant serialization: n, then per node its degree followed by
/// (neighbor, reversePort) per port. Orders by size first because n leads.
struct CanonicalCode {
  std::vector<std::uint32_t> symbols;

  int graph_size() const { return symbols.empty() ? 0 : static_cast<int>(symbols.front()); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(symbols[i]);
    }
    return out;
  }

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
};

namespace detail {

// Relabels nodes in the order a port-ordered BFS from `root` discovers them.
inline std::vector<NodeId> bfs_labeling(const PortGraph& g, NodeId root) {
  std::vector<NodeId> label(g.size(), -1);
  std::vector<NodeId> order;
  order.reserve(g.size());
  label[root] = 0;
  order.push_back(root);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeId u = order[head];
    for (const HalfEdge& e : g.adjacency()[u]) {
      if (label[e.node] < 0) {
        label[e.node] = static_cast<NodeId>(order.size());
        order.push_back(e.node);
      }
    }
  }
  return label;
}

inline std::vector<std::uint32_t> serialize_relabeled(const PortGraph& g,
                                                      const std::vector<NodeId>& label) {
  const int n = g.size();
  std::vector<NodeId> node_at(n);
  for (NodeId u = 0; u < n; ++u) node_at[label[u]] = u;
  std::vector<std::uint32_t> out;
  out.reserve(1 + n + 4 * static_cast<std::size_t>(g.edge_count()));
  out.push_back(static_cast<std::uint32_t>(n));
  for (NodeId l = 0; l < n; ++l) {
    const NodeId u = node_at[l];
    out.push_back(static_cast<std::uint32_t>(g.degree(u)));
    for (const HalfEdge& e : g.adjacency()[u]) {
      out.push_back(static_cast<std::uint32_t>(label[e.node]));
      out.push_back(static_cast<std::uint32_t>(e.port));
    }
  }
  return out;
}

}  // namespace detail

/// Least serialization over the BFS relabelings rooted at each node.
///
/// A port-preserving isomorphism between connected graphs is fixed by the
/// image of a single node, so minimizing over roots is complete.
inline CanonicalCode canonical_code(const PortGraph& g) {
  require_valid(g);
  CanonicalCode best;
  for (NodeId root = 0; root < g.size(); ++root) {
    auto candidate = detail::serialize_relabeled(g, detail::bfs_labeling(g, root));
    if (root == 0 || candidate < best.symbols) best.symbols = std::move(candidate);
  }
  return best;
}

/// Unchecked variant for hot loops over graphs already known to be valid.
inline CanonicalCode canonical_code_unchecked(const PortGraph& g) {
  CanonicalCode best;
  for (NodeId root = 0; root < g.size(); ++root) {
    auto candidate = detail::serialize_relabeled(g, detail::bfs_labeling(g, root));
    if (root == 0 || candidate < best.symbols) best.symbols = std::move(candidate);
  }
  return best;
}

/// Node -> label map under which g serializes to canonical_code(g). Unique up
/// to automorphisms of g.
inline std::vector<NodeId> canonical_labeling(const PortGraph& g) {
  require_valid(g);
  std::vector<NodeId> best_label;
  std::vector<std::uint32_t> best;
  for (NodeId root = 0; root < g.size(); ++root) {
    auto label = detail::bfs_labeling(g, root);
    auto candidate = detail::serialize_relabeled(g, label);
    if (root == 0 || candidate < best) {
      best = std::move(candidate);
      best_label = std::move(label);
    }
  }
  return best_label;
}

/// Rebuilds the graph a canonical code describes (node i = label i).
inline PortGraph graph_from_code(const CanonicalCode& code) {
  const auto& s = code.symbols;
  if (s.empty()) throw InvalidParameter("empty canonical code");
  const int n = static_cast<int>(s[0]);
  PortGraph::Adjacency adj(n);
  std::size_t pos = 1;
  for (NodeId u = 0; u < n; ++u) {
    if (pos >= s.size()) throw InvalidParameter("truncated canonical code");
    const auto d = s[pos++];
    for (std::uint32_t p = 0; p < d; ++p) {
      if (pos + 1 >= s.size()) throw InvalidParameter("truncated canonical code");
      adj[u].push_back({static_cast<NodeId>(s[pos]), static_cast<Port>(s[pos + 1])});
      pos += 2;
    }
  }
  if (pos != s.size()) throw InvalidParameter("trailing symbols in canonical code");
  PortGraph g(std::move(adj));
  require_valid(g);
  return g;
}

/// True iff some node bijection preserves adjacency and every port number.
inline bool port_isomorphic(const PortGraph& g, const PortGraph& h) {
  if (g.size() != h.size() || g.edge_count() != h.edge_count()) return false;
  return canonical_code(g) == canonical_code(h);
}

// ---------------------------------------------------------------------------
// Constructions. Port 1 leads clockwise, port 0 counterclockwise.

inline PortGraph build_clockwise_ring(int s) {
  if (s < 3) throw InvalidParameter("ring size must be at least 3");
  PortGraph::Adjacency adj(s);
  for (NodeId i = 0; i < s; ++i) {
    adj[i] = {HalfEdge{(i - 1 + s) % s, 1}, HalfEdge{(i + 1) % s, 0}};
  }
  return PortGraph(std::move(adj));
}

/// C_k: ring R_k plus a pendant at node 0 via port 2. Pendant is node k.
inline PortGraph build_c(int k) {
  if (k < 3) throw InvalidParameter("C_k needs k >= 3");
  auto adj = build_clockwise_ring(k).adjacency();
  adj[0].push_back({k, 0});
  adj.push_back({HalfEdge{0, 2}});
  return PortGraph(std::move(adj));
}

inline constexpr NodeId c_hub(int /*k*/) { return 0; }
inline constexpr NodeId c_pendant(int k) { return k; }

/// D_j: ring R_{6j}, a pendant (port 2) at every third ring node, and a second
/// pendant (port 3) at ring node 0, the unique degree-4 node.
inline PortGraph build_d(int j) {
  if (j < 1) throw InvalidParameter("D_j needs j >= 1");
  const int ring = 6 * j;
  auto adj = build_clockwise_ring(ring).adjacency();
  for (int t = 0; t < 2 * j; ++t) {
    const NodeId anchor = 3 * t;
    const NodeId leaf = static_cast<NodeId>(adj.size());
    adj[anchor].push_back({leaf, 0});
    adj.push_back({HalfEdge{anchor, 2}});
  }
  const NodeId extra = static_cast<NodeId>(adj.size());
  adj[0].push_back({extra, 0});
  adj.push_back({HalfEdge{0, 3}});
  return PortGraph(std::move(adj));
}

inline constexpr NodeId d_hub(int /*j*/) { return 0; }
/// Ring node antipodal to the degree-4 node.
inline constexpr NodeId d_antipode(int j) { return 3 * j; }

}  // namespace xfam
