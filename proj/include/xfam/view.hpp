#pragma once

// Truncated views: the depth-k truncation of the port-labeled universal cover
// rooted at a node. Backtracking edges are part of the unfolding, so a view is
// exactly what an agent can learn from non-backtracking labeled paths plus
// node degrees.

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "xfam/port_graph.hpp"

namespace xfam {

/// Rooted ordered tree stored as a hash-consed DAG: equal subtrees share a node.
class TruncatedView {
 public:
  static constexpr Port kNoEntry = -1;

  struct Node {
    Port entry_port = kNoEntry;  // port at this node leading back to its parent
    int degree = 0;
    std::vector<int> children;   // indexed by exit port; empty at the depth limit
    std::uint64_t hash = 0;
  };

  int depth() const { return depth_; }
  int root_id() const { return root_; }
  const Node& node(int id) const { return nodes_[id]; }
  const Node& root() const { return nodes_[root_]; }
  /// Distinct subtrees after sharing.
  std::size_t shared_size() const { return nodes_.size(); }

  /// `(entryPort:degree child...)`, children by exit port; the root has no entry port.
  std::string to_text() const {
    std::string out;
    append_text(root_, out);
    return out;
  }

 private:
  friend TruncatedView unfold_view(const PortGraph&, NodeId, int);

  void append_text(int id, std::string& out) const {
    const Node& nd = nodes_[id];
    out += '(';
    if (nd.entry_port != kNoEntry) out += std::to_string(nd.entry_port);
    out += ':';
    out += std::to_string(nd.degree);
    for (int c : nd.children) {
      out += ' ';
      append_text(c, out);
    }
    out += ')';
  }

  int depth_ = 0;
  int root_ = 0;
  std::vector<Node> nodes_;
};

inline TruncatedView unfold_view(const PortGraph& g, NodeId v, int k) {
  if (!g.valid_node(v)) throw InvalidParameter("view root is not a node of the graph");
  if (k < 0) throw InvalidParameter("view depth must be >= 0");

  TruncatedView view;
  view.depth_ = k;
  using Key = std::tuple<Port, int, std::vector<int>>;
  std::map<Key, int> interned;
  // memo[(node, entry, remaining)] -> view node id
  std::map<std::tuple<NodeId, Port, int>, int> memo;

  auto intern = [&](Port entry, int degree, std::vector<int> children) {
    Key key{entry, degree, children};
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    TruncatedView::Node nd{entry, degree, std::move(children), 0};
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(entry + 2);
    h = h * 1000003ull ^ static_cast<std::uint64_t>(degree);
    for (int c : nd.children) h = h * 1000003ull ^ view.nodes_[c].hash;
    nd.hash = h;
    const int id = static_cast<int>(view.nodes_.size());
    view.nodes_.push_back(std::move(nd));
    interned.emplace(std::move(key), id);
    return id;
  };

  auto build = [&](auto&& self, NodeId u, Port entry, int remaining) -> int {
    auto key = std::make_tuple(u, entry, remaining);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<int> children;
    if (remaining > 0) {
      children.reserve(g.degree(u));
      for (Port p = 0; p < g.degree(u); ++p) {
        const HalfEdge e = g.follow(u, p);
        children.push_back(self(self, e.node, e.port, remaining - 1));
      }
    }
    const int id = intern(entry, g.degree(u), std::move(children));
    memo.emplace(key, id);
    return id;
  };
  view.root_ = build(build, v, TruncatedView::kNoEntry, k);
  return view;
}

/// Structural equality of two views of the same depth.
inline bool views_equal(const TruncatedView& a, const TruncatedView& b) {
  if (a.depth() != b.depth()) throw InvalidParameter("views of different depths are not comparable");
  std::set<std::pair<int, int>> proven;
  auto eq = [&](auto&& self, int x, int y) -> bool {
    const auto& nx = a.node(x);
    const auto& ny = b.node(y);
    if (nx.hash != ny.hash || nx.entry_port != ny.entry_port || nx.degree != ny.degree ||
        nx.children.size() != ny.children.size())
      return false;
    if (proven.count({x, y})) return true;
    for (std::size_t i = 0; i < nx.children.size(); ++i)
      if (!self(self, nx.children[i], ny.children[i])) return false;
    proven.emplace(x, y);
    return true;
  };
  return eq(eq, a.root_id(), b.root_id());
}

/// Port-aware colour refinement on the disjoint union of two graphs. Round 0
/// colours by degree; round t+1 by (degree, per port: reverse port and the
/// neighbour's round-t colour). Equal round-k colours <=> equal depth-k views.
class JointRefinement {
 public:
  static constexpr int kForever = std::numeric_limits<int>::max();

  JointRefinement(const PortGraph& g, const PortGraph& h) : g_(g), h_(h) {
    const int total = g.size() + h.size();
    std::vector<int> colors(total);
    std::map<int, int> by_degree;
    for (int x = 0; x < total; ++x) {
      const int d = degree(x);
      auto [it, fresh] = by_degree.emplace(d, static_cast<int>(by_degree.size()));
      colors[x] = it->second;
    }
    history_.push_back(std::move(colors));
    class_counts_.push_back(static_cast<int>(by_degree.size()));
    // A round that adds no class fixes the partition for good.
    while (true) {
      refine();
      if (class_counts_.back() == class_counts_[class_counts_.size() - 2]) break;
    }
    stable_round_ = static_cast<int>(history_.size()) - 2;
  }

  /// Round after which the partition no longer changes.
  int stable_round() const { return stable_round_; }

  /// Compares v in the first graph with w in the second at depth k.
  bool equal_at(NodeId v, NodeId w, int k) const {
    const int round = std::min(k, stable_round_);
    return history_[round][v] == history_[round][g_.size() + w];
  }

  /// Largest k with equal depth-k views, or kForever if they agree at every depth.
  int agreement_depth(NodeId v, NodeId w) const {
    for (int t = 0; t <= stable_round_; ++t)
      if (history_[t][v] != history_[t][g_.size() + w]) return t - 1;
    return kForever;
  }

 private:
  int degree(int x) const { return x < g_.size() ? g_.degree(x) : h_.degree(x - g_.size()); }
  HalfEdge follow(int x, Port p) const {
    if (x < g_.size()) return g_.follow(x, p);
    HalfEdge e = h_.follow(x - g_.size(), p);
    e.node += g_.size();
    return e;
  }

  void refine() {
    const auto& prev = history_.back();
    const int total = static_cast<int>(prev.size());
    std::map<std::vector<int>, int> signatures;
    std::vector<int> next(total);
    std::vector<int> sig;
    for (int x = 0; x < total; ++x) {
      sig.clear();
      sig.push_back(degree(x));
      for (Port p = 0; p < degree(x); ++p) {
        const HalfEdge e = follow(x, p);
        sig.push_back(e.port);
        sig.push_back(prev[e.node]);
      }
      auto [it, fresh] = signatures.emplace(sig, static_cast<int>(signatures.size()));
      next[x] = it->second;
    }
    history_.push_back(std::move(next));
    class_counts_.push_back(static_cast<int>(signatures.size()));
  }

  const PortGraph& g_;
  const PortGraph& h_;
  std::vector<std::vector<int>> history_;
  std::vector<int> class_counts_;
  int stable_round_ = 0;
};

inline bool node_views_equal(const PortGraph& g, NodeId v, const PortGraph& h, NodeId w, int k) {
  if (!g.valid_node(v) || !h.valid_node(w)) throw InvalidParameter("view root is not a node of the graph");
  if (k < 0) throw InvalidParameter("view depth must be >= 0");
  return JointRefinement(g, h).equal_at(v, w, k);
}

/// Depth-k view of every node, in node order.
inline std::vector<TruncatedView> all_views(const PortGraph& g, int k) {
  std::vector<TruncatedView> out;
  out.reserve(g.size());
  for (NodeId v = 0; v < g.size(); ++v) out.push_back(unfold_view(g, v, k));
  return out;
}

/// Number of pairwise distinct depth-k views among the nodes of g.
inline int distinct_view_count(const PortGraph& g, int k) {
  const auto views = all_views(g, k);
  std::vector<int> reps;
  for (int v = 0; v < static_cast<int>(views.size()); ++v) {
    bool fresh = true;
    for (int r : reps)
      if (views_equal(views[r], views[v])) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(v);
  }
  return static_cast<int>(reps.size());
}

}  // namespace xfam
