#pragma once

// Canonical enumeration of all connected port-numbered graphs (and of all
// port-numbered trees): one representative per port-isomorphism class,
// ordered by size, then by canonical code. Single-node graphs are excluded.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "xfam/port_graph.hpp"

namespace xfam {

/// Hard ceiling for whole-space enumeration: K6 alone has 120^6 labelings.
inline constexpr int kMaxGraphCap = 5;
inline constexpr int kMaxTreeCap = 9;

struct EnumerationCaps {
  int graphs = 5;
  int trees = 8;
};

inline EnumerationCaps& enumeration_caps() {
  static EnumerationCaps caps;
  return caps;
}

namespace detail {

// Undirected simple graph on n <= 9 labeled nodes as neighbor lists.
using Skeleton = std::vector<std::vector<int>>;

inline bool skeleton_connected(const Skeleton& s) {
  const int n = static_cast<int>(s.size());
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : s[u])
      if (!seen[v]) seen[v] = 1, ++reached, stack.push_back(v);
  }
  return reached == n;
}

// All connected simple graphs on n nodes, one per (unlabeled) isomorphism class.
inline std::vector<Skeleton> connected_skeletons(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  const int m = static_cast<int>(pairs.size());
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::vector<int>> pair_index(n, std::vector<int>(n, -1));
  for (int e = 0; e < m; ++e) {
    pair_index[pairs[e].first][pairs[e].second] = e;
    pair_index[pairs[e].second][pairs[e].first] = e;
  }

  std::vector<Skeleton> out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) < n - 1) continue;
    std::uint32_t least = mask;
    for (const auto& p : perms) {
      std::uint32_t image = 0;
      for (int e = 0; e < m; ++e)
        if (mask >> e & 1u) image |= 1u << pair_index[p[pairs[e].first]][p[pairs[e].second]];
      least = std::min(least, image);
      if (least < mask) break;
    }
    if (least != mask) continue;
    Skeleton s(n);
    for (int e = 0; e < m; ++e)
      if (mask >> e & 1u) {
        s[pairs[e].first].push_back(pairs[e].second);
        s[pairs[e].second].push_back(pairs[e].first);
      }
    if (skeleton_connected(s)) out.push_back(std::move(s));
  }
  return out;
}

// AHU encoding of a tree rooted at `root`.
inline std::string ahu_encode(const Skeleton& t, int root, int parent) {
  std::vector<std::string> kids;
  for (int c : t[root])
    if (c != parent) kids.push_back(ahu_encode(t, c, root));
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  for (auto& k : kids) out += k;
  return out + ")";
}

inline std::string tree_shape_code(const Skeleton& t) {
  std::string best;
  for (int r = 0; r < static_cast<int>(t.size()); ++r) {
    auto c = ahu_encode(t, r, -1);
    if (r == 0 || c < best) best = std::move(c);
  }
  return best;
}

// All unlabeled trees on n nodes, grown leaf by leaf.
inline std::vector<Skeleton> tree_skeletons(int n) {
  std::vector<Skeleton> level{Skeleton{{1}, {0}}};
  if (n <= 2) return n == 2 ? level : std::vector<Skeleton>{};
  for (int size = 3; size <= n; ++size) {
    std::map<std::string, Skeleton> next;
    for (const auto& t : level) {
      for (int u = 0; u < size - 1; ++u) {
        Skeleton grown = t;
        grown.push_back({u});
        grown[u].push_back(size - 1);
        next.emplace(tree_shape_code(grown), std::move(grown));
      }
    }
    level.clear();
    for (auto& [code, t] : next) level.push_back(std::move(t));
  }
  return level;
}

// Fixed-capacity port graph used while sweeping labelings; avoids heap
// traffic in the hot loop (K5 alone has 24^5 labelings).
struct SmallGraph {
  static constexpr int kNodes = 10;
  static constexpr int kDegree = 9;
  int n = 0;
  std::array<int, kNodes> deg{};
  std::array<std::array<int, kDegree>, kNodes> nbr{};
  std::array<std::array<int, kDegree>, kNodes> rev{};
};

// Writes the BFS serialization from `root` into `out`, giving up as soon as it
// compares greater than `best` (when best_len > 0). Returns the length written,
// or 0 if the candidate lost.
inline int small_code(const SmallGraph& g, int root, std::uint32_t* out, const std::uint32_t* best,
                      int best_len) {
  std::array<int, SmallGraph::kNodes> label;
  std::array<int, SmallGraph::kNodes> order;
  label.fill(-1);
  label[root] = 0;
  order[0] = root;
  int discovered = 1;
  int len = 0;
  bool tied = best_len > 0;
  auto emit = [&](std::uint32_t x) {
    if (tied) {
      if (x > best[len]) return false;
      if (x < best[len]) tied = false;
    }
    out[len++] = x;
    return true;
  };
  if (!emit(static_cast<std::uint32_t>(g.n))) return 0;
  for (int head = 0; head < g.n; ++head) {
    const int u = order[head];
    if (!emit(static_cast<std::uint32_t>(g.deg[u]))) return 0;
    for (int p = 0; p < g.deg[u]; ++p) {
      const int v = g.nbr[u][p];
      if (label[v] < 0) {
        label[v] = discovered;
        order[discovered++] = v;
      }
      if (!emit(static_cast<std::uint32_t>(label[v]))) return 0;
      if (!emit(static_cast<std::uint32_t>(g.rev[u][p]))) return 0;
    }
  }
  return len;
}

// Canonical code of a SmallGraph, zero-padded; codes are self-delimiting.
// Length is 1 + n + 4|E|, at most 46 for any graph on 5 nodes or tree on 10.
using SmallCode = std::array<std::uint8_t, 48>;

struct SmallCodeHash {
  std::size_t operator()(const SmallCode& c) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : c) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

inline SmallCode small_canonical(const SmallGraph& g) {
  constexpr int kMax = 1 + SmallGraph::kNodes * (1 + 2 * SmallGraph::kDegree);
  std::array<std::uint32_t, kMax> best;
  std::array<std::uint32_t, kMax> scratch;
  int best_len = 0;
  for (int root = 0; root < g.n; ++root) {
    const int len = small_code(g, root, scratch.data(), best.data(), best_len);
    if (len > 0) {
      std::copy_n(scratch.begin(), len, best.begin());
      best_len = len;
    }
  }
  if (best_len > static_cast<int>(std::tuple_size_v<SmallCode>))
    throw ResourceCap("graph too dense for the enumeration key");
  SmallCode out{};
  for (int i = 0; i < best_len; ++i) out[i] = static_cast<std::uint8_t>(best[i]);
  return out;
}

inline CanonicalCode unpack_small_code(const SmallCode& c) {
  CanonicalCode code;
  const int n = c[0];
  std::size_t pos = 1;
  code.symbols.push_back(static_cast<std::uint32_t>(n));
  for (int u = 0; u < n; ++u) {
    const int d = c[pos++];
    code.symbols.push_back(static_cast<std::uint32_t>(d));
    for (int k = 0; k < 2 * d; ++k) code.symbols.push_back(c[pos++]);
  }
  return code;
}

// Port orders at node 0 worth sweeping: one per orbit of the automorphisms
// fixing node 0. Every port-isomorphism class keeps a representative whose
// node-0 order is the orbit minimum, so the others can be skipped.
inline std::vector<std::vector<int>> node0_orders(const Skeleton& s) {
  const int n = static_cast<int>(s.size());
  std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
  for (int u = 0; u < n; ++u)
    for (int v : s[u]) adjacent[u][v] = 1;
  std::vector<std::vector<int>> stabilizer;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 7) {
    do {
      if (perm[0] != 0) break;
      bool automorphism = true;
      for (int u = 0; u < n && automorphism; ++u)
        for (int v : s[u])
          if (!adjacent[perm[u]][perm[v]]) {
            automorphism = false;
            break;
          }
      if (automorphism) stabilizer.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    stabilizer.push_back(perm);
  }
  std::vector<int> order = s[0];
  std::sort(order.begin(), order.end());
  std::vector<std::vector<int>> keep;
  do {
    bool least = true;
    for (const auto& h : stabilizer) {
      std::vector<int> image(order.size());
      for (std::size_t k = 0; k < order.size(); ++k) image[k] = h[order[k]];
      if (image < order) {
        least = false;
        break;
      }
    }
    if (least) keep.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return keep;
}

// Calls `sink` with a port labeling of the skeleton from every
// port-isomorphism class it carries (usually several per class).
template <typename Sink>
void for_each_port_labeling(const Skeleton& s, Sink&& sink) {
  SmallGraph g;
  g.n = static_cast<int>(s.size());
  if (g.n > SmallGraph::kNodes) throw ResourceCap("skeleton too large for labeling sweep");
  std::vector<std::vector<int>> order = s;
  for (int u = 0; u < g.n; ++u) {
    std::sort(order[u].begin(), order[u].end());
    g.deg[u] = static_cast<int>(order[u].size());
  }
  std::array<std::array<int, SmallGraph::kNodes>, SmallGraph::kNodes> port_of{};

  auto rec = [&](auto&& self, int u) -> void {
    if (u == g.n) {
      for (int a = 0; a < g.n; ++a)
        for (int p = 0; p < g.deg[a]; ++p) {
          const int b = order[a][p];
          g.nbr[a][p] = b;
          g.rev[a][p] = port_of[b][a];
        }
      sink(g);
      return;
    }
    auto& o = order[u];
    std::sort(o.begin(), o.end());
    do {
      for (int p = 0; p < g.deg[u]; ++p) port_of[u][o[p]] = p;
      self(self, u + 1);
    } while (std::next_permutation(o.begin(), o.end()));
  };
  for (const auto& first : node0_orders(s)) {
    order[0] = first;
    for (int p = 0; p < g.deg[0]; ++p) port_of[0][first[p]] = p;
    rec(rec, 1);
  }
}

inline std::vector<PortGraph> port_classes(const std::vector<Skeleton>& skeletons) {
  std::unordered_set<SmallCode, SmallCodeHash> seen;
  for (const auto& s : skeletons)
    for_each_port_labeling(s, [&](const SmallGraph& g) { seen.insert(small_canonical(g)); });
  std::vector<CanonicalCode> codes;
  codes.reserve(seen.size());
  for (const auto& c : seen) codes.push_back(unpack_small_code(c));
  std::sort(codes.begin(), codes.end());
  std::vector<PortGraph> out;
  out.reserve(codes.size());
  for (const auto& c : codes) out.push_back(graph_from_code(c));
  return out;
}

}  // namespace detail

/// Lazily built per-size catalogs; thread-safe, built once per process.
class GraphCatalog {
 public:
  static GraphCatalog& instance() {
    static GraphCatalog catalog;
    return catalog;
  }

  const std::vector<PortGraph>& graphs_of_size(int n) {
    if (n < 2 || n > kMaxGraphCap)
      throw ResourceCap("all-graphs enumeration supports sizes 2.." + std::to_string(kMaxGraphCap));
    std::lock_guard lock(mutex_);
    auto it = graphs_.find(n);
    if (it == graphs_.end())
      it = graphs_.emplace(n, detail::port_classes(detail::connected_skeletons(n))).first;
    return it->second;
  }

  const std::vector<PortGraph>& trees_of_size(int n) {
    if (n < 2 || n > kMaxTreeCap)
      throw ResourceCap("tree enumeration supports sizes 2.." + std::to_string(kMaxTreeCap));
    std::lock_guard lock(mutex_);
    auto it = trees_.find(n);
    if (it == trees_.end())
      it = trees_.emplace(n, detail::port_classes(detail::tree_skeletons(n))).first;
    return it->second;
  }

 private:
  GraphCatalog() = default;
  std::mutex mutex_;
  std::map<int, std::vector<PortGraph>> graphs_;
  std::map<int, std::vector<PortGraph>> trees_;
};

namespace detail {

template <typename BySize>
PortGraph nth_in_catalog(int i, int cap, const char* what, BySize&& by_size) {
  if (i < 1) throw InvalidParameter(std::string(what) + " index must be >= 1");
  std::size_t remaining = static_cast<std::size_t>(i);
  for (int n = 2; n <= cap; ++n) {
    const auto& block = by_size(n);
    if (remaining <= block.size()) return block[remaining - 1];
    remaining -= block.size();
  }
  throw ResourceCap(std::string(what) + " index " + std::to_string(i) + " lies beyond size cap " +
                    std::to_string(cap));
}

}  // namespace detail

/// H_i: the i-th connected port-numbered graph (1-based).
inline PortGraph enumerate_all_graphs(int i, int cap = enumeration_caps().graphs) {
  if (cap > kMaxGraphCap)
    throw ResourceCap("size cap " + std::to_string(cap) + " exceeds supported maximum " +
                      std::to_string(kMaxGraphCap));
  return detail::nth_in_catalog(i, cap, "graph", [](int n) -> const std::vector<PortGraph>& {
    return GraphCatalog::instance().graphs_of_size(n);
  });
}

inline PortGraph enumerate_all_trees(int i, int cap = enumeration_caps().trees) {
  if (cap > kMaxTreeCap)
    throw ResourceCap("tree size cap " + std::to_string(cap) + " exceeds supported maximum " +
                      std::to_string(kMaxTreeCap));
  return detail::nth_in_catalog(i, cap, "tree", [](int n) -> const std::vector<PortGraph>& {
    return GraphCatalog::instance().trees_of_size(n);
  });
}

/// Number of enumerated graphs of size <= max_size.
inline std::size_t all_graphs_count(int max_size) {
  std::size_t total = 0;
  for (int n = 2; n <= max_size; ++n) total += GraphCatalog::instance().graphs_of_size(n).size();
  return total;
}

inline std::size_t all_trees_count(int max_size) {
  std::size_t total = 0;
  for (int n = 2; n <= max_size; ++n) total += GraphCatalog::instance().trees_of_size(n).size();
  return total;
}

}  // namespace xfam
