#pragma once

// Universal exploration sequences at desk scale: offset walks, exhaustive
// verification against the all-graphs catalog, a greedy searcher, and the
// bounded exploration procedure R(N) built on them.
//
// Walk rule: at a node of degree d entered by port p, exit by (p + offset) mod d.
// The start node counts as entered by port 0. Stopping mid-sequence voids the
// coverage guarantee.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "xfam/agent.hpp"
#include "xfam/enumerate.hpp"

namespace xfam {

struct Uxs {
  int bound = 0;
  std::vector<int> offsets;

  friend bool operator==(const Uxs&, const Uxs&) = default;
};

struct UxsConfig {
  /// Largest bound for which R(N) replays an exhaustively verified sequence.
  int verified_cap = 5;
  /// Greedy steps allowed per search before giving up.
  long search_budget = 200000;
  /// Directory for persisted sequences; empty disables the disk cache.
  std::string cache_dir;
};

inline UxsConfig& uxs_config() {
  static UxsConfig cfg;
  return cfg;
}

/// Nodes visited by the offset walk, in ascending order.
inline std::vector<NodeId> uxs_walk(const PortGraph& g, NodeId start, const std::vector<int>& offsets) {
  if (!g.valid_node(start)) throw InvalidParameter("walk start is not a node of the graph");
  std::vector<char> seen(g.size(), 0);
  seen[start] = 1;
  NodeId at = start;
  Port entry = 0;
  for (int off : offsets) {
    const int d = g.degree(at);
    if (d == 0) break;
    const HalfEdge e = g.follow(at, static_cast<Port>((entry + off) % d));
    at = e.node;
    entry = e.port;
    seen[at] = 1;
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.size(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

namespace detail {

inline void require_uxs_bound(int n) {
  if (n > enumeration_caps().graphs || n > kMaxGraphCap)
    throw ResourceCap("UXS bound " + std::to_string(n) + " exceeds enumeration size cap " +
                      std::to_string(std::min(enumeration_caps().graphs, kMaxGraphCap)));
}

// One (graph, start) walk in progress, with visited nodes as a bitmask.
struct WalkState {
  const PortGraph* g;
  NodeId at;
  Port entry;
  std::uint32_t visited;
  std::uint32_t full;

  bool complete() const { return visited == full; }
  void apply(int off) {
    const int d = g->degree(at);
    const HalfEdge e = g->follow(at, static_cast<Port>((entry + off) % d));
    at = e.node;
    entry = e.port;
    visited |= 1u << at;
  }
  bool gains(int off) const {
    const int d = g->degree(at);
    return !(visited >> g->follow(at, static_cast<Port>((entry + off) % d)).node & 1u);
  }
};

inline std::vector<WalkState> all_walk_states(int bound) {
  std::vector<WalkState> states;
  for (int n = 2; n <= bound; ++n)
    for (const PortGraph& g : GraphCatalog::instance().graphs_of_size(n))
      for (NodeId s = 0; s < n; ++s)
        states.push_back(WalkState{&g, s, 0, 1u << s, (1u << n) - 1});
  return states;
}

// Shortest offset string completing a single walk (BFS over walk states).
inline std::vector<int> complete_one(const WalkState& from, int max_offset) {
  struct Key {
    NodeId at;
    Port entry;
    std::uint32_t visited;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::pair<Key, int>> parent;
  std::queue<WalkState> frontier;
  const Key root{from.at, from.entry, from.visited};
  parent.emplace(root, std::make_pair(root, -1));
  frontier.push(from);
  while (!frontier.empty()) {
    WalkState cur = frontier.front();
    frontier.pop();
    const Key ck{cur.at, cur.entry, cur.visited};
    if (cur.complete()) {
      std::vector<int> path;
      for (Key k = ck; !(k == root);) {
        const auto& [prev, off] = parent.at(k);
        path.push_back(off);
        k = prev;
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int off = 0; off <= max_offset; ++off) {
      WalkState nxt = cur;
      nxt.apply(off);
      const Key nk{nxt.at, nxt.entry, nxt.visited};
      if (parent.emplace(nk, std::make_pair(ck, off)).second) frontier.push(nxt);
    }
  }
  throw std::logic_error("walk cannot be completed; graph disconnected?");
}

}  // namespace detail

/// True iff the walk covers every graph of size <= n (one per port-isomorphism
/// class suffices: walks commute with relabeling) from every start.
inline bool verify_uxs(const std::vector<int>& offsets, int n) {
  if (n <= 1) return true;
  detail::require_uxs_bound(n);
  for (auto state : detail::all_walk_states(n)) {
    for (int off : offsets) {
      if (state.complete()) break;
      state.apply(off);
    }
    if (!state.complete()) return false;
  }
  return true;
}

inline bool verify_uxs(const Uxs& seq, int n) { return verify_uxs(seq.offsets, n); }

/// Greedy construction: append the offset that lets the most unfinished walks
/// reach a new node; if none does, append the shortest completion of the first
/// unfinished walk. Deterministic.
inline Uxs search_uxs(int n, long budget = uxs_config().search_budget) {
  if (n < 1) throw InvalidParameter("UXS bound must be >= 1");
  Uxs out{n, {}};
  if (n == 1) return out;
  detail::require_uxs_bound(n);
  auto states = detail::all_walk_states(n);
  const int max_offset = n - 2;
  long steps = 0;
  auto apply_all = [&](int off) {
    out.offsets.push_back(off);
    for (auto& s : states) s.apply(off);
    std::erase_if(states, [](const detail::WalkState& s) { return s.complete(); });
  };
  while (!states.empty()) {
    if (++steps > budget)
      throw ResourceCap("UXS search budget exhausted for N=" + std::to_string(n) + " with " +
                        std::to_string(states.size()) + " walks unfinished after " +
                        std::to_string(out.offsets.size()) + " offsets");
    int best = -1;
    std::size_t best_gain = 0;
    for (int off = 0; off <= max_offset; ++off) {
      std::size_t gain = 0;
      for (const auto& s : states) gain += s.gains(off);
      if (gain > best_gain) best_gain = gain, best = off;
    }
    if (best >= 0) {
      apply_all(best);
    } else {
      for (int off : detail::complete_one(states.front(), max_offset)) apply_all(off);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cache file: "N <bound>" then whitespace-separated offsets.

inline std::string uxs_to_text(const Uxs& u) {
  std::ostringstream out;
  out << "N " << u.bound << '\n';
  for (std::size_t i = 0; i < u.offsets.size(); ++i) out << (i ? " " : "") << u.offsets[i];
  out << '\n';
  return out.str();
}

inline Uxs uxs_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  Uxs u;
  if (!(in >> tag >> u.bound) || tag != "N") throw InvalidParameter("UXS file must start with 'N <bound>'");
  int off = 0;
  while (in >> off) {
    if (off < 0) throw InvalidParameter("UXS offsets must be nonnegative");
    u.offsets.push_back(off);
  }
  if (!in.eof()) throw InvalidParameter("UXS file holds a non-integer offset");
  return u;
}

inline Uxs load_uxs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open UXS file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return uxs_from_text(buf.str());
}

inline void save_uxs(const Uxs& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write UXS file " + path);
  out << uxs_to_text(u);
}

/// Verified sequence for bound n: memory cache, then disk cache (re-verified),
/// then a fresh search.
inline const Uxs& verified_uxs(int n) {
  static std::mutex mutex;
  static std::map<int, Uxs> memo;
  std::lock_guard lock(mutex);
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  const auto& dir = uxs_config().cache_dir;
  const std::string path = dir.empty() ? "" : dir + "/uxs_N" + std::to_string(n) + ".txt";
  if (!path.empty() && std::filesystem::exists(path)) {
    Uxs cached = load_uxs(path);
    if (cached.bound == n && verify_uxs(cached, n)) return memo.emplace(n, std::move(cached)).first->second;
  }
  Uxs fresh = search_uxs(n);
  if (!verify_uxs(fresh, n)) throw std::logic_error("searched UXS failed verification");
  if (!path.empty()) {
    std::filesystem::create_directories(dir);
    save_uxs(fresh, path);
  }
  return memo.emplace(n, std::move(fresh)).first->second;
}

// ---------------------------------------------------------------------------
// Agents

/// Replays the offsets from the current node, then returns (caller stops).
inline void replay_offsets(Walker& w, const std::vector<int>& offsets) {
  for (int off : offsets) {
    const int d = w.degree();
    if (d == 0) return;
    const Port entry = w.entry_port().value_or(0);
    w.move(static_cast<Port>((entry + off) % d));
  }
}

/// Visits every node within distance `radius` by walking all non-backtracking
/// paths of length <= radius, returning along each edge it took.
inline void sweep_nonbacktracking(Walker& w, int radius) {
  auto rec = [&](auto&& self, int depth, std::optional<Port> came_by) -> void {
    if (depth == radius) return;
    const int d = w.degree();
    for (Port p = 0; p < d; ++p) {
      if (came_by && p == *came_by) continue;
      const Observation o = w.move(p);
      self(self, depth + 1, o.entry_port);
      w.move(*o.entry_port);
    }
  };
  rec(rec, 0, std::nullopt);
}

/// R(N): visits all nodes of any graph of size <= N from any start. Replays a
/// verified UXS when N is within the verified cap; above it, sweeps all
/// non-backtracking paths of length N-1 (every node lies on one).
inline void explore_bounded(Walker& w, int n) {
  if (n <= 1) return;
  if (n <= uxs_config().verified_cap) {
    replay_offsets(w, verified_uxs(n).offsets);
  } else {
    sweep_nonbacktracking(w, n - 1);
  }
}

/// UXS replay agent for bound n; requires an exhaustively verifiable bound.
inline Agent r_agent(int n) {
  if (n > std::min(enumeration_caps().graphs, kMaxGraphCap))
    throw ConfigError("no verified UXS available for N=" + std::to_string(n));
  return Agent{"uxs:N=" + std::to_string(n), [n](Walker& w) {
                 if (n <= 1) return;
                 replay_offsets(w, verified_uxs(n).offsets);
               }};
}

/// R(M) as an agent, with the path-sweep fallback above the verified cap.
inline Agent bounded_exploration_agent(int n) {
  return Agent{"R:N=" + std::to_string(n), [n](Walker& w) { explore_bounded(w, n); }};
}

}  // namespace xfam
