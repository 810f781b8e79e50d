#pragma once

// Families of graphs in canonical order, explorability witnesses (depth and
// range), non-explorability counterexamples, and the built-in families.
//
// Condition C quantifies over the whole infinite tail of a family. Everything
// here checks a finite surrogate: members up to a horizon J_max. The built-in
// families come with an analytic reason the tail cannot collide:
//   c      a view deep enough to go once around the ring from v pins the ring
//          length, so only one member can match it;
//   trees  a view of depth ecc(v) shows every non-backtracking path ending in
//          a leaf, which reconstructs the tree; any shallower view extends to
//          trees of every larger size, so it is rejected inside the horizon.
//          The minimal witness of a tree of size <= 6 is (ecc(v), i).

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xfam/enumerate.hpp"
#include "xfam/port_graph.hpp"
#include "xfam/view.hpp"

namespace xfam {

/// Depth witness k(v,i) and range witness m(v,i).
struct Witness {
  int depth = 0;
  int range = 0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Search bounds for the finite surrogate of condition C.
struct WitnessBounds {
  int max_depth = 40;   // K_max
  int max_range = 20;   // M_max
  int horizon = 30;     // J_max
};

/// Member index j > m and a node of G_j sharing the depth-k view.
struct Counterexample {
  int index = 0;
  NodeId node = 0;
};

class Family;

std::optional<Witness> find_witness(const Family& f, int i, NodeId v, const WitnessBounds& bounds);

class Family {
 public:
  using MemberFn = std::function<PortGraph(int)>;
  using SizeFn = std::function<int(int)>;
  using CounterexampleFn = std::function<Counterexample(int i, NodeId v, int k, int m)>;

  Family(std::string name, MemberFn member, SizeFn size = {})
      : state_(std::make_shared<State>()) {
    state_->name = std::move(name);
    state_->member = std::move(member);
    state_->size = std::move(size);
  }

  const std::string& name() const { return state_->name; }

  /// G_i, 1-based; built once and cached.
  const PortGraph& member(int i) const {
    if (i < 1) throw InvalidParameter("family index must be >= 1");
    std::lock_guard lock(state_->mutex);
    auto it = state_->members.find(i);
    if (it == state_->members.end())
      it = state_->members.emplace(i, std::make_unique<PortGraph>(state_->member(i))).first;
    return *it->second;
  }

  int size(int i) const { return state_->size ? state_->size(i) : member(i).size(); }

  /// Witnesses come from find_witness under these bounds and are cached.
  Family& with_computed_witnesses(WitnessBounds bounds) {
    state_->bounds = bounds;
    state_->witnessed = true;
    return *this;
  }
  Family& with_counterexamples(CounterexampleFn fn) {
    state_->counterexample = std::move(fn);
    return *this;
  }

  bool has_witnesses() const { return state_->witnessed; }
  bool has_counterexamples() const { return static_cast<bool>(state_->counterexample); }
  const WitnessBounds& witness_bounds() const { return state_->bounds; }

  /// Cached witness for (i, v); nullopt if the family has none or the bounds ran out.
  std::optional<Witness> witness(int i, NodeId v) const {
    if (!state_->witnessed) return std::nullopt;
    {
      std::lock_guard lock(state_->mutex);
      if (auto it = state_->witnesses.find({i, v}); it != state_->witnesses.end()) return it->second;
    }
    auto w = find_witness(*this, i, v, state_->bounds);
    std::lock_guard lock(state_->mutex);
    state_->witnesses.emplace(std::make_pair(i, v), w);
    return w;
  }

  Counterexample counterexample(int i, NodeId v, int k, int m) const {
    if (!state_->counterexample) throw InvalidParameter(name() + " carries no non-explorability witness");
    return state_->counterexample(i, v, k, m);
  }

  /// Seeds the witness cache, e.g. from a persisted table.
  void preload_witness(int i, NodeId v, Witness w) const {
    std::lock_guard lock(state_->mutex);
    state_->witnesses[{i, v}] = w;
  }

  /// Known (i, v) -> witness entries, for persistence.
  std::map<std::pair<int, NodeId>, Witness> cached_witnesses() const {
    std::lock_guard lock(state_->mutex);
    std::map<std::pair<int, NodeId>, Witness> out;
    for (const auto& [key, w] : state_->witnesses)
      if (w) out.emplace(key, *w);
    return out;
  }

 private:
  struct State {
    std::string name;
    MemberFn member;
    SizeFn size;
    CounterexampleFn counterexample;
    bool witnessed = false;
    WitnessBounds bounds;
    std::mutex mutex;
    std::map<int, std::unique_ptr<PortGraph>> members;
    std::map<std::pair<int, NodeId>, std::optional<Witness>> witnesses;
  };

  // unique_ptr keeps member references stable while the map grows.
  std::shared_ptr<State> state_;
};

// ---------------------------------------------------------------------------
// Condition-C surrogate

/// True iff the depth-k view from v in G_i differs from the depth-k view of
/// every node of G_j for all m < j <= horizon.
inline bool verify_witness_prefix(const Family& f, int i, NodeId v, int k, int m, int horizon) {
  const PortGraph& gi = f.member(i);
  if (!gi.valid_node(v)) throw InvalidParameter("node is not in G_i");
  for (int j = m + 1; j <= horizon; ++j) {
    const PortGraph& gj = f.member(j);
    JointRefinement joint(gi, gj);
    for (NodeId w = 0; w < gj.size(); ++w)
      if (joint.equal_at(v, w, k)) return false;
  }
  return true;
}

/// Lexicographically least (k, m) with k <= K_max, m <= M_max passing
/// verify_witness_prefix at the horizon.
inline std::optional<Witness> find_witness(const Family& f, int i, NodeId v, const WitnessBounds& bounds) {
  const PortGraph& gi = f.member(i);
  if (!gi.valid_node(v)) throw InvalidParameter("node is not in G_i");
  // G_i collides with itself at every depth, so m >= i.
  if (i > bounds.max_range || i > bounds.horizon) return std::nullopt;
  // agreement[j]: deepest k at which some node of G_j shares v's view.
  std::vector<int> agreement(bounds.horizon + 1, -1);
  for (int j = 1; j <= bounds.horizon; ++j) {
    const PortGraph& gj = f.member(j);
    JointRefinement joint(gi, gj);
    for (NodeId w = 0; w < gj.size(); ++w) agreement[j] = std::max(agreement[j], joint.agreement_depth(v, w));
  }
  for (int k = 1; k <= bounds.max_depth; ++k) {
    int last = 0;
    for (int j = 1; j <= bounds.horizon; ++j)
      if (agreement[j] >= k) last = j;
    const int m = std::max(last, 1);
    if (m <= bounds.max_range) return Witness{k, m};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Built-in families

/// G_i = C_{i+2}.
inline Family c_family() {
  Family f("c", [](int i) { return build_c(i + 2); }, [](int i) { return i + 3; });
  f.with_computed_witnesses(WitnessBounds{40, 20, 30});
  return f;
}

/// G_i = R_{i+2}, all clockwise: every view coincides, so condition C fails.
inline Family ring_family() {
  Family f("rings", [](int i) { return build_clockwise_ring(i + 2); }, [](int i) { return i + 2; });
  f.with_counterexamples([](int, NodeId, int k, int m) { return Counterexample{std::max(m, k) + 1, 0}; });
  return f;
}

/// All port-numbered trees in canonical order.
inline Family tree_family() {
  Family f("trees", [](int i) { return enumerate_all_trees(i); });
  // Horizon = all trees of size <= 7; range cap = all trees of size <= 6.
  f.with_computed_witnesses(WitnessBounds{12, 66, 270});
  return f;
}

/// F*(r): C_{i+2} for i <= r, then D_i.
inline Family fstar_family(int r) {
  if (r < 0) throw InvalidParameter("fstar needs r >= 0");
  return Family(
      "fstar:r=" + std::to_string(r),
      [r](int i) { return i <= r ? build_c(i + 2) : build_d(i); },
      [r](int i) { return i <= r ? i + 3 : 8 * i + 1; });
}

/// H_i: every connected port-numbered graph, up to the enumeration cap.
inline Family all_graphs_family() { return Family("all-graphs", [](int i) { return enumerate_all_graphs(i); }); }

/// Resolves a registry name: rings, trees, c, fstar:r=<R>, all-graphs.
inline Family family_by_name(const std::string& name) {
  if (name == "rings") return ring_family();
  if (name == "trees") return tree_family();
  if (name == "c") return c_family();
  if (name == "all-graphs") return all_graphs_family();
  const std::string prefix = "fstar:r=";
  if (name.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    int r = -1;
    try {
      r = std::stoi(name.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != name.size() - prefix.size() || r < 0)
      throw InvalidParameter("bad fstar parameter in '" + name + "'");
    return fstar_family(r);
  }
  throw InvalidParameter("unknown family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Witness table persistence: one "family i v k m J_max" row per line.

inline void save_witness_table(const Family& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write witness table " + path);
  out << "# family i v k m J_max\n";
  for (const auto& [key, w] : f.cached_witnesses())
    out << f.name() << ' ' << key.first << ' ' << key.second << ' ' << w.depth << ' ' << w.range << ' '
        << f.witness_bounds().horizon << '\n';
}

/// Loads rows for this family whose horizon matches its bounds; returns the count.
inline int load_witness_table(const Family& f, const std::string& path) {
  std::ifstream in(path);
  if (!in) return 0;
  std::string line;
  int loaded = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string name;
    int index = 0, node = 0, depth = 0, range = 0, horizon = 0;
    if (!(row >> name >> index >> node >> depth >> range >> horizon)) throw InvalidParameter("malformed witness row: " + line);
    if (name != f.name() || horizon != f.witness_bounds().horizon) continue;
    f.preload_witness(index, node, Witness{depth, range});
    ++loaded;
  }
  return loaded;
}

}  // namespace xfam
