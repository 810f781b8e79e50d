#pragma once

// Exploration agents: the tree walker, Procedure Check, Find Success,
// Algorithm Explo, and the dedicated agents for the C_k and F*(r) families.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "xfam/agent.hpp"
#include "xfam/family.hpp"
#include "xfam/uxs.hpp"
#include "xfam/view.hpp"

namespace xfam {

/// Sequence of exit ports.
using PathCode = std::vector<Port>;

// ---------------------------------------------------------------------------
// Trees

/// Depth-first reconnaissance that, at a node entered by port e, tries ports
/// e+1, e+2, ... (mod degree) and returns by e once they are exhausted; at the
/// start it tries 0..d-1. This order is exactly the basic walk, so on a tree
/// the agent rebuilds the whole tree and closes the tour at the start after
/// 2(n-1) moves. The stack of entry ports is what tells it the tour is over.
/// On a graph with a cycle the stack grows until the step limit.
inline Agent basic_walk_tree_agent() {
  return Agent{"basic-walk-tree", [](Walker& w) {
                 struct Frame {
                   std::optional<Port> parent;
                   int degree;
                   int remaining;
                   Port next;
                 };
                 std::vector<Frame> stack;
                 stack.push_back(Frame{std::nullopt, w.degree(), w.degree(), 0});
                 while (!stack.empty()) {
                   Frame& top = stack.back();
                   if (top.remaining == 0) {
                     const auto parent = top.parent;
                     stack.pop_back();
                     if (parent) w.move(*parent);
                     continue;
                   }
                   const Port p = top.next;
                   top.next = (p + 1) % top.degree;
                   --top.remaining;
                   const Observation o = w.move(p);
                   const Port e = *o.entry_port;
                   stack.push_back(Frame{e, o.degree, o.degree - 1, (e + 1) % o.degree});
                 }
               }};
}

// ---------------------------------------------------------------------------
// Procedure Check

namespace detail {

// Maximal non-backtracking paths of the target in lexicographic order: a path
// ends at the depth limit or at a node whose only port is its entry port.
inline void maximal_paths(const TruncatedView& view, int id, PathCode& prefix, std::vector<PathCode>& out) {
  const auto& nd = view.node(id);
  bool extended = false;
  for (Port p = 0; p < static_cast<Port>(nd.children.size()); ++p) {
    if (p == nd.entry_port) continue;
    extended = true;
    prefix.push_back(p);
    maximal_paths(view, nd.children[p], prefix, out);
    prefix.pop_back();
  }
  if (!extended && !prefix.empty()) out.push_back(prefix);
}

inline void walk_back(Walker& w, const std::vector<Port>& entries) {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) w.move(*it);
}

}  // namespace detail

/// Success iff the depth-k view from the agent's node equals `target`. Each
/// maximal path is walked and then reversed; on the first mismatch the
/// traversed prefix is reversed and failure returned. The agent ends where it
/// started either way.
inline bool check_procedure(Walker& w, const TruncatedView& target) {
  if (w.degree() != target.root().degree) return false;
  std::vector<PathCode> paths;
  PathCode prefix;
  detail::maximal_paths(target, target.root_id(), prefix, paths);
  std::vector<Port> entries;
  for (const PathCode& path : paths) {
    entries.clear();
    int id = target.root_id();
    for (Port p : path) {
      id = target.node(id).children[p];
      const Observation o = w.move(p);
      entries.push_back(*o.entry_port);
      const auto& expect = target.node(id);
      if (*o.entry_port != expect.entry_port || o.degree != expect.degree) {
        detail::walk_back(w, entries);
        return false;
      }
    }
    detail::walk_back(w, entries);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Find Success and Explo

struct SuccessPoint {
  int index = 0;
  NodeId node = 0;
  Witness witness;
};

/// Scans (i, v) with i ascending and v in node order until Check succeeds
/// against V(v, G_i, k(v,i)). Marks "check" after every Check. Runs forever
/// (until the step limit) when the host is not a member.
inline SuccessPoint find_success(Walker& w, const Family& f) {
  for (int i = 1;; ++i) {
    const PortGraph& g = f.member(i);
    for (NodeId v = 0; v < g.size(); ++v) {
      const auto wit = f.witness(i, v);
      if (!wit)
        throw ResourceCap("no witness within bounds for node " + std::to_string(v) + " of " + f.name() + "[" +
                          std::to_string(i) + "]");
      if (g.degree(v) != w.degree()) {
        w.mark("check");
        continue;
      }
      const bool ok = check_procedure(w, unfold_view(g, v, wit->depth));
      w.mark("check");
      if (ok) return SuccessPoint{i, v, *wit};
    }
  }
}

inline Agent explo_agent(const Family& f) {
  return Agent{"explo:" + f.name(), [f](Walker& w) {
                 const SuccessPoint s = find_success(w, f);
                 int bound = 0;
                 for (int t = 1; t <= s.witness.range; ++t) bound = std::max(bound, f.size(t));
                 w.mark("explore:M=" + std::to_string(bound));
                 explore_bounded(w, bound);
               }};
}

// ---------------------------------------------------------------------------
// Dedicated agents. "Clockwise" is port 1 at every ring node.

namespace detail {

inline void clockwise_until_degree(Walker& w, int degree) {
  do {
    w.move(1);
  } while (w.degree() != degree);
}

// A(F) from the current node of some C_k, dispatching on its degree.
inline void a_f_from_here(Walker& w) {
  switch (w.degree()) {
    case 1:
      w.move(0);
      clockwise_until_degree(w, 3);
      return;
    case 3:
      w.move(2);
      w.move(0);
      clockwise_until_degree(w, 3);
      return;
    default:
      clockwise_until_degree(w, 3);
      clockwise_until_degree(w, 3);
      w.move(2);
      return;
  }
}

}  // namespace detail

inline Agent a_f_agent() {
  return Agent{"a-f", [](Walker& w) { detail::a_f_from_here(w); }};
}

/// From a degree-3 ring node of D_j: repeat (1,1,1,2,0) until the degree-4
/// node has been arrived at three times, then take port 3.
inline void go_around(Walker& w) {
  static constexpr Port kBody[] = {1, 1, 1, 2, 0};
  int hub_visits = 0;
  while (hub_visits < 3) {
    for (Port p : kBody) {
      w.move(p);
      if (w.degree() == 4) ++hub_visits;
    }
  }
  w.move(3);
}

inline Agent go_around_agent() {
  return Agent{"go-around", [](Walker& w) { go_around(w); }};
}

/// Explores every member of F*(r) up to index `horizon`, and every D_j when r = 0.
///
/// Walks clockwise from the ring (after port 0 from a pendant) until one of:
///   degree 4 seen       D_j: continue to the next degree-3 node, Go around;
///   3 degree-2 in a row C_k with k >= 4: A(F) from here;
///   6*horizon moves     only C_3 is left (r >= 1): A(F) from here.
/// The last rule is needed because C_3 and D_j look alike until the hub of
/// D_j comes into view; no finite rule covers every j.
inline Agent a_fstar_agent(int r, int horizon = 8) {
  if (r < 0) throw InvalidParameter("fstar needs r >= 0");
  const int limit = 6 * std::max(horizon, r + 1);
  return Agent{"a-fstar:r=" + std::to_string(r), [r, limit](Walker& w) {
                 if (w.degree() == 1) w.move(0);
                 int run = w.degree() == 2 ? 1 : 0;
                 for (int walked = 0;; ++walked) {
                   if (w.degree() == 4) {
                     detail::clockwise_until_degree(w, 3);
                     go_around(w);
                     return;
                   }
                   if (run >= 3 || (r >= 1 && walked >= limit)) {
                     detail::a_f_from_here(w);
                     return;
                   }
                   w.move(1);
                   run = w.degree() == 2 ? run + 1 : 0;
                 }
               }};
}

}  // namespace xfam
