#pragma once

// Yes/no oracle over a family with witnesses, the query procedures built on
// it, and the universal exploration agent that learns its family by asking.
//
// Core schemas:
//   member-isomorphic  i          + graph   G_i is port-isomorphic to the graph
//   depth-witness      i v j                k(v,i) = j
//   range-witness      i v j                m(v,i) = j
// Node indices in queries refer to the canonical labeling of G_i (node x is
// the node the canonical code lists x-th), the only numbering an agent that
// learned G_i through queries can know.
// Extension schemas are evaluated by registered predicate evaluators. Two are
// installed by default:
//   size-at-most       i s                  |G_i| <= s
//   code-symbol        i pos x              symbol pos of G_i's canonical code is x
//                                           (false past the end)

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "xfam/agent.hpp"
#include "xfam/enumerate.hpp"
#include "xfam/explore.hpp"
#include "xfam/family.hpp"
#include "xfam/uxs.hpp"
#include "xfam/view.hpp"

namespace xfam {

namespace schema {
inline constexpr const char* kMemberIsomorphic = "member-isomorphic";
inline constexpr const char* kDepthWitness = "depth-witness";
inline constexpr const char* kRangeWitness = "range-witness";
inline constexpr const char* kSizeAtMost = "size-at-most";
inline constexpr const char* kCodeSymbol = "code-symbol";
}  // namespace schema

/// The oracle cannot answer truthfully (unknown schema, missing witness).
/// Distinct from a "no".
class OracleFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OracleBackend {
 public:
  using Evaluator = std::function<bool(const Family&, const Query&)>;

  explicit OracleBackend(Family f) : family_(std::move(f)), state_(std::make_shared<State>()) {
    register_schema(schema::kSizeAtMost, [](const Family& fam, const Query& q) {
      require_params(q, 2);
      return fam.size(static_cast<int>(q.params[0])) <= q.params[1];
    });
    register_schema(schema::kCodeSymbol, [state = state_](const Family& fam, const Query& q) {
      require_params(q, 3);
      const auto& code = state->code_of(fam, static_cast<int>(q.params[0]));
      const auto pos = q.params[1];
      return pos >= 0 && pos < static_cast<long long>(code.symbols.size()) &&
             code.symbols[static_cast<std::size_t>(pos)] == q.params[2];
    });
  }

  const Family& family() const { return family_; }

  /// Adds a predicate evaluator for a new schema name.
  void register_schema(const std::string& name, Evaluator eval) { state_->extensions[name] = std::move(eval); }

  bool answer(const Query& q) const {
    if (q.schema == schema::kMemberIsomorphic) {
      require_params(q, 1);
      if (!q.graph) throw OracleFault("member-isomorphic needs a graph argument");
      const int i = static_cast<int>(q.params[0]);
      if (family_.size(i) != q.graph->size()) return false;
      return state_->code_of(family_, i) == canonical_code(*q.graph);
    }
    if (q.schema == schema::kDepthWitness || q.schema == schema::kRangeWitness) {
      require_params(q, 3);
      const int i = static_cast<int>(q.params[0]);
      const NodeId v = state_->node_of(family_, i, q.params[1]);
      const auto w = family_.witness(i, v);
      if (!w) throw OracleFault("no witness for (" + std::to_string(v) + "," + std::to_string(i) + ") in " + family_.name());
      return (q.schema == schema::kDepthWitness ? w->depth : w->range) == q.params[2];
    }
    if (auto it = state_->extensions.find(q.schema); it != state_->extensions.end()) return it->second(family_, q);
    throw OracleFault("unknown query schema '" + q.schema + "'");
  }

  Hooks hooks() const {
    Hooks h;
    h.oracle = [self = *this](const Query& q) { return self.answer(q); };
    return h;
  }

 private:
  static void require_params(const Query& q, std::size_t n) {
    if (q.params.size() != n) throw OracleFault(q.schema + " takes " + std::to_string(n) + " parameters");
  }

  struct State {
    std::map<std::string, Evaluator> extensions;
    std::map<int, CanonicalCode> codes;
    std::map<int, std::vector<NodeId>> nodes_by_label;
    std::mutex mutex;

    NodeId node_of(const Family& f, int i, long long label) {
      std::lock_guard lock(mutex);
      auto it = nodes_by_label.find(i);
      if (it == nodes_by_label.end()) {
        const auto labeling = canonical_labeling(f.member(i));
        std::vector<NodeId> inverse(labeling.size());
        for (NodeId u = 0; u < static_cast<NodeId>(labeling.size()); ++u) inverse[labeling[u]] = u;
        it = nodes_by_label.emplace(i, std::move(inverse)).first;
      }
      if (label < 0 || label >= static_cast<long long>(it->second.size()))
        throw OracleFault("queried node is not in G_i");
      return it->second[static_cast<std::size_t>(label)];
    }

    const CanonicalCode& code_of(const Family& f, int i) {
      std::lock_guard lock(mutex);
      auto it = codes.find(i);
      if (it == codes.end()) it = codes.emplace(i, canonical_code(f.member(i))).first;
      return it->second;
    }
  };

  Family family_;
  std::shared_ptr<State> state_;
};

inline OracleBackend oracle_backend(const Family& f) { return OracleBackend(f); }

// ---------------------------------------------------------------------------
// Query procedures (run by the agent through its oracle hook)

/// G_i in its canonical labeling. Literal loop over H_1, H_2, ... asking
/// member-isomorphic while G_i is within the enumeration cap (one size-at-most
/// query decides); beyond it, G_i is read symbol by symbol from its code.
inline PortGraph find_ith_graph(Walker& w, int i) {
  const int cap = std::min(enumeration_caps().graphs, kMaxGraphCap);
  if (w.ask(Query{schema::kSizeAtMost, {i, cap}, std::nullopt, {}})) {
    for (int j = 1;; ++j) {
      PortGraph h = enumerate_all_graphs(j, cap);
      if (w.ask(Query{schema::kMemberIsomorphic, {i}, std::move(h), "H" + std::to_string(j)}))
        return graph_from_code(canonical_code(enumerate_all_graphs(j, cap)));
    }
  }
  CanonicalCode code;
  auto read_symbol = [&](long long pos) {
    for (long long x = 0;; ++x) {
      if (w.ask(Query{schema::kCodeSymbol, {i, pos, x}, std::nullopt, {}})) return static_cast<std::uint32_t>(x);
      if (x > (1 << 20)) throw OracleFault("code symbol out of range");
    }
  };
  long long pos = 0;
  const std::uint32_t n = read_symbol(pos++);
  code.symbols.push_back(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    const std::uint32_t d = read_symbol(pos++);
    code.symbols.push_back(d);
    for (std::uint32_t s = 0; s < 2 * d; ++s) code.symbols.push_back(read_symbol(pos++));
  }
  return graph_from_code(code);
}

namespace detail {
inline int find_witness_value(Walker& w, const char* schema_name, NodeId v, int i) {
  for (int j = 1;; ++j)
    if (w.ask(Query{schema_name, {i, v, j}, std::nullopt, {}})) return j;
}
}  // namespace detail

inline int find_depth_witness(Walker& w, NodeId v, int i) {
  return detail::find_witness_value(w, schema::kDepthWitness, v, i);
}

inline int find_range_witness(Walker& w, NodeId v, int i) {
  return detail::find_witness_value(w, schema::kRangeWitness, v, i);
}

// ---------------------------------------------------------------------------
// Universal Exploration

/// Find Success with Check fed by queries (G_i and k(v,i) are memoized once
/// learned), then m(v,i), then G_1..G_m for M, then R(M).
inline Agent universal_exploration_agent(const std::string& label = "oracle") {
  return Agent{"universal-oracle:" + label, [](Walker& w) {
                 std::map<int, PortGraph> graphs;
                 auto graph = [&](int i) -> const PortGraph& {
                   auto it = graphs.find(i);
                   if (it == graphs.end()) it = graphs.emplace(i, find_ith_graph(w, i)).first;
                   return it->second;
                 };
                 for (int i = 1;; ++i) {
                   const PortGraph& g = graph(i);
                   for (NodeId v = 0; v < g.size(); ++v) {
                     bool ok = false;
                     if (g.degree(v) == w.degree()) {
                       const int k = find_depth_witness(w, v, i);
                       ok = check_procedure(w, unfold_view(g, v, k));
                     }
                     w.mark("check");
                     if (!ok) continue;
                     const int m = find_range_witness(w, v, i);
                     int bound = 0;
                     for (int t = 1; t <= m; ++t) bound = std::max(bound, graph(t).size());
                     w.mark("explore:M=" + std::to_string(bound));
                     explore_bounded(w, bound);
                     return;
                   }
                 }
               }};
}

/// Rebuilds a Query from a logged request. Graph arguments "H<j>" resolve
/// through the all-graphs enumeration, dotted codes through graph_from_code.
inline Query parse_query(const std::string& request) {
  std::istringstream in(request);
  Query q;
  in >> q.schema;
  std::string token;
  while (in >> token) {
    if (token.size() > 1 && token[0] == 'H') {
      q.graph_label = token;
      q.graph = enumerate_all_graphs(std::stoi(token.substr(1)));
    } else if (token.find('.') != std::string::npos) {
      CanonicalCode code;
      std::istringstream parts(token);
      std::string part;
      while (std::getline(parts, part, '.')) code.symbols.push_back(static_cast<std::uint32_t>(std::stoul(part)));
      q.graph = graph_from_code(code);
    } else {
      q.params.push_back(std::stoll(token));
    }
  }
  return q;
}

/// Re-asks every logged oracle query against `backend`; true iff all answers match.
inline bool replay_oracle_log(const Trace& t, const OracleBackend& backend) {
  for (const auto& rec : t.queries) {
    if (rec.kind != QueryKind::Oracle) continue;
    if ((backend.answer(parse_query(rec.request)) ? "yes" : "no") != rec.answer) return false;
  }
  return true;
}

}  // namespace xfam
