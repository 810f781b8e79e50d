#pragma once

// Deterministic execution of mobile agents on port graphs.
//
// An agent is a program driving a Walker: it reads the current Observation,
// issues moves by exit port, may call query hooks (answered in zero steps) and
// stops by returning. The runtime owns the graph; agents only ever see
// degrees and entry ports.

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "xfam/graph_io.hpp"
#include "xfam/port_graph.hpp"

namespace xfam {

struct Observation {
  int degree = 0;
  std::optional<Port> entry_port;  // empty at the start node

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct Action {
  enum class Kind { Move, Stop };
  Kind kind = Kind::Stop;
  Port port = 0;

  static Action move(Port p) { return {Kind::Move, p}; }
  static Action stop() { return {Kind::Stop, 0}; }
};

/// A yes/no question for an oracle hook: a schema name plus integer
/// parameters and an optional graph argument.
struct Query {
  std::string schema;
  std::vector<long long> params;
  std::optional<PortGraph> graph;
  /// Stands in for the graph's canonical code in describe(), e.g. "H17".
  std::string graph_label;

  std::string describe() const {
    std::ostringstream out;
    out << schema;
    for (auto p : params) out << ' ' << p;
    if (!graph_label.empty())
      out << ' ' << graph_label;
    else if (graph)
      out << ' ' << canonical_code(*graph).to_string();
    return out.str();
  }
};

/// Synchronous query hooks; unset hooks fault the run if called.
struct Hooks {
  std::function<PortGraph(int)> enumerate;
  std::function<bool(const PortGraph&)> member;
  std::function<bool(const Query&)> oracle;
};

enum class QueryKind { Enumerate, Member, Oracle };

struct QueryRecord {
  int position = 0;        // moves completed before the query
  QueryKind kind = QueryKind::Oracle;
  long long argument = 0;  // enumeration index, or size of the queried graph
  std::string request;
  std::string answer;
  std::size_t seq = 0;     // global event order within the trace

  bool same_exchange(const QueryRecord& o) const {
    return position == o.position && kind == o.kind && argument == o.argument &&
           request == o.request && answer == o.answer;
  }
};

struct Step {
  Port exit_port = 0;
  NodeId node = 0;  // runtime-side handle of the entered node
  Observation observation;
};

/// Agent-declared checkpoint; the runtime records where the agent stood.
struct Mark {
  int position = 0;
  std::string label;
  NodeId node = 0;
  std::size_t seq = 0;
};

enum class RunStatus { Stopped, StepLimit, Faulted };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Stopped: return "stopped";
    case RunStatus::StepLimit: return "step-limit";
    case RunStatus::Faulted: return "faulted";
  }
  return "?";
}

struct Trace {
  NodeId start = 0;
  Observation initial;
  std::vector<Step> steps;
  RunStatus status = RunStatus::Stopped;
  std::string fault;
  std::vector<QueryRecord> queries;
  std::vector<Mark> marks;

  int length() const { return static_cast<int>(steps.size()); }
  NodeId final_node() const { return steps.empty() ? start : steps.back().node; }
  NodeId node_after(int moves) const { return moves == 0 ? start : steps[moves - 1].node; }
};

class Walker;
using AgentProgram = std::function<void(Walker&)>;

struct Agent {
  std::string name;
  AgentProgram program;
};

namespace detail {
struct StepLimitReached {};
struct BadPort {
  std::string message;
};
}  // namespace detail

class Walker {
 public:
  Walker(const PortGraph& g, NodeId start, int limit, const Hooks& hooks, Trace& trace)
      : g_(g), at_(start), limit_(limit), hooks_(hooks), trace_(trace) {
    current_ = Observation{g.degree(start), std::nullopt};
  }

  Walker(const Walker&) = delete;
  Walker& operator=(const Walker&) = delete;

  const Observation& observe() const { return current_; }
  int degree() const { return current_.degree; }
  std::optional<Port> entry_port() const { return current_.entry_port; }
  int steps_taken() const { return static_cast<int>(trace_.steps.size()); }

  Observation move(Port p) {
    if (p < 0 || p >= current_.degree)
      throw detail::BadPort{"move by port " + std::to_string(p) + " at a node of degree " +
                            std::to_string(current_.degree)};
    if (steps_taken() >= limit_) throw detail::StepLimitReached{};
    const HalfEdge e = g_.follow(at_, p);
    at_ = e.node;
    current_ = Observation{g_.degree(at_), e.port};
    trace_.steps.push_back(Step{p, at_, current_});
    return current_;
  }

  PortGraph enumerate(int i) {
    if (!hooks_.enumerate) throw std::logic_error("agent called an unwired enumeration hook");
    PortGraph answer = hooks_.enumerate(i);
    log(QueryKind::Enumerate, i, "enumerate " + std::to_string(i), graph_to_json(answer).dump());
    return answer;
  }

  bool member(const PortGraph& g) {
    if (!hooks_.member) throw std::logic_error("agent called an unwired membership hook");
    const bool answer = hooks_.member(g);
    log(QueryKind::Member, g.size(), "member " + canonical_code(g).to_string(), answer ? "yes" : "no");
    return answer;
  }

  bool ask(const Query& q) {
    if (!hooks_.oracle) throw std::logic_error("agent called an unwired oracle hook");
    const bool answer = hooks_.oracle(q);
    log(QueryKind::Oracle, q.params.empty() ? 0 : q.params.front(), q.describe(), answer ? "yes" : "no");
    return answer;
  }

  void mark(std::string label) {
    trace_.marks.push_back(Mark{steps_taken(), std::move(label), at_, next_seq_++});
  }

  bool has_enumerate_hook() const { return static_cast<bool>(hooks_.enumerate); }
  bool has_member_hook() const { return static_cast<bool>(hooks_.member); }
  bool has_oracle_hook() const { return static_cast<bool>(hooks_.oracle); }

 private:
  void log(QueryKind kind, long long argument, std::string request, std::string answer) {
    trace_.queries.push_back(
        QueryRecord{steps_taken(), kind, argument, std::move(request), std::move(answer), next_seq_++});
  }

  const PortGraph& g_;
  NodeId at_;
  int limit_;
  const Hooks& hooks_;
  Trace& trace_;
  Observation current_;
  std::size_t next_seq_ = 0;
};

/// Executes `agent` from `start` until it stops, faults, or makes `limit` moves.
inline Trace run(const Agent& agent, const PortGraph& g, NodeId start, int limit,
                 const Hooks& hooks = {}) {
  if (!g.valid_node(start)) throw InvalidParameter("start is not a node of the graph");
  if (limit < 0) throw InvalidParameter("step limit must be >= 0");
  Trace trace;
  trace.start = start;
  trace.initial = Observation{g.degree(start), std::nullopt};
  Walker walker(g, start, limit, hooks, trace);
  try {
    agent.program(walker);
    trace.status = RunStatus::Stopped;
  } catch (const detail::StepLimitReached&) {
    trace.status = RunStatus::StepLimit;
  } catch (const detail::BadPort& e) {
    trace.status = RunStatus::Faulted;
    trace.fault = e.message;
  } catch (const std::exception& e) {
    trace.status = RunStatus::Faulted;
    trace.fault = e.what();
  }
  return trace;
}

/// Stopped, and every node was the start or entered at some step.
inline bool is_full_exploration(const Trace& t, const PortGraph& g) {
  if (t.status != RunStatus::Stopped) return false;
  std::vector<char> seen(g.size(), 0);
  seen[t.start] = 1;
  for (const Step& s : t.steps) seen[s.node] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

inline int visited_count(const Trace& t, int graph_size) {
  std::vector<char> seen(graph_size, 0);
  seen[t.start] = 1;
  for (const Step& s : t.steps) seen[s.node] = 1;
  return static_cast<int>(std::count(seen.begin(), seen.end(), 1));
}

/// Agent-visible behaviour over the first k moves: exit ports, observations,
/// query exchanges made before move k+1, and whether the agent stops at move k.
inline bool traces_prefix_equal(const Trace& a, const Trace& b, int k) {
  if (a.initial != b.initial) return false;
  const int la = std::min(k, a.length());
  const int lb = std::min(k, b.length());
  if (la != lb) return false;
  for (int t = 0; t < la; ++t) {
    if (a.steps[t].exit_port != b.steps[t].exit_port ||
        a.steps[t].observation != b.steps[t].observation)
      return false;
  }
  if (la < k && a.status != b.status) return false;
  const bool a_stops = a.status == RunStatus::Stopped && a.length() == la;
  const bool b_stops = b.status == RunStatus::Stopped && b.length() == lb;
  if (a_stops != b_stops) return false;
  std::vector<const QueryRecord*> qa, qb;
  for (const auto& q : a.queries)
    if (q.position <= la) qa.push_back(&q);
  for (const auto& q : b.queries)
    if (q.position <= lb) qb.push_back(&q);
  if (qa.size() != qb.size()) return false;
  for (std::size_t i = 0; i < qa.size(); ++i)
    if (!qa[i]->same_exchange(*qb[i])) return false;
  return true;
}

/// Hooks answering from a recorded query log, in order. A request that does
/// not match the log throws.
inline Hooks replay_hooks(const Trace& recorded) {
  auto log = std::make_shared<std::vector<QueryRecord>>(recorded.queries);
  auto cursor = std::make_shared<std::size_t>(0);
  auto next = [log, cursor](QueryKind kind, const std::string& request) -> const QueryRecord& {
    if (*cursor >= log->size()) throw std::runtime_error("replay log exhausted at " + request);
    const QueryRecord& q = (*log)[(*cursor)++];
    if (q.kind != kind || q.request != request)
      throw std::runtime_error("replay diverged: expected " + q.request + ", got " + request);
    return q;
  };
  Hooks h;
  h.enumerate = [next](int i) {
    return graph_from_json(nlohmann::json::parse(next(QueryKind::Enumerate, "enumerate " + std::to_string(i)).answer));
  };
  h.member = [next](const PortGraph& g) {
    return next(QueryKind::Member, "member " + canonical_code(g).to_string()).answer == "yes";
  };
  h.oracle = [next](const Query& q) { return next(QueryKind::Oracle, q.describe()).answer == "yes"; };
  return h;
}

// ---------------------------------------------------------------------------
// Reactive form: one Action per Observation.

class ReactiveAgent {
 public:
  virtual ~ReactiveAgent() = default;
  /// Hooks are reachable through the walker; moves must go through the return value.
  virtual Action next(const Observation& obs, Walker& hooks) = 0;
};

inline Agent reactive_agent(std::string name, std::function<std::unique_ptr<ReactiveAgent>()> factory) {
  return Agent{std::move(name), [factory = std::move(factory)](Walker& w) {
                 auto agent = factory();
                 Observation obs = w.observe();
                 while (true) {
                   const Action a = agent->next(obs, w);
                   if (a.kind == Action::Kind::Stop) return;
                   obs = w.move(a.port);
                 }
               }};
}

// ---------------------------------------------------------------------------
// Line-delimited trace records.

inline std::string trace_to_jsonl(const Trace& t) {
  std::ostringstream out;
  out << nlohmann::json{{"type", "start"}, {"node", t.start}, {"degree", t.initial.degree}}.dump() << '\n';
  std::size_t qi = 0, mi = 0;
  auto flush_events = [&](int position) {
    while (true) {
      const bool q_ready = qi < t.queries.size() && t.queries[qi].position == position;
      const bool m_ready = mi < t.marks.size() && t.marks[mi].position == position;
      if (!q_ready && !m_ready) return;
      if (q_ready && (!m_ready || t.queries[qi].seq < t.marks[mi].seq)) {
        const auto& q = t.queries[qi++];
        const char* kind = q.kind == QueryKind::Enumerate ? "enumerate"
                           : q.kind == QueryKind::Member  ? "member"
                                                          : "oracle";
        out << nlohmann::json{{"type", "query"}, {"position", q.position}, {"kind", kind},
                              {"request", q.request}, {"answer", q.answer}}
                   .dump()
            << '\n';
      } else {
        const auto& m = t.marks[mi++];
        out << nlohmann::json{{"type", "mark"}, {"position", m.position}, {"label", m.label}, {"node", m.node}}
                   .dump()
            << '\n';
      }
    }
  };
  flush_events(0);
  for (int i = 0; i < t.length(); ++i) {
    const Step& s = t.steps[i];
    out << nlohmann::json{{"type", "step"},
                          {"index", i + 1},
                          {"exit", s.exit_port},
                          {"entry", *s.observation.entry_port},
                          {"degree", s.observation.degree},
                          {"node", s.node}}
               .dump()
        << '\n';
    flush_events(i + 1);
  }
  nlohmann::json end{{"type", "end"}, {"status", to_string(t.status)}, {"steps", t.length()}};
  if (!t.fault.empty()) end["fault"] = t.fault;
  out << end.dump() << '\n';
  return out.str();
}

}  // namespace xfam
