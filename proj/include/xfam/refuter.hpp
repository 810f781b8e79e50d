#pragma once

// Adversary against candidate universal algorithms that read their family
// through an enumeration or membership hook.
//
// E_1 runs the candidate on C_3 from its degree-3 node with the hook answering
// for G_i = C_{i+2}. If it stops after k moves having touched indices (or
// graph sizes) up to r, E_2 runs it on D_m, m = max(k, r) + 1, from the ring
// node antipodal to the degree-4 node, with the hook answering for F*(r).
// Both graphs look the same within distance 3m > k and both families agree on
// everything the candidate asked, so it repeats E_1 move for move, stops at k,
// and leaves most of the 8m+1 nodes of D_m unvisited.

#include <cerrno>
#include <csignal>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "xfam/agent.hpp"
#include "xfam/explore.hpp"
#include "xfam/family.hpp"
#include "xfam/uxs.hpp"

namespace xfam {

enum class HookMode { Enumeration, Decision };

inline const char* to_string(HookMode m) { return m == HookMode::Enumeration ? "enum" : "decision"; }

/// An agent plus the single hook kind it reads its family through.
struct Candidate {
  std::string name;
  HookMode mode = HookMode::Enumeration;
  AgentProgram program;
};

enum class Verdict { Refuted, SurvivedCap, Faulted, InternalError };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Refuted: return "refuted";
    case Verdict::SurvivedCap: return "survived-cap";
    case Verdict::Faulted: return "faulted";
    case Verdict::InternalError: return "internal-error";
  }
  return "?";
}

struct RefuteConfig {
  int step_cap = 200000;
  /// Largest m for which D_m is built.
  int max_m = 5000;
};

struct RefutationReport {
  std::string candidate;
  HookMode mode = HookMode::Enumeration;
  Verdict verdict = Verdict::SurvivedCap;
  int stop_step = 0;   // moves before E_1 stopped
  int hook_reach = 0;  // largest hook index E_1 touched
  int host_index = 0;  // j of the D_j used by E_2
  Trace e1;
  Trace e2;
  bool prefix_equal = false;
  bool e2_stopped_at_k = false;
  int e2_visited = 0;
  int e2_size = 0;
  std::string detail;

  nlohmann::json to_json() const {
    return {{"candidate", candidate},
            {"mode", to_string(mode)},
            {"verdict", to_string(verdict)},
            {"k", stop_step},
            {"r", hook_reach},
            {"m", host_index},
            {"prefix_equal", prefix_equal},
            {"e2_stopped_at_k", e2_stopped_at_k},
            {"e2_visited", e2_visited},
            {"e2_size", e2_size},
            {"e1_queries", e1.queries.size()},
            {"e2_queries", e2.queries.size()},
            {"detail", detail}};
  }
};

// ---------------------------------------------------------------------------
// Membership predicates

inline bool in_c_family(const PortGraph& g) {
  return g.size() >= 4 && validate(g) == std::nullopt && port_isomorphic(g, build_c(g.size() - 1));
}

inline bool in_fstar_family(int r, const PortGraph& g) {
  if (validate(g)) return false;
  const int n = g.size();
  if (n >= 4 && n - 3 <= r && port_isomorphic(g, build_c(n - 1))) return true;
  if ((n - 1) % 8 == 0 && (n - 1) / 8 > r) return port_isomorphic(g, build_d((n - 1) / 8));
  return false;
}

namespace detail {

inline Hooks candidate_hooks(HookMode mode, const Family& f, std::function<bool(const PortGraph&)> member) {
  Hooks h;
  if (mode == HookMode::Enumeration)
    h.enumerate = [f](int i) { return f.member(i); };
  else
    h.member = std::move(member);
  return h;
}

inline int adversary_parameter(const Trace& t, HookMode mode) {
  long long r = 0;
  for (const auto& q : t.queries) {
    if (mode == HookMode::Enumeration && q.kind == QueryKind::Enumerate) r = std::max(r, q.argument);
    if (mode == HookMode::Decision && q.kind == QueryKind::Member) r = std::max(r, q.argument);
  }
  return static_cast<int>(r);
}

}  // namespace detail

struct E1Result {
  int stop_step = 0;
  int hook_reach = 0;
  Trace trace;
};

inline E1Result run_e1(const Candidate& u, int cap) {
  const PortGraph host = build_c(3);
  const Hooks hooks = detail::candidate_hooks(u.mode, c_family(), in_c_family);
  E1Result out;
  out.trace = run(Agent{u.name, u.program}, host, c_hub(3), cap, hooks);
  out.stop_step = out.trace.length();
  out.hook_reach = detail::adversary_parameter(out.trace, u.mode);
  return out;
}

/// E_2 on D_m from the antipode, with the hook answering for F*(r).
inline Trace run_e2(const Candidate& u, int m, int r, int cap) {
  const PortGraph host = build_d(m);
  const Hooks hooks = detail::candidate_hooks(u.mode, fstar_family(r),
                                              [r](const PortGraph& g) { return in_fstar_family(r, g); });
  return run(Agent{u.name, u.program}, host, d_antipode(m), cap, hooks);
}

inline RefutationReport refute(const Candidate& u, const RefuteConfig& cfg = {}) {
  RefutationReport rep;
  rep.candidate = u.name;
  rep.mode = u.mode;
  E1Result e1 = run_e1(u, cfg.step_cap);
  rep.e1 = std::move(e1.trace);
  rep.stop_step = e1.stop_step;
  rep.hook_reach = e1.hook_reach;
  if (rep.e1.status == RunStatus::Faulted) {
    rep.verdict = Verdict::Faulted;
    rep.detail = "E1 faulted: " + rep.e1.fault;
    return rep;
  }
  if (rep.e1.status == RunStatus::StepLimit) {
    rep.verdict = Verdict::SurvivedCap;
    rep.detail = "no stop on C_3 within " + std::to_string(cfg.step_cap) + " moves";
    return rep;
  }
  rep.host_index = std::max(std::max(rep.stop_step, rep.hook_reach) + 1, 1);
  if (rep.host_index > cfg.max_m) {
    rep.verdict = Verdict::SurvivedCap;
    rep.detail = "D_m for m=" + std::to_string(rep.host_index) + " exceeds build limit " + std::to_string(cfg.max_m);
    return rep;
  }
  rep.e2 = run_e2(u, rep.host_index, rep.hook_reach, std::max(cfg.step_cap, rep.stop_step + 1));
  rep.e2_size = 8 * rep.host_index + 1;
  rep.e2_visited = visited_count(rep.e2, rep.e2_size);
  rep.prefix_equal = traces_prefix_equal(rep.e1, rep.e2, rep.stop_step);
  rep.e2_stopped_at_k = rep.e2.status == RunStatus::Stopped && rep.e2.length() == rep.stop_step;
  if (!rep.prefix_equal || !rep.e2_stopped_at_k) {
    rep.verdict = Verdict::InternalError;
    rep.detail = "E2 diverged from E1 within the first k moves";
    if (rep.e2.status == RunStatus::Faulted) rep.detail += " (E2 faulted: " + rep.e2.fault + ")";
    return rep;
  }
  if (rep.e2_visited >= rep.e2_size) {
    rep.verdict = Verdict::InternalError;
    rep.detail = "E2 visited all of D_m in k moves";
    return rep;
  }
  rep.verdict = Verdict::Refuted;
  rep.detail = "stopped after " + std::to_string(rep.stop_step) + " moves having visited " + std::to_string(rep.e2_visited) +
               " of " + std::to_string(rep.e2_size) + " nodes";
  return rep;
}

// ---------------------------------------------------------------------------
// Candidates

/// Enumerates G_1..G_B, then replays the UXS for the largest size seen
/// (4 when B = 0), clipped to the verified cap.
inline Candidate naive_candidate(int budget) {
  if (budget < 0) throw InvalidParameter("query budget must be >= 0");
  return Candidate{"naive:B=" + std::to_string(budget), HookMode::Enumeration, [budget](Walker& w) {
                     int bound = budget == 0 ? 4 : 0;
                     for (int i = 1; i <= budget; ++i) bound = std::max(bound, w.enumerate(i).size());
                     replay_offsets(w, verified_uxs(std::min(bound, uxs_config().verified_cap)).offsets);
                   }};
}

/// Asks membership of C_3..C_6, then replays the UXS for the largest member
/// size (4 if none), clipped to the verified cap.
inline Candidate membership_strawman() {
  return Candidate{"member-strawman", HookMode::Decision, [](Walker& w) {
                     int bound = 4;
                     for (int k = 3; k <= 6; ++k) {
                       const PortGraph g = build_c(k);
                       if (w.member(g)) bound = std::max(bound, g.size());
                     }
                     replay_offsets(w, verified_uxs(std::min(bound, uxs_config().verified_cap)).offsets);
                   }};
}

/// A dedicated agent posing as a universal one; it never consults the hook.
inline Candidate dedicated_candidate(const Agent& a, HookMode mode = HookMode::Enumeration) {
  return Candidate{a.name, mode, a.program};
}

// ---------------------------------------------------------------------------
// External candidates: a subprocess speaking one record per line.
//
//   runtime -> candidate   obs <degree> <entryPort|->
//                          graph <json>          (answer to enumerate)
//                          answer yes|no         (answer to member)
//   candidate -> runtime   move <port> | stop | enumerate <i> | member <json>
//
// The runtime sends an obs record at the start and after every move.

namespace detail {

class ChildProcess {
 public:
  explicit ChildProcess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw InvalidParameter("empty candidate command");
    std::signal(SIGPIPE, SIG_IGN);
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) throw std::runtime_error("pipe failed");
    pid_ = fork();
    if (pid_ < 0) throw std::runtime_error("fork failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char*> args;
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      execvp(args[0], args.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_ = fdopen(from_child[0], "r");
    out_ = fdopen(to_child[1], "w");
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() {
    if (out_) std::fclose(out_);
    if (in_) std::fclose(in_);
    if (pid_ > 0) {
      kill(pid_, SIGKILL);
      int status = 0;
      while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
      }
    }
  }

  void send(const std::string& line) {
    if (std::fputs((line + "\n").c_str(), out_) < 0 || std::fflush(out_) != 0)
      throw std::runtime_error("candidate process closed its input");
  }

  std::string receive() {
    std::string line;
    int c;
    while ((c = std::fgetc(in_)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
    if (c == EOF && line.empty()) throw std::runtime_error("candidate process ended without a reply");
    return line;
  }

 private:
  pid_t pid_ = -1;
  FILE* in_ = nullptr;
  FILE* out_ = nullptr;
};

inline std::string obs_line(const Observation& o) {
  return "obs " + std::to_string(o.degree) + " " + (o.entry_port ? std::to_string(*o.entry_port) : "-");
}

}  // namespace detail

/// Each run starts a fresh process; it is killed when the run ends.
inline Candidate external_candidate(std::vector<std::string> argv, HookMode mode) {
  const std::string name = "external:" + (argv.empty() ? std::string() : argv.front());
  return Candidate{name, mode, [argv = std::move(argv)](Walker& w) {
                     detail::ChildProcess child(argv);
                     child.send(detail::obs_line(w.observe()));
                     while (true) {
                       const std::string line = child.receive();
                       const auto space = line.find(' ');
                       const std::string verb = line.substr(0, space);
                       const std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
                       if (verb == "stop") return;
                       if (verb == "move") {
                         child.send(detail::obs_line(w.move(std::stoi(rest))));
                       } else if (verb == "enumerate") {
                         child.send("graph " + graph_to_json(w.enumerate(std::stoi(rest))).dump());
                       } else if (verb == "member") {
                         child.send(std::string("answer ") +
                                    (w.member(graph_from_json(nlohmann::json::parse(rest))) ? "yes" : "no"));
                       } else {
                         throw std::runtime_error("candidate sent an unknown record: " + line);
                       }
                     }
                   }};
}

}  // namespace xfam
