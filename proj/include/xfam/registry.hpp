#pragma once

// Name-addressed agents and candidates for the CLI and test harnesses.
//
// Agents:      basic-walk-tree, a-f, a-fstar:r=<R>, go-around, explo:<family>,
//              universal-oracle:<family>, uxs:N=<N>, R:N=<N>
// Candidates:  naive:B=<B>, member-strawman, explo:<family>, external:<command>

#include <sstream>
#include <string>
#include <vector>

#include "xfam/explore.hpp"
#include "xfam/family.hpp"
#include "xfam/oracle.hpp"
#include "xfam/refuter.hpp"
#include "xfam/uxs.hpp"

namespace xfam {

/// An agent with the hooks it needs wired.
struct RunnableAgent {
  Agent agent;
  Hooks hooks;
};

namespace detail {

inline bool strip_prefix(const std::string& s, const std::string& prefix, std::string& rest) {
  if (s.rfind(prefix, 0) != 0) return false;
  rest = s.substr(prefix.size());
  return true;
}

inline int parse_nonnegative(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = -1;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || value < 0) throw InvalidParameter("bad " + what + " '" + text + "'");
  return value;
}

}  // namespace detail

inline RunnableAgent agent_by_name(const std::string& name) {
  std::string rest;
  if (name == "basic-walk-tree") return {basic_walk_tree_agent(), {}};
  if (name == "a-f") return {a_f_agent(), {}};
  if (name == "go-around") return {go_around_agent(), {}};
  if (detail::strip_prefix(name, "a-fstar:r=", rest)) return {a_fstar_agent(detail::parse_nonnegative(rest, "r")), {}};
  if (detail::strip_prefix(name, "explo:", rest)) return {explo_agent(family_by_name(rest)), {}};
  if (detail::strip_prefix(name, "universal-oracle:", rest))
    return {universal_exploration_agent(rest), oracle_backend(family_by_name(rest)).hooks()};
  if (detail::strip_prefix(name, "uxs:N=", rest)) return {r_agent(detail::parse_nonnegative(rest, "N")), {}};
  if (detail::strip_prefix(name, "R:N=", rest))
    return {bounded_exploration_agent(detail::parse_nonnegative(rest, "N")), {}};
  throw InvalidParameter("unknown agent '" + name + "'");
}

/// `mode` applies to external candidates; built-ins fix their own.
inline Candidate candidate_by_name(const std::string& name, HookMode mode = HookMode::Enumeration) {
  std::string rest;
  if (detail::strip_prefix(name, "naive:B=", rest)) return naive_candidate(detail::parse_nonnegative(rest, "B"));
  if (name == "member-strawman") return membership_strawman();
  if (detail::strip_prefix(name, "explo:", rest)) return dedicated_candidate(explo_agent(family_by_name(rest)), mode);
  if (detail::strip_prefix(name, "external:", rest)) {
    std::istringstream words(rest);
    std::vector<std::string> argv;
    for (std::string word; words >> word;) argv.push_back(word);
    return external_candidate(std::move(argv), mode);
  }
  throw InvalidParameter("unknown candidate '" + name + "'");
}

}  // namespace xfam
