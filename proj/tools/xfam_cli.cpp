// Command-line front end. Exit codes: 0 expected outcome, 1 error, 2 inconclusive (a cap was hit).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "xfam/xfam.hpp"

using namespace xfam;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInconclusive = 2;

struct GraphSource {
  std::string file;
  std::string family;
  int index = 0;

  void add_to(CLI::App* cmd, const std::string& suffix = "") {
    cmd->add_option("--graph" + suffix, file, "graph JSON file");
    cmd->add_option("--family" + suffix, family, "family name");
    cmd->add_option("--i" + suffix, index, "1-based member index");
  }

  PortGraph load() const {
    if (!file.empty()) return load_graph(file);
    if (family.empty()) throw InvalidParameter("give --graph or --family with --i");
    return family_by_name(family).member(index);
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int status_code(RunStatus s) {
  switch (s) {
    case RunStatus::Stopped: return kOk;
    case RunStatus::StepLimit: return kInconclusive;
    case RunStatus::Faulted: return kError;
  }
  return kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exploration of anonymous port-numbered graph families"};
  app.require_subcommand(1);

  bool seedless = false;
  int limit = 1000000;
  app.add_option_function<std::string>(
         "--cache-dir", [](const std::string& dir) { uxs_config().cache_dir = dir; },
         "directory for verified UXS files")
      ->trigger_on_parse();
  app.add_flag("--seedless", seedless, "reserved; every computation is deterministic");
  app.add_option("--limit", limit, "step limit for agent runs")->check(CLI::NonNegativeNumber);

  int exit_code = kOk;

  // gen
  auto* gen = app.add_subcommand("gen", "write a family member");
  std::string gen_family, gen_format = "json", gen_out;
  int gen_i = 1;
  gen->add_option("--family", gen_family)->required();
  gen->add_option("--i", gen_i)->required();
  gen->add_option("--format", gen_format)->check(CLI::IsMember({"json", "dot"}));
  gen->add_option("--out", gen_out);
  gen->callback([&] {
    const auto f = family_by_name(gen_family);
    const auto& g = f.member(gen_i);
    write_text(gen_out, gen_format == "dot" ? graph_to_dot(g, "G") : graph_to_json(g).dump() + "\n");
  });

  // view
  auto* view = app.add_subcommand("view", "print a truncated view");
  GraphSource view_src;
  NodeId view_node = 0;
  int view_k = 0;
  view_src.add_to(view);
  view->add_option("--node", view_node)->required();
  view->add_option("--k", view_k)->required();
  view->callback([&] { std::cout << unfold_view(view_src.load(), view_node, view_k).to_text() << "\n"; });

  // view-eq
  auto* view_eq = app.add_subcommand("view-eq", "compare two truncated views");
  GraphSource left, right;
  NodeId left_node = 0, right_node = 0;
  int eq_k = 0;
  left.add_to(view_eq);
  right.add_to(view_eq, "2");
  view_eq->add_option("--node", left_node)->required();
  view_eq->add_option("--node2", right_node)->required();
  view_eq->add_option("--k", eq_k)->required();
  view_eq->callback([&] {
    std::cout << (node_views_equal(left.load(), left_node, right.load(), right_node, eq_k) ? "yes" : "no") << "\n";
  });

  // run
  auto* run_cmd = app.add_subcommand("run", "run a named agent");
  GraphSource run_src;
  NodeId run_start = 0;
  std::string agent_name, trace_out;
  run_src.add_to(run_cmd);
  run_cmd->add_option("--start", run_start);
  run_cmd->add_option("--agent", agent_name)->required();
  run_cmd->add_option("--limit", limit)->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--trace", trace_out, "write the trace as JSON lines");
  run_cmd->callback([&] {
    const auto g = run_src.load();
    const auto named = agent_by_name(agent_name);
    const auto t = run(named.agent, g, run_start, limit, named.hooks);
    if (!trace_out.empty()) write_text(trace_out, trace_to_jsonl(t));
    nlohmann::json summary{{"agent", named.agent.name},  {"status", to_string(t.status)},
                           {"steps", t.length()},         {"visited", visited_count(t, g.size())},
                           {"size", g.size()},            {"explored", is_full_exploration(t, g)}};
    if (!t.fault.empty()) summary["fault"] = t.fault;
    std::cout << summary.dump() << "\n";
    exit_code = status_code(t.status);
  });

  // explo
  auto* explo = app.add_subcommand("explo", "run Explo on members of a family");
  std::string explo_family;
  int host_i = 1;
  NodeId explo_start = 0;
  bool all_starts = false;
  explo->add_option("--family", explo_family)->required();
  explo->add_option("--host-i", host_i)->required();
  auto* start_opt = explo->add_option("--start", explo_start);
  explo->add_flag("--all-starts", all_starts)->excludes(start_opt);
  explo->callback([&] {
    const auto f = family_by_name(explo_family);
    const auto& g = f.member(host_i);
    const auto agent = explo_agent(f);
    const NodeId first = all_starts ? 0 : explo_start;
    const NodeId last = all_starts ? g.size() - 1 : explo_start;
    bool failed = false, capped = false;
    for (NodeId s = first; s <= last; ++s) {
      const auto t = run(agent, g, s, limit);
      const bool explored = is_full_exploration(t, g);
      std::cout << nlohmann::json{{"start", s},
                                  {"status", to_string(t.status)},
                                  {"steps", t.length()},
                                  {"explored", explored}}
                       .dump()
                << "\n";
      failed |= t.status == RunStatus::Faulted || (t.status == RunStatus::Stopped && !explored);
      capped |= t.status == RunStatus::StepLimit;
    }
    exit_code = failed ? kError : capped ? kInconclusive : kOk;
  });

  // uxs
  auto* uxs = app.add_subcommand("uxs", "universal exploration sequences");
  uxs->require_subcommand(1);
  auto* uxs_search = uxs->add_subcommand("search", "greedy search plus exhaustive verification");
  auto* uxs_verify = uxs->add_subcommand("verify", "verify a sequence file");
  int uxs_n = 0;
  std::string uxs_out, uxs_file;
  uxs_search->add_option("--n", uxs_n)->required();
  uxs_search->add_option("--out", uxs_out);
  uxs_search->callback([&] { write_text(uxs_out, uxs_to_text(verified_uxs(uxs_n))); });
  uxs_verify->add_option("--n", uxs_n)->required();
  uxs_verify->add_option("--file", uxs_file)->required();
  uxs_verify->callback([&] {
    const bool ok = verify_uxs(load_uxs(uxs_file), uxs_n);
    std::cout << (ok ? "verified" : "not universal") << "\n";
    exit_code = ok ? kOk : kError;
  });

  // refute
  auto* refute_cmd = app.add_subcommand("refute", "run the adversary against a candidate");
  std::string candidate_name, mode_name = "enum", report_out;
  RefuteConfig cfg;
  refute_cmd->add_option("--candidate", candidate_name)->required();
  refute_cmd->add_option("--mode", mode_name)->check(CLI::IsMember({"enum", "decision"}));
  refute_cmd->add_option("--cap", cfg.step_cap)->check(CLI::PositiveNumber);
  refute_cmd->add_option("--report", report_out, "report JSON; traces go next to it");
  refute_cmd->callback([&] {
    const auto mode = mode_name == "enum" ? HookMode::Enumeration : HookMode::Decision;
    const auto rep = refute(candidate_by_name(candidate_name, mode), cfg);
    auto doc = rep.to_json();
    if (!report_out.empty()) {
      doc["e1_trace"] = report_out + ".e1.jsonl";
      doc["e2_trace"] = report_out + ".e2.jsonl";
      write_text(report_out + ".e1.jsonl", trace_to_jsonl(rep.e1));
      write_text(report_out + ".e2.jsonl", trace_to_jsonl(rep.e2));
      write_text(report_out, doc.dump(2) + "\n");
    }
    std::cout << doc.dump() << "\n";
    exit_code = rep.verdict == Verdict::Refuted      ? kOk
                : rep.verdict == Verdict::SurvivedCap ? kInconclusive
                                                      : kError;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  } catch (const ResourceCap& e) {
    std::cerr << "cap reached: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return exit_code;
}
