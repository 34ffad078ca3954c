// Command-line front end; all functionality is reached through the C API of
// the shared library.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eens.h"

namespace {

struct Freed {
  char* s = nullptr;
  ~Freed() { eens_free(s); }
};

struct Problem {
  eens_problem* p = nullptr;
  ~Problem() { eens_problem_free(p); }
};

int fail_with(eens_status st, const char* err) {
  std::cerr << "error (" << eens_status_name(st)
            << "): " << (err ? err : "unspecified") << "\n";
  return static_cast<int>(st);
}

int load(const std::string& path, Problem& problem) {
  Freed err;
  eens_status st = eens_load_file(path.c_str(), &problem.p, &err.s);
  if (st != EENS_OK) return fail_with(st, err.s);
  return 0;
}

bool write_output(const std::string& path, const char* content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return true;
}

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(EENS_INPUT_ERROR);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epistemic ensemble toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", eens_version());

  std::string file, mode = "semantic", formula, out_json, out_dot;
  std::string action_sym, event, agents, props, semantic_json;
  int max_nodes = 10000, size_bound = 2, depth = -1;
  bool syntactic = false, semantic = false, symbolic = false;
  bool want_sat = false, want_valid = false, auto_close = false;

  auto add_mode_flags = [&](CLI::App* cmd) {
    cmd->add_flag("--syntactic", syntactic, "uninterpreted guard labels");
    cmd->add_flag("--semantic", semantic, "state-class environment");
    cmd->add_flag("--symbolic", symbolic, "knowledge-base environment");
  };
  auto resolve_mode = [&](bool allow_syntactic) -> std::string {
    int picked = (syntactic ? 1 : 0) + (semantic ? 1 : 0) + (symbolic ? 1 : 0);
    if (picked > 1) {
      std::cerr << "error: pick at most one mode\n";
      std::exit(EENS_INPUT_ERROR);
    }
    if (syntactic) {
      if (!allow_syntactic) {
        std::cerr << "error: --syntactic does not apply here\n";
        std::exit(EENS_INPUT_ERROR);
      }
      return "syntactic";
    }
    if (symbolic) return "symbolic";
    return "semantic";
  };

  auto* cmd_explore =
      app.add_subcommand("explore", "compute the reachable configurations");
  cmd_explore->add_option("file", file)->required();
  add_mode_flags(cmd_explore);
  cmd_explore->add_option("--max-nodes", max_nodes);
  cmd_explore->add_option("--json", out_json, "write graph JSON (- = stdout)");
  cmd_explore->add_option("--dot", out_dot, "write graph DOT (- = stdout)");

  auto* cmd_check =
      app.add_subcommand("check", "model-check a dynamic ensemble formula");
  cmd_check->add_option("file", file)->required();
  cmd_check->add_option("--formula", formula, "declared name or inline text")
      ->required();
  add_mode_flags(cmd_check);
  cmd_check->add_option("--max-nodes", max_nodes);

  auto* cmd_wlp =
      app.add_subcommand("wlp", "weakest liberal precondition of an action");
  cmd_wlp->add_option("file", file)->required();
  cmd_wlp->add_option("--action", action_sym, "interpreted action symbol")
      ->required();
  cmd_wlp->add_option("--event", event, "event the action is pointed at")
      ->default_val("ek");
  cmd_wlp->add_option("--formula", formula)->required();

  auto* cmd_verify = app.add_subcommand(
      "verify-table", "prove the representative table correct");
  cmd_verify->add_option("file", file)->required();
  cmd_verify->add_option("--json", out_json, "write report JSON (- = stdout)");

  auto* cmd_search = app.add_subcommand(
      "search-repr", "search a Boolean-closure representative of a wlp");
  cmd_search->add_option("file", file)->required();
  cmd_search->add_option("--action", action_sym)->required();
  cmd_search->add_option("--event", event)->default_val("ek");
  cmd_search->add_option("--formula", formula)->required();
  cmd_search->add_option("--size-bound", size_bound);

  auto* cmd_equiv = app.add_subcommand(
      "equiv", "relate the semantic and symbolic environments");
  cmd_equiv->add_option("file", file)->required();
  cmd_equiv->add_option("--depth", depth, "simulation depth (-1 = closure)");
  cmd_equiv->add_option("--max-nodes", max_nodes);
  cmd_equiv->add_option("--json", out_json, "write report JSON (- = stdout)");

  auto* cmd_prove = app.add_subcommand("prove", "S5 satisfiability/validity");
  cmd_prove->add_option("file", file, "problem file supplying the signature");
  cmd_prove->add_flag("--sat", want_sat, "decide satisfiability");
  cmd_prove->add_flag("--valid", want_valid, "decide validity");
  cmd_prove->add_option("--formula", formula)->required();
  cmd_prove->add_option("--agents", agents, "inline signature agent list");
  cmd_prove->add_option("--props", props, "inline signature proposition list");
  cmd_prove->add_option("--json", out_json, "write witness JSON (- = stdout)");

  auto* cmd_dot = app.add_subcommand(
      "export-dot", "render a structure or configuration graph as DOT");
  cmd_dot->add_option("file", file, "problem file")->required();
  add_mode_flags(cmd_dot);
  cmd_dot->add_option("--max-nodes", max_nodes);
  cmd_dot->add_option("--kripke", semantic_json,
                      "render a structure JSON file instead");
  cmd_dot->add_flag("--auto-close", auto_close,
                    "close access relations instead of rejecting");
  cmd_dot->add_option("--out", out_dot, "output path (- = stdout)")
      ->default_val("-");

  CLI11_PARSE(app, argc, argv);

  if (cmd_explore->parsed()) {
    Problem problem;
    if (int rc = load(file, problem)) return rc;
    Freed json, dot, err;
    std::string m = resolve_mode(true);
    eens_status st = eens_explore(problem.p, m.c_str(), max_nodes, &json.s,
                                  &dot.s, &err.s);
    if (st != EENS_OK) return fail_with(st, err.s);
    if (!out_json.empty() && !write_output(out_json, json.s))
      return EENS_INPUT_ERROR;
    if (!out_dot.empty() && !write_output(out_dot, dot.s))
      return EENS_INPUT_ERROR;
    if (out_json.empty() && out_dot.empty()) std::cout << json.s << "\n";
    return EENS_OK;
  }

  if (cmd_check->parsed()) {
    Problem problem;
    if (int rc = load(file, problem)) return rc;
    Freed err;
    int verdict = 0;
    std::string m = resolve_mode(false);
    eens_status st = eens_check(problem.p, formula.c_str(), m.c_str(),
                                max_nodes, &verdict, &err.s);
    if (st == EENS_OK || st == EENS_PROPERTY_FALSE) {
      std::cout << (verdict ? "true" : "false") << "\n";
      return static_cast<int>(st);
    }
    return fail_with(st, err.s);
  }

  if (cmd_wlp->parsed()) {
    Problem problem;
    if (int rc = load(file, problem)) return rc;
    Freed out, err;
    eens_status st = eens_wlp(problem.p, action_sym.c_str(), event.c_str(),
                              formula.c_str(), &out.s, &err.s);
    if (st != EENS_OK) return fail_with(st, err.s);
    std::cout << out.s << "\n";
    return EENS_OK;
  }

  if (cmd_verify->parsed()) {
    Problem problem;
    if (int rc = load(file, problem)) return rc;
    Freed report, err;
    eens_status st = eens_verify_table(problem.p, &report.s, &err.s);
    if (st == EENS_OK || st == EENS_PROPERTY_FALSE) {
      if (!out_json.empty())
        write_output(out_json, report.s);
      else
        std::cout << report.s << "\n";
      return static_cast<int>(st);
    }
    return fail_with(st, err.s);
  }

  if (cmd_search->parsed()) {
    Problem problem;
    if (int rc = load(file, problem)) return rc;
    Freed out, err;
    eens_status st =
        eens_search_repr(problem.p, action_sym.c_str(), event.c_str(),
                         formula.c_str(), size_bound, &out.s, &err.s);
    if (st == EENS_OK) {
      std::cout << out.s << "\n";
      return EENS_OK;
    }
    if (st == EENS_PROPERTY_FALSE) {
      std::cout << "no representative within bound\n";
      return static_cast<int>(st);
    }
    return fail_with(st, err.s);
  }

  if (cmd_equiv->parsed()) {
    Problem problem;
    if (int rc = load(file, problem)) return rc;
    Freed report, err;
    eens_status st =
        eens_equiv(problem.p, depth, max_nodes, &report.s, &err.s);
    if (st == EENS_OK || st == EENS_PROPERTY_FALSE) {
      if (!out_json.empty())
        write_output(out_json, report.s);
      else
        std::cout << report.s << "\n";
      return static_cast<int>(st);
    }
    return fail_with(st, err.s);
  }

  if (cmd_prove->parsed()) {
    if (want_sat == want_valid) {
      std::cerr << "error: pick exactly one of --sat / --valid\n";
      return EENS_INPUT_ERROR;
    }
    Freed model, err;
    int verdict = 0;
    eens_status st;
    if (!file.empty()) {
      Problem problem;
      if (int rc = load(file, problem)) return rc;
      st = eens_prove(problem.p, formula.c_str(), want_valid ? 1 : 0, &verdict,
                      &model.s, &err.s);
    } else {
      st = eens_prove_signature(agents.c_str(), props.c_str(), formula.c_str(),
                                want_valid ? 1 : 0, &verdict, &model.s,
                                &err.s);
    }
    if (st == EENS_OK || st == EENS_PROPERTY_FALSE) {
      if (want_valid)
        std::cout << (verdict ? "valid" : "not valid") << "\n";
      else
        std::cout << (verdict ? "satisfiable" : "unsatisfiable") << "\n";
      if (model.s && !out_json.empty()) write_output(out_json, model.s);
      return static_cast<int>(st);
    }
    return fail_with(st, err.s);
  }

  if (cmd_dot->parsed()) {
    Freed dot, err;
    if (!semantic_json.empty()) {
      std::string text = read_all(semantic_json);
      eens_status st =
          eens_kripke_dot(text.c_str(), auto_close ? 1 : 0, &dot.s, &err.s);
      if (st != EENS_OK) return fail_with(st, err.s);
      return write_output(out_dot, dot.s) ? EENS_OK : EENS_INPUT_ERROR;
    }
    Problem problem;
    if (int rc = load(file, problem)) return rc;
    std::string m = resolve_mode(true);
    eens_status st =
        eens_explore(problem.p, m.c_str(), max_nodes, nullptr, &dot.s, &err.s);
    if (st != EENS_OK) return fail_with(st, err.s);
    return write_output(out_dot, dot.s) ? EENS_OK : EENS_INPUT_ERROR;
  }

  return EENS_INPUT_ERROR;
}
