#include "eens.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eens/equivalence.hpp"
#include "eens/error.hpp"
#include "eens/problem.hpp"

using namespace eens;

struct eens_problem {
  ProblemSpec spec;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_err(char** err, const std::string& msg) {
  if (err) *err = dup_string(msg);
}

// Maps library faults to status codes; fn returns the status for the happy
// path.
template <class Fn>
eens_status guarded(char** err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    set_err(err, e.what());
    return EENS_INPUT_ERROR;
  } catch (const InconclusiveError& e) {
    set_err(err, e.what());
    return EENS_INCONCLUSIVE;
  } catch (const UnknownVerdictError& e) {
    set_err(err, e.what());
    return EENS_UNKNOWN;
  } catch (const SignatureError& e) {
    set_err(err, e.what());
    return EENS_INPUT_ERROR;
  } catch (const FocusError& e) {
    set_err(err, e.what());
    return EENS_INPUT_ERROR;
  } catch (const CoverageError& e) {
    set_err(err, e.what());
    return EENS_INPUT_ERROR;
  } catch (const Error& e) {
    set_err(err, e.what());
    return EENS_INPUT_ERROR;
  } catch (const std::exception& e) {
    set_err(err, std::string("internal error: ") + e.what());
    return EENS_INTERNAL_ERROR;
  }
}

Prover make_prover(const ProblemSpec& spec) { return Prover(spec.sig); }

}  // namespace

extern "C" {

const char* eens_version(void) { return "1.0.0"; }

const char* eens_status_name(eens_status status) {
  switch (status) {
    case EENS_OK: return "ok";
    case EENS_PROPERTY_FALSE: return "false";
    case EENS_UNKNOWN: return "unknown";
    case EENS_INPUT_ERROR: return "input-error";
    case EENS_INCONCLUSIVE: return "inconclusive";
    case EENS_INTERNAL_ERROR: return "internal-error";
  }
  return "?";
}

void eens_free(char* s) { std::free(s); }

eens_status eens_load_string(const char* text, const char* name,
                             eens_problem** out, char** err) {
  if (!text || !out) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    auto p = new eens_problem{parse_problem(text, name ? name : "<input>")};
    *out = p;
    return EENS_OK;
  });
}

eens_status eens_load_file(const char* path, eens_problem** out, char** err) {
  if (!path || !out) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  std::ifstream in(path);
  if (!in) {
    set_err(err, std::string("cannot open ") + path);
    return EENS_INPUT_ERROR;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return eens_load_string(buf.str().c_str(), path, out, err);
}

void eens_problem_free(eens_problem* p) { delete p; }

eens_status eens_explore(const eens_problem* p, const char* mode,
                         int max_nodes, char** json, char** dot, char** err) {
  if (!p || !mode) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    const ProblemSpec& spec = p->spec;
    std::string m = mode;
    if (m == "syntactic") {
      SyntacticGraph g = explore_syntactic(spec.ensemble, max_nodes);
      if (json) *json = dup_string(to_json(g, spec.proc_names));
      if (dot) *dot = dup_string(to_dot(g, spec.proc_names));
      return EENS_OK;
    }
    if (m == "semantic") {
      SemanticGraph g =
          explore_semantic(spec.semantic_root(), spec.interp, max_nodes);
      if (json) *json = dup_string(to_json(g, spec.proc_names));
      if (dot) *dot = dup_string(to_dot(g, spec.proc_names));
      return EENS_OK;
    }
    if (m == "symbolic") {
      if (!spec.has_focus) throw Error("problem declares no focus set");
      SymbolicGraph g = explore_symbolic(spec.symbolic_root(), spec.interp,
                                         spec.table, spec.focus, max_nodes);
      if (json) *json = dup_string(to_json(g, spec.proc_names));
      if (dot) *dot = dup_string(to_dot(g, spec.proc_names));
      return EENS_OK;
    }
    throw Error("unknown exploration mode '" + m + "'");
  });
}

eens_status eens_check(const eens_problem* p, const char* formula,
                       const char* mode, int max_nodes, int* verdict,
                       char** err) {
  if (!p || !formula || !mode || !verdict) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    const ProblemSpec& spec = p->spec;
    EnsembleFormula f;
    bool named = false;
    for (const auto& [n, g] : spec.formulas)
      if (n == formula) {
        f = g;
        named = true;
        break;
      }
    if (!named) f = parse_ensemble_formula(formula, spec);
    std::string m = mode;
    if (m == "semantic") {
      TriBool v = model_check(spec.semantic_root(), f, spec.interp, max_nodes);
      if (v == TriBool::Unknown)
        throw UnknownVerdictError(
            "exploration did not close within the node budget");
      *verdict = v == TriBool::True ? 1 : 0;
      return *verdict ? EENS_OK : EENS_PROPERTY_FALSE;
    }
    if (m == "symbolic") {
      if (!spec.has_focus) throw Error("problem declares no focus set");
      bool v = sym_model_check(spec.symbolic_root(), f, spec.interp,
                               spec.table, spec.focus, max_nodes);
      *verdict = v ? 1 : 0;
      return v ? EENS_OK : EENS_PROPERTY_FALSE;
    }
    throw Error("unknown checking mode '" + m + "'");
  });
}

eens_status eens_wlp(const eens_problem* p, const char* action_sym,
                     const char* event, const char* formula, char** out,
                     char** err) {
  if (!p || !action_sym || !event || !formula || !out) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    const ProblemSpec& spec = p->spec;
    EpistemicAction act = spec.action_ref(action_sym, event);
    Formula f = parse_formula(formula, spec.sig);
    *out = dup_string(to_string(wlp(act, f)));
    return EENS_OK;
  });
}

eens_status eens_verify_table(const eens_problem* p, char** report,
                              char** err) {
  if (!p) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    ProblemSpec spec = p->spec;  // verify marks the table; work on a copy
    if (!spec.has_focus) throw Error("problem declares no focus set");
    if (!spec.has_table)
      throw Error("problem declares no representative table");
    Prover prover = make_prover(spec);
    auto diags = verify_table(spec.table, spec.interp, spec.focus, prover);
    nlohmann::json j;
    j["schema"] = "eens-report-1";
    j["ok"] = diags.empty();
    auto arr = nlohmann::json::array();
    for (const auto& d : diags) {
      nlohmann::json e;
      e["action"] = d.action;
      if (d.focus_formula) e["formula"] = to_string(*d.focus_formula);
      e["message"] = d.describe();
      arr.push_back(e);
    }
    j["diagnostics"] = arr;
    if (report) *report = dup_string(j.dump(2));
    return diags.empty() ? EENS_OK : EENS_PROPERTY_FALSE;
  });
}

eens_status eens_search_repr(const eens_problem* p, const char* action_sym,
                             const char* event, const char* formula,
                             int size_bound, char** out, char** err) {
  if (!p || !action_sym || !event || !formula) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    const ProblemSpec& spec = p->spec;
    if (!spec.has_focus) throw Error("problem declares no focus set");
    EpistemicAction act = spec.action_ref(action_sym, event);
    Formula f = parse_formula(formula, spec.sig);
    Prover prover = make_prover(spec);
    auto found = search_representative(act, f, spec.focus, size_bound, prover);
    if (!found) return EENS_PROPERTY_FALSE;
    if (out) *out = dup_string(to_string(*found));
    return EENS_OK;
  });
}

eens_status eens_equiv(const eens_problem* p, int depth, int max_nodes,
                       char** report, char** err) {
  if (!p) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    const ProblemSpec& spec = p->spec;
    if (!spec.has_focus) throw Error("problem declares no focus set");
    if (spec.init_semantic.empty() || !spec.init_symbolic)
      throw Error("equivalence needs both initial environments");
    Configuration sem = spec.semantic_root();
    SymbolicConfiguration sym = spec.symbolic_root();

    EquivalenceReport sim = check_simulation(sem, sym, spec.interp, spec.table,
                                             spec.focus, depth, max_nodes);
    EquivalenceReport diff =
        differential_check(sem, sym, spec.formulas, spec.interp, spec.table,
                           spec.focus, max_nodes);
    nlohmann::json j;
    j["schema"] = "eens-report-1";
    j["roots_equivalent"] = f_equivalent(sem.cls, sym.state, spec.focus);
    j["simulation"] = nlohmann::json::parse(to_json(sim));
    j["differential"] = nlohmann::json::parse(to_json(diff));
    bool ok = sim.ok() && diff.ok();
    j["ok"] = ok;
    if (report) *report = dup_string(j.dump(2));
    return ok ? EENS_OK : EENS_PROPERTY_FALSE;
  });
}

namespace {

eens_status prove_common(const EnsembleSignature& sig, const char* formula,
                         int want_valid, int* verdict, char** model,
                         char** err) {
  return guarded(err, [&]() {
    Prover prover(sig);
    Formula f = parse_formula(formula, sig);
    if (want_valid) {
      bool v = prover.is_valid(f);
      *verdict = v ? 1 : 0;
      if (!v && model) {
        auto counter = prover.is_satisfiable(Formula::lnot(f));
        if (counter.witness) *model = dup_string(to_json(*counter.witness));
      }
      return v ? EENS_OK : EENS_PROPERTY_FALSE;
    }
    auto r = prover.is_satisfiable(f);
    *verdict = r.verdict == Verdict::Sat ? 1 : 0;
    if (r.witness && model) *model = dup_string(to_json(*r.witness));
    return r.verdict == Verdict::Sat ? EENS_OK : EENS_PROPERTY_FALSE;
  });
}

}  // namespace

eens_status eens_prove(const eens_problem* p, const char* formula,
                       int want_valid, int* verdict, char** model,
                       char** err) {
  if (!p || !formula || !verdict) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return prove_common(p->spec.sig, formula, want_valid, verdict, model, err);
}

eens_status eens_prove_signature(const char* agents, const char* props,
                                 const char* formula, int want_valid,
                                 int* verdict, char** model, char** err) {
  if (!agents || !formula || !verdict) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    EnsembleSignature sig;
    std::stringstream as(agents);
    std::string item;
    while (std::getline(as, item, ','))
      if (!item.empty()) sig.agents.insert(AgentId{item});
    if (props) {
      std::stringstream ps(props);
      while (std::getline(ps, item, ','))
        if (!item.empty()) sig.props.insert(Prop{item});
    }
    return prove_common(sig, formula, want_valid, verdict, model, err);
  });
}

eens_status eens_kripke_dot(const char* kripke_json, int auto_close,
                            char** dot, char** err) {
  if (!kripke_json || !dot) {
    set_err(err, "null argument");
    return EENS_INPUT_ERROR;
  }
  return guarded(err, [&]() {
    PointedKripke s = pointed_kripke_from_json(kripke_json, auto_close != 0);
    *dot = dup_string(to_dot(s));
    return EENS_OK;
  });
}

}  // extern "C"
