#include "eens/symbolic_engine.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eens/error.hpp"

namespace eens {

SymbolicState::SymbolicState(std::vector<Formula> members,
                             const FocusSet& focus) {
  for (auto& f : members) {
    Formula d = desugar(f);
    if (!focus.contains(d))
      throw FocusError("symbolic state member outside the focus set: " +
                       to_string(d));
    members_.insert(std::move(d));
  }
  if (focus.contains(Formula::top())) members_.insert(Formula::top());
}

std::string SymbolicState::key() const {
  std::ostringstream os;
  for (const auto& f : members_) os << to_string(f) << ";";
  return os.str();
}

bool sym_satisfies(const SymbolicState& s, const Formula& f,
                   const FocusSet& F) {
  Formula d = desugar(f);
  if (F.contains(d)) return s.members().count(d) > 0;
  switch (d.kind()) {
    case Formula::Kind::Top:
      return true;
    case Formula::Kind::Not:
      return !sym_satisfies(s, d.lhs(), F);
    case Formula::Kind::And:
      return sym_satisfies(s, d.lhs(), F) && sym_satisfies(s, d.rhs(), F);
    default:
      throw FocusError("formula outside the Boolean closure of the focus: " +
                       to_string(d));
  }
}

namespace {

Formula guard_with_pre(const Formula& pre, Formula f) {
  // pre -> f, in core form.
  return Formula::lnot(Formula::land(pre, Formula::lnot(std::move(f))));
}

Formula wlp_core(const EpistemicAction& e, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return Formula::top();
    case Formula::Kind::Atom:
      return guard_with_pre(desugar(e.pre()), f);
    case Formula::Kind::Not:
      return guard_with_pre(desugar(e.pre()),
                            Formula::lnot(wlp_core(e, f.lhs())));
    case Formula::Kind::And:
      return Formula::land(wlp_core(e, f.lhs()), wlp_core(e, f.rhs()));
    case Formula::Kind::Knows: {
      std::vector<Formula> parts;
      for (int ev : e.model->indistinguishable(f.agent(), e.point))
        parts.push_back(Formula::knows(f.agent(), wlp_core(e.at(ev), f.lhs())));
      return guard_with_pre(desugar(e.pre()), Formula::conj(parts));
    }
    default:
      return wlp_core(e, desugar(f));
  }
}

}  // namespace

Formula wlp(const EpistemicAction& e, const Formula& f) {
  return simplify_light(wlp_core(e, desugar(f)));
}

void RepresentativeTable::set_pre(const EpistemicAction& e,
                                  const std::string& display,
                                  const Formula& rho) {
  std::string key = canonical_key(e);
  actions.insert({key, {e, display}});
  pre_repr[key] = desugar(rho);
}

void RepresentativeTable::set_wlp(const EpistemicAction& e,
                                  const std::string& display,
                                  const Formula& focus_formula,
                                  const Formula& rho) {
  std::string key = canonical_key(e);
  actions.insert({key, {e, display}});
  wlp_repr[{key, desugar(focus_formula)}] = desugar(rho);
}

const Formula& RepresentativeTable::pre_of(const EpistemicAction& e) const {
  auto it = pre_repr.find(canonical_key(e));
  if (it == pre_repr.end())
    throw CoverageError("no precondition representative for action");
  return it->second;
}

const Formula& RepresentativeTable::wlp_of(const EpistemicAction& e,
                                           const Formula& f) const {
  auto it = wlp_repr.find({canonical_key(e), desugar(f)});
  if (it == wlp_repr.end())
    throw CoverageError("no wlp representative for action and formula " +
                        to_string(f));
  return it->second;
}

std::string TableDiagnostic::describe() const {
  std::ostringstream os;
  os << action;
  if (focus_formula) os << " / " << to_string(*focus_formula);
  switch (kind) {
    case Kind::MissingPre:
      os << ": missing precondition representative";
      break;
    case Kind::MissingWlp:
      os << ": missing wlp representative";
      break;
    case Kind::NotInClosure:
      os << ": representative outside the Boolean closure";
      break;
    case Kind::NotEquivalent:
      os << ": representative is not equivalent (" << detail << ")";
      break;
  }
  return os.str();
}

std::vector<TableDiagnostic> verify_table(RepresentativeTable& t,
                                          const ActionInterpretation& interp,
                                          const FocusSet& F,
                                          const Prover& prover) {
  std::vector<TableDiagnostic> out;
  for (const auto& e : interp.all_actions()) {
    std::string key = canonical_key(e);
    std::string display = key;
    if (auto it = t.actions.find(key); it != t.actions.end())
      display = it->second.display;

    auto pre_it = t.pre_repr.find(key);
    if (pre_it == t.pre_repr.end()) {
      out.push_back({TableDiagnostic::Kind::MissingPre, display, {}, ""});
    } else if (!in_boolean_closure(pre_it->second, F)) {
      out.push_back({TableDiagnostic::Kind::NotInClosure, display, {},
                     to_string(pre_it->second)});
    } else if (!prover.equivalent(e.pre(), pre_it->second)) {
      out.push_back({TableDiagnostic::Kind::NotEquivalent, display, {},
                     "pre " + to_string(desugar(e.pre())) + " vs " +
                         to_string(pre_it->second)});
    }

    for (const auto& f : F) {
      auto it = t.wlp_repr.find({key, f});
      if (it == t.wlp_repr.end()) {
        out.push_back({TableDiagnostic::Kind::MissingWlp, display, f, ""});
        continue;
      }
      if (!in_boolean_closure(it->second, F)) {
        out.push_back({TableDiagnostic::Kind::NotInClosure, display, f,
                       to_string(it->second)});
        continue;
      }
      Formula computed = wlp(e, f);
      if (!prover.equivalent(computed, it->second))
        out.push_back({TableDiagnostic::Kind::NotEquivalent, display, f,
                       "wlp " + to_string(computed) + " vs " +
                           to_string(it->second)});
    }
  }
  t.verified = out.empty();
  return out;
}

namespace {

// Small deterministic pool of pointed structures over the signature, used
// to prune representative candidates before the prover is consulted.
std::vector<PointedKripke> sample_pool(const EnsembleSignature& sig) {
  std::vector<PointedKripke> pool;
  std::vector<Prop> props(sig.props.begin(), sig.props.end());
  std::vector<AgentId> agents(sig.agents.begin(), sig.agents.end());

  auto label_of = [&](unsigned mask) {
    std::set<Prop> l;
    for (std::size_t i = 0; i < props.size(); ++i)
      if (mask & (1u << i)) l.insert(props[i]);
    return l;
  };

  unsigned n_labels = 1u << std::min<std::size_t>(props.size(), 4);

  // All one-world structures.
  for (unsigned m = 0; m < n_labels; ++m) {
    PointedKripke s;
    s.structure.worlds = {"u0"};
    s.structure.label = {label_of(m)};
    for (const auto& a : agents) s.structure.access[a] = {{0, 0}};
    s.point = 0;
    pool.push_back(std::move(s));
  }

  // All two-world structures up to the point: each agent either separates
  // the worlds or merges them.
  unsigned n_rel = 1u << agents.size();
  for (unsigned m0 = 0; m0 < n_labels; ++m0)
    for (unsigned m1 = 0; m1 < n_labels; ++m1)
      for (unsigned rel = 0; rel < n_rel; ++rel) {
        PointedKripke s;
        s.structure.worlds = {"u0", "u1"};
        s.structure.label = {label_of(m0), label_of(m1)};
        for (std::size_t i = 0; i < agents.size(); ++i) {
          auto& r = s.structure.access[agents[i]];
          r.insert({0, 0});
          r.insert({1, 1});
          if (rel & (1u << i)) {
            r.insert({0, 1});
            r.insert({1, 0});
          }
        }
        s.point = 0;
        pool.push_back(std::move(s));
      }

  // Random three- and four-world structures, deterministic seed.
  std::mt19937 rng(20240901);
  auto rand_partition = [&](int n) {
    std::vector<int> block(n);
    int blocks = 0;
    for (int w = 0; w < n; ++w) {
      std::uniform_int_distribution<int> d(0, blocks);
      int b = d(rng);
      block[w] = b;
      if (b == blocks) ++blocks;
    }
    return block;
  };
  for (int trial = 0; trial < 220; ++trial) {
    int n = 3 + (trial % 2);
    PointedKripke s;
    for (int w = 0; w < n; ++w) {
      s.structure.worlds.push_back("u" + std::to_string(w));
      std::uniform_int_distribution<unsigned> d(0, n_labels - 1);
      s.structure.label.push_back(label_of(d(rng)));
    }
    for (const auto& a : agents) {
      auto block = rand_partition(n);
      auto& r = s.structure.access[a];
      for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
          if (block[w] == block[v]) r.insert({w, v});
    }
    std::uniform_int_distribution<int> d(0, n - 1);
    s.point = d(rng);
    pool.push_back(std::move(s));
  }
  return pool;
}

}  // namespace

std::optional<Formula> search_representative(const EpistemicAction& e,
                                             const Formula& f,
                                             const FocusSet& F,
                                             int size_bound,
                                             const Prover& prover) {
  if (size_bound < 1) throw Error("search: size bound must be at least 1");
  Formula target = wlp(e, f);

  auto pool = sample_pool(prover.signature());
  std::vector<bool> target_truth(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    target_truth[i] = satisfies(pool[i], target);

  std::vector<Formula> focus(F.begin(), F.end());
  int nf = static_cast<int>(focus.size());

  // Conjunctions of focus literals, encoded as trits (skip / positive /
  // negative per focus formula), ordered by literal count then code.
  struct Conjunct {
    Formula formula;
    std::vector<bool> truth;
    int literals;
  };
  std::vector<Conjunct> conjuncts;
  long total = 1;
  for (int i = 0; i < nf; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    long c = code;
    std::vector<Formula> parts;
    for (int i = 0; i < nf; ++i) {
      int trit = static_cast<int>(c % 3);
      c /= 3;
      if (trit == 1) parts.push_back(focus[i]);
      if (trit == 2) parts.push_back(Formula::lnot(focus[i]));
    }
    Conjunct cj;
    cj.literals = static_cast<int>(parts.size());
    cj.formula = Formula::conj(parts);
    cj.truth.resize(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
      cj.truth[i] = satisfies(pool[i], cj.formula);
    conjuncts.push_back(std::move(cj));
  }
  std::stable_sort(conjuncts.begin(), conjuncts.end(),
                   [](const Conjunct& a, const Conjunct& b) {
                     return a.literals < b.literals;
                   });

  auto confirmed = [&](const Formula& candidate,
                       const std::vector<bool>& truth) -> bool {
    if (truth != target_truth) return false;
    return prover.equivalent(target, candidate);
  };

  // false (empty disjunction) first.
  {
    Formula falsum = desugar(Formula::bottom());
    std::vector<bool> truth(pool.size(), false);
    if (confirmed(falsum, truth)) return falsum;
  }
  // Single disjuncts; the empty conjunct is `true`.
  for (const auto& cj : conjuncts)
    if (confirmed(cj.formula, cj.truth)) return cj.formula;
  // Unions of up to size_bound non-trivial conjuncts.
  int m = static_cast<int>(conjuncts.size());
  std::vector<int> pick;
  std::function<std::optional<Formula>(int, int)> enumerate =
      [&](int k, int from) -> std::optional<Formula> {
    if (k == 0) {
      std::vector<bool> truth(pool.size(), false);
      for (int idx : pick)
        for (std::size_t i = 0; i < pool.size(); ++i)
          truth[i] = truth[i] || conjuncts[idx].truth[i];
      if (truth != target_truth) return std::nullopt;
      Formula cand = conjuncts[pick[0]].formula;
      for (std::size_t i = 1; i < pick.size(); ++i)
        cand = desugar(Formula::lor(cand, conjuncts[pick[i]].formula));
      if (prover.equivalent(target, cand)) return cand;
      return std::nullopt;
    }
    for (int i = from; i < m; ++i) {
      if (conjuncts[i].literals == 0) continue;  // true disjunct is absorbing
      pick.push_back(i);
      if (auto found = enumerate(k - 1, i + 1)) return found;
      pick.pop_back();
    }
    return std::nullopt;
  };
  for (int k = 2; k <= size_bound; ++k) {
    pick.clear();
    if (auto found = enumerate(k, 0)) return found;
  }
  return std::nullopt;
}

SymbolicState sym_update(const SymbolicState& s, const EpistemicAction& e,
                         const RepresentativeTable& t, const FocusSet& F) {
  std::vector<Formula> next;
  for (const auto& f : F)
    if (sym_satisfies(s, t.wlp_of(e, f), F)) next.push_back(f);
  return SymbolicState(std::move(next), F);
}

std::vector<SymbolicState> sym_choice_step(const SymbolicState& s,
                                           const ChoiceAction& c,
                                           const RepresentativeTable& t,
                                           const FocusSet& F) {
  std::vector<SymbolicState> out;
  for (const auto& alt : c.alternatives) {
    if (!sym_satisfies(s, t.pre_of(alt), F)) continue;
    SymbolicState succ = sym_update(s, alt, t, F);
    if (std::find(out.begin(), out.end(), succ) == out.end())
      out.push_back(std::move(succ));
  }
  return out;
}

namespace {

void collect_guards(const Process& p, std::set<Formula>& out) {
  switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Var:
      return;
    case Process::Kind::Prefix:
      collect_guards(p.lhs(), out);
      return;
    case Process::Kind::Guard:
      out.insert(desugar(p.guard_formula()));
      collect_guards(p.lhs(), out);
      return;
    case Process::Kind::Choice:
      collect_guards(p.lhs(), out);
      collect_guards(p.rhs(), out);
      return;
    case Process::Kind::Rec:
      collect_guards(p.lhs(), out);
      return;
  }
}

}  // namespace

void check_guards_in_focus(const Ensemble& e, const FocusSet& F) {
  std::set<Formula> guards;
  for (const auto& [a, p] : e.family) {
    (void)a;
    collect_guards(p, guards);
  }
  std::vector<std::string> offending;
  for (const auto& g : guards)
    if (!in_boolean_closure(g, F)) offending.push_back(to_string(g));
  if (!offending.empty()) {
    std::ostringstream os;
    os << "ensemble guards outside the Boolean closure of the focus:";
    for (const auto& g : offending) os << " " << g << ";";
    throw FocusError(os.str());
  }
}

std::vector<std::pair<ActionSym, SymbolicConfiguration>> sym_config_step(
    const SymbolicConfiguration& c, const ActionInterpretation& interp,
    const RepresentativeTable& t, const FocusSet& F) {
  std::vector<std::pair<ActionSym, SymbolicConfiguration>> out;
  for (auto& tr : ensemble_derivatives(c.ensemble)) {
    if (!sym_satisfies(c.state, tr.guard, F)) continue;
    for (auto& succ : sym_choice_step(c.state, interp.at(tr.action), t, F)) {
      bool dup = false;
      for (const auto& [n, cfg] : out)
        if (n == tr.action && cfg.ensemble == tr.target && cfg.state == succ) {
          dup = true;
          break;
        }
      if (!dup) out.push_back({tr.action, {tr.target, std::move(succ)}});
    }
  }
  return out;
}

SymbolicGraph explore_symbolic(const SymbolicConfiguration& c,
                               const ActionInterpretation& interp,
                               const RepresentativeTable& t, const FocusSet& F,
                               int max_nodes) {
  check_guards_in_focus(c.ensemble, F);
  SymbolicEnv env{&interp, &t, &F};
  return explore(env, c.ensemble, c.state, max_nodes);
}

bool sym_model_check(const SymbolicConfiguration& c, const EnsembleFormula& f,
                     const ActionInterpretation& interp,
                     const RepresentativeTable& t, const FocusSet& F,
                     int max_nodes) {
  EnsembleFormula norm = normalize(f);
  if (!within_focus(norm, F))
    throw FocusError(
        "formula contains epistemic parts outside the Boolean closure of the "
        "focus: " +
        to_string(f));
  SymbolicGraph g = explore_symbolic(c, interp, t, F, max_nodes);
  SymbolicEnv env{&interp, &t, &F};
  TriBool v = check_formula(g, env, norm);
  if (v == TriBool::Unknown)
    throw UnknownVerdictError(
        "symbolic exploration did not close within the node budget");
  return v == TriBool::True;
}

namespace {

std::string state_summary(const SymbolicState& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& f : s.members()) {
    if (!first) os << ", ";
    first = false;
    os << to_string(f);
  }
  os << "}";
  return os.str();
}

}  // namespace

std::string to_dot(const SymbolicGraph& g,
                   const std::map<Process, std::string>& name_hints) {
  std::ostringstream os;
  os << "digraph symbolic {\n  rankdir=TB;\n  node [shape=box, style=rounded];\n";
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    os << "  n" << n << " [label=\""
       << describe(g.nodes[n].ensemble, name_hints) << "\\n"
       << state_summary(g.nodes[n].state) << "\"";
    if (g.frontier.count(static_cast<int>(n))) os << ", style=dashed";
    os << "];\n";
  }
  for (const auto& e : g.edges)
    os << "  n" << e.from << " -> n" << e.to << " [label=\""
       << to_string(e.guard) << " : " << e.action.name << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const SymbolicGraph& g,
                    const std::map<Process, std::string>& name_hints) {
  nlohmann::json j;
  j["schema"] = "eens-graph-1";
  j["mode"] = "symbolic";
  j["closed"] = g.closed();
  auto nodes = nlohmann::json::array();
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    nlohmann::json jn;
    jn["id"] = n;
    jn["ensemble"] = describe(g.nodes[n].ensemble, name_hints);
    auto members = nlohmann::json::array();
    for (const auto& f : g.nodes[n].state.members())
      members.push_back(to_string(f));
    jn["state"] = members;
    jn["frontier"] = g.frontier.count(static_cast<int>(n)) > 0;
    nodes.push_back(jn);
  }
  j["nodes"] = nodes;
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"from", e.from},
                     {"guard", to_string(e.guard)},
                     {"action", e.action.name},
                     {"to", e.to}});
  j["edges"] = edges;
  return j.dump(2);
}

}  // namespace eens
