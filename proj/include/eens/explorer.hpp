#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "eens/dynamic_formula.hpp"
#include "eens/ensemble.hpp"
#include "eens/error.hpp"

namespace eens {

enum class TriBool { False, Unknown, True };

inline TriBool tri_not(TriBool v) {
  if (v == TriBool::Unknown) return v;
  return v == TriBool::True ? TriBool::False : TriBool::True;
}

inline TriBool tri_and(TriBool a, TriBool b) { return a < b ? a : b; }

// Reachable configurations of an ensemble over an environment. Env supplies
// the environment state type, a canonical identity key, guard evaluation,
// and the action-symbol step relation:
//
//   using State = ...;
//   std::string key(const State&) const;
//   bool satisfies(const State&, const Formula&) const;
//   std::vector<State> step(const State&, const ActionSym&) const;
template <class Env>
struct ConfigGraph {
  using State = typename Env::State;

  struct Node {
    Ensemble ensemble;
    State state;
  };
  struct Edge {
    int from;
    Formula guard;
    ActionSym action;
    int to;
  };

  std::vector<Node> nodes;  // node 0 is the root
  std::vector<Edge> edges;
  std::set<int> frontier;  // nodes whose outgoing edges are unknown

  bool closed() const { return frontier.empty(); }
};

// Breadth-first closure of the step relation under canonical node identity
// (ensemble term + environment key). A node whose expansion would exceed
// max_nodes keeps all its outgoing edges unrecorded and lands in the
// frontier.
template <class Env>
ConfigGraph<Env> explore(const Env& env, const Ensemble& root_ensemble,
                         const typename Env::State& root_state,
                         int max_nodes = 10000) {
  if (max_nodes < 1) throw Error("explore: max_nodes must be at least 1");
  ConfigGraph<Env> g;
  std::map<std::pair<Ensemble, std::string>, int> index;
  g.nodes.push_back({root_ensemble, root_state});
  index.emplace(std::make_pair(root_ensemble, env.key(root_state)), 0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int n = queue.front();
    queue.pop_front();
    // Collect successors first so a budget overflow leaves the node intact.
    std::vector<typename ConfigGraph<Env>::Edge> new_edges;
    std::vector<typename ConfigGraph<Env>::Node> new_nodes;
    std::map<std::pair<Ensemble, std::string>, int> staged;
    bool overflow = false;
    Ensemble ens = g.nodes[n].ensemble;
    typename Env::State state = g.nodes[n].state;
    for (auto& t : ensemble_derivatives(ens)) {
      if (!env.satisfies(state, t.guard)) continue;
      for (auto& succ : env.step(state, t.action)) {
        auto key = std::make_pair(t.target, env.key(succ));
        int to;
        if (auto it = index.find(key); it != index.end()) {
          to = it->second;
        } else if (auto it2 = staged.find(key); it2 != staged.end()) {
          to = it2->second;
        } else if (static_cast<int>(g.nodes.size() + new_nodes.size()) <
                   max_nodes) {
          to = static_cast<int>(g.nodes.size() + new_nodes.size());
          staged.emplace(key, to);
          new_nodes.push_back({t.target, std::move(succ)});
        } else {
          overflow = true;
          break;
        }
        typename ConfigGraph<Env>::Edge e{n, t.guard, t.action, to};
        bool dup = false;
        for (const auto& prev : new_edges)
          if (prev.from == e.from && prev.to == e.to &&
              prev.action == e.action && prev.guard == e.guard) {
            dup = true;
            break;
          }
        if (!dup) new_edges.push_back(std::move(e));
      }
      if (overflow) break;
    }
    if (overflow) {
      g.frontier.insert(n);
      continue;
    }
    for (auto& node : new_nodes) {
      int id = static_cast<int>(g.nodes.size());
      index.emplace(std::make_pair(node.ensemble, env.key(node.state)), id);
      g.nodes.push_back(std::move(node));
      queue.push_back(id);
    }
    for (auto& e : new_edges) g.edges.push_back(std::move(e));
  }
  return g;
}

// Node relation of a compound action over an explored graph, together with
// the set of nodes from which some execution prefix escapes into the
// frontier (where continuations are unknown).
struct ActionRelation {
  std::vector<std::set<int>> succ;
  std::set<int> escapes;
};

template <class Env>
ActionRelation compound_relation_impl(const ConfigGraph<Env>& g,
                                      const Env& env,
                                      const CompoundAction& act) {
  int n = static_cast<int>(g.nodes.size());
  ActionRelation r;
  r.succ.assign(n, {});
  switch (act.kind()) {
    case CompoundAction::Kind::Atom: {
      for (const auto& e : g.edges)
        if (e.action == act.sym()) r.succ[e.from].insert(e.to);
      r.escapes = g.frontier;
      return r;
    }
    case CompoundAction::Kind::Test: {
      for (int i = 0; i < n; ++i)
        if (env.satisfies(g.nodes[i].state, act.formula())) r.succ[i].insert(i);
      return r;
    }
    case CompoundAction::Kind::Choice: {
      ActionRelation a = compound_relation_impl(g, env, act.lhs());
      ActionRelation b = compound_relation_impl(g, env, act.rhs());
      for (int i = 0; i < n; ++i) {
        a.succ[i].insert(b.succ[i].begin(), b.succ[i].end());
      }
      a.escapes.insert(b.escapes.begin(), b.escapes.end());
      return a;
    }
    case CompoundAction::Kind::Seq: {
      ActionRelation a = compound_relation_impl(g, env, act.lhs());
      ActionRelation b = compound_relation_impl(g, env, act.rhs());
      r.escapes = a.escapes;
      for (int i = 0; i < n; ++i)
        for (int j : a.succ[i]) {
          r.succ[i].insert(b.succ[j].begin(), b.succ[j].end());
          if (b.escapes.count(j)) r.escapes.insert(i);
        }
      return r;
    }
    case CompoundAction::Kind::Star: {
      ActionRelation a = compound_relation_impl(g, env, act.lhs());
      // Least fixpoint of reflexive-transitive closure.
      for (int i = 0; i < n; ++i) r.succ[i].insert(i);
      bool changed = true;
      while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
          std::set<int> grow;
          for (int j : r.succ[i])
            grow.insert(a.succ[j].begin(), a.succ[j].end());
          for (int j : grow)
            if (r.succ[i].insert(j).second) changed = true;
        }
      }
      for (int i = 0; i < n; ++i)
        for (int j : r.succ[i])
          if (a.escapes.count(j)) {
            r.escapes.insert(i);
            break;
          }
      return r;
    }
  }
  return r;
}

// Public form of the relation; demands a closed graph so the relation is
// exact.
template <class Env>
std::set<std::pair<int, int>> compound_relation(const ConfigGraph<Env>& g,
                                                const Env& env,
                                                const CompoundAction& act) {
  if (!g.closed())
    throw UnknownVerdictError(
        "compound action relation over a graph with an unexplored frontier");
  ActionRelation r = compound_relation_impl(g, env, act);
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(r.succ.size()); ++i)
    for (int j : r.succ[i]) out.insert({i, j});
  return out;
}

// Three-valued truth of a normalized ensemble formula at every node. On a
// closed graph the result is exact; otherwise Unknown marks verdicts that
// depend on the frontier.
template <class Env>
std::vector<TriBool> evaluate(const ConfigGraph<Env>& g, const Env& env,
                              const EnsembleFormula& f) {
  int n = static_cast<int>(g.nodes.size());
  std::vector<TriBool> out(n);
  switch (f.kind()) {
    case EnsembleFormula::Kind::Top:
      std::fill(out.begin(), out.end(), TriBool::True);
      return out;
    case EnsembleFormula::Kind::Epi: {
      for (int i = 0; i < n; ++i)
        out[i] = env.satisfies(g.nodes[i].state, f.formula())
                     ? TriBool::True
                     : TriBool::False;
      return out;
    }
    case EnsembleFormula::Kind::Not: {
      auto sub = evaluate(g, env, f.lhs());
      for (int i = 0; i < n; ++i) out[i] = tri_not(sub[i]);
      return out;
    }
    case EnsembleFormula::Kind::And: {
      auto a = evaluate(g, env, f.lhs());
      auto b = evaluate(g, env, f.rhs());
      for (int i = 0; i < n; ++i) out[i] = tri_and(a[i], b[i]);
      return out;
    }
    case EnsembleFormula::Kind::Box: {
      ActionRelation r = compound_relation_impl(g, env, f.action());
      auto sub = evaluate(g, env, f.lhs());
      for (int i = 0; i < n; ++i) {
        TriBool v = TriBool::True;
        for (int j : r.succ[i]) v = tri_and(v, sub[j]);
        if (v != TriBool::False && r.escapes.count(i)) v = TriBool::Unknown;
        out[i] = v;
      }
      return out;
    }
    default:
      return evaluate(g, env, normalize(f));
  }
}

// Truth at the root configuration.
template <class Env>
TriBool check_formula(const ConfigGraph<Env>& g, const Env& env,
                      const EnsembleFormula& f) {
  return evaluate(g, env, normalize(f))[0];
}

}  // namespace eens
