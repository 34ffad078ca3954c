#include "eens/ensemble.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eens/error.hpp"

namespace eens {

void check_ensemble(const Ensemble& e, const EnsembleSignature& sig) {
  for (const auto& a : sig.agents)
    if (!e.family.count(a))
      throw Error("ensemble lacks a process for agent " + a.name);
  for (const auto& [a, p] : e.family) {
    if (!sig.agents.count(a))
      throw SignatureError("ensemble names unknown agent " + a.name);
    check_process(p, sig);
    if (!agents_of_process(p, sig).count(a))
      throw Error("agent " + a.name +
                  " is not allowed to run its process " + to_string(p));
  }
}

std::string to_string(const Ensemble& e) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, p] : e.family) {
    if (!first) os << " || ";
    first = false;
    os << a.name << " : " << to_string(p);
  }
  return os.str();
}

std::string describe(const Ensemble& e,
                     const std::map<Process, std::string>& name_hints) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, p] : e.family) {
    if (!first) os << " || ";
    first = false;
    auto it = name_hints.find(p);
    os << a.name << " : "
       << (it != name_hints.end() ? it->second : to_string(p));
  }
  return os.str();
}

std::vector<EnsembleTransition> ensemble_derivatives(const Ensemble& e) {
  std::vector<EnsembleTransition> out;
  for (const auto& [a, p] : e.family) {
    for (auto& t : derivatives(p)) {
      Ensemble succ = e;
      succ.family[a] = t.target;
      EnsembleTransition et{std::move(t.guard), t.action, std::move(succ)};
      if (std::find(out.begin(), out.end(), et) == out.end())
        out.push_back(std::move(et));
    }
  }
  return out;
}

namespace {

int proper_steps(const std::vector<GuardedStep>& steps) {
  int n = 0;
  for (const auto& s : steps)
    if (s.action) ++n;
  return n;
}

int action_nodes(const CompoundAction& a) {
  switch (a.kind()) {
    case CompoundAction::Kind::Atom:
    case CompoundAction::Kind::Test:
      return 1;
    case CompoundAction::Kind::Star:
      return 1 + action_nodes(a.lhs());
    case CompoundAction::Kind::Choice:
    case CompoundAction::Kind::Seq:
      return 1 + action_nodes(a.lhs()) + action_nodes(a.rhs());
  }
  return 1;
}

void collect_witnesses(const Ensemble& e, const CompoundAction& act,
                       int depth, int max_len, std::vector<Witness>& out) {
  switch (act.kind()) {
    case CompoundAction::Kind::Atom: {
      if (depth < 1 || max_len < 1) return;
      for (auto& t : ensemble_derivatives(e))
        if (t.action == act.sym())
          out.push_back({{{t.guard, t.action}}, t.target});
      return;
    }
    case CompoundAction::Kind::Test:
      if (max_len < 1) return;
      out.push_back({{{desugar(act.formula()), std::nullopt}}, e});
      return;
    case CompoundAction::Kind::Choice: {
      collect_witnesses(e, act.lhs(), depth, max_len, out);
      std::vector<Witness> rhs;
      collect_witnesses(e, act.rhs(), depth, max_len, rhs);
      for (auto& w : rhs)
        if (std::find(out.begin(), out.end(), w) == out.end())
          out.push_back(std::move(w));
      return;
    }
    case CompoundAction::Kind::Seq: {
      std::vector<Witness> firsts;
      collect_witnesses(e, act.lhs(), depth, max_len, firsts);
      for (const auto& w1 : firsts) {
        int used = proper_steps(w1.steps);
        std::vector<Witness> seconds;
        collect_witnesses(w1.target, act.rhs(), depth - used,
                          max_len - static_cast<int>(w1.steps.size()),
                          seconds);
        for (auto& w2 : seconds) {
          Witness w{w1.steps, std::move(w2.target)};
          w.steps.insert(w.steps.end(), w2.steps.begin(), w2.steps.end());
          if (std::find(out.begin(), out.end(), w) == out.end())
            out.push_back(std::move(w));
        }
      }
      return;
    }
    case CompoundAction::Kind::Star: {
      if (max_len >= 1)
        out.push_back({{{Formula::top(), std::nullopt}}, e});
      std::vector<Witness> heads;
      collect_witnesses(e, act.lhs(), depth, max_len, heads);
      for (const auto& w1 : heads) {
        int used = proper_steps(w1.steps);
        int len1 = static_cast<int>(w1.steps.size());
        if (len1 >= max_len) continue;
        std::vector<Witness> tails;
        collect_witnesses(w1.target, act, depth - used, max_len - len1, tails);
        for (auto& w2 : tails) {
          Witness w{w1.steps, std::move(w2.target)};
          w.steps.insert(w.steps.end(), w2.steps.begin(), w2.steps.end());
          if (std::find(out.begin(), out.end(), w) == out.end())
            out.push_back(std::move(w));
        }
      }
      return;
    }
  }
}

}  // namespace

std::vector<Witness> witnesses(const Ensemble& e, const CompoundAction& act,
                               int depth) {
  if (depth < 0) throw Error("witnesses: depth must be non-negative");
  std::vector<Witness> out;
  collect_witnesses(e, act, depth, depth + 2 * action_nodes(act) + 2, out);
  return out;
}

SyntacticGraph explore_syntactic(const Ensemble& root, int max_nodes) {
  if (max_nodes < 1) throw Error("explore: max_nodes must be at least 1");
  SyntacticGraph g;
  std::map<Ensemble, int> index;
  std::deque<int> frontier;
  g.nodes.push_back(root);
  index.emplace(root, 0);
  frontier.push_back(0);
  while (!frontier.empty()) {
    int n = frontier.front();
    frontier.pop_front();
    Ensemble e = g.nodes[n];
    for (auto& t : ensemble_derivatives(e)) {
      auto it = index.find(t.target);
      int to;
      if (it != index.end()) {
        to = it->second;
      } else if (static_cast<int>(g.nodes.size()) < max_nodes) {
        to = static_cast<int>(g.nodes.size());
        g.nodes.push_back(t.target);
        index.emplace(t.target, to);
        frontier.push_back(to);
      } else {
        g.closed = false;
        continue;
      }
      g.edges.push_back({n, std::move(t.guard), t.action, to});
    }
  }
  return g;
}

std::string to_dot(const SyntacticGraph& g,
                   const std::map<Process, std::string>& name_hints) {
  std::ostringstream os;
  os << "digraph ensemble {\n  rankdir=TB;\n  node [shape=box, style=rounded];\n";
  for (std::size_t n = 0; n < g.nodes.size(); ++n)
    os << "  n" << n << " [label=\"" << describe(g.nodes[n], name_hints)
       << "\"];\n";
  for (const auto& e : g.edges)
    os << "  n" << e.from << " -> n" << e.to << " [label=\""
       << to_string(e.guard) << " : " << e.action.name << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const SyntacticGraph& g,
                    const std::map<Process, std::string>& name_hints) {
  nlohmann::json j;
  j["schema"] = "eens-graph-1";
  j["mode"] = "syntactic";
  j["closed"] = g.closed;
  auto nodes = nlohmann::json::array();
  for (std::size_t n = 0; n < g.nodes.size(); ++n)
    nodes.push_back({{"id", n}, {"ensemble", describe(g.nodes[n], name_hints)}});
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
