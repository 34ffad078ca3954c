#include "eens/semantic_engine.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eens/error.hpp"

namespace eens {

StateClass StateClass::canonical(std::vector<PointedKripke> members) {
  if (members.empty()) throw Error("state class must be non-empty");
  StateClass s;
  std::vector<std::pair<std::string, PointedKripke>> keyed;
  for (auto& m : members) {
    PointedKripke min = minimize(m);
    keyed.emplace_back(canonical_key(min), std::move(min));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream os;
  std::string prev;
  bool first = true;
  for (auto& [k, m] : keyed) {
    if (!first && k == prev) continue;
    first = false;
    prev = k;
    os << k << "#";
    s.members_.push_back(std::move(m));
  }
  s.key_ = os.str();
  return s;
}

bool class_satisfies(const StateClass& s, const Formula& f) {
  for (const auto& m : s.members())
    if (!satisfies(m, f)) return false;
  return true;
}

std::vector<StateClass> choice_step(const StateClass& s,
                                    const ChoiceAction& c) {
  std::vector<StateClass> out;
  for (const auto& alt : c.alternatives) {
    if (!class_satisfies(s, alt.pre())) continue;
    std::vector<PointedKripke> updated;
    for (const auto& m : s.members()) {
      auto u = product_update(m, alt);
      if (!u)
        throw Error("product update undefined despite class precondition");
      updated.push_back(std::move(*u));
    }
    StateClass succ = StateClass::canonical(std::move(updated));
    bool dup = false;
    for (const auto& prev : out)
      if (prev == succ) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(succ));
  }
  return out;
}

std::vector<std::pair<ActionSym, Configuration>> config_step(
    const Configuration& c, const ActionInterpretation& interp) {
  std::vector<std::pair<ActionSym, Configuration>> out;
  for (auto& t : ensemble_derivatives(c.ensemble)) {
    if (!class_satisfies(c.cls, t.guard)) continue;
    for (auto& succ : choice_step(c.cls, interp.at(t.action))) {
      bool dup = false;
      for (const auto& [n, cfg] : out)
        if (n == t.action && cfg.ensemble == t.target && cfg.cls == succ) {
          dup = true;
          break;
        }
      if (!dup) out.push_back({t.action, {t.target, std::move(succ)}});
    }
  }
  return out;
}

SemanticGraph explore_semantic(const Configuration& c,
                               const ActionInterpretation& interp,
                               int max_nodes) {
  SemanticEnv env{&interp};
  return explore(env, c.ensemble, c.cls, max_nodes);
}

TriBool model_check(const Configuration& c, const EnsembleFormula& f,
                    const ActionInterpretation& interp, int max_nodes) {
  SemanticEnv env{&interp};
  SemanticGraph g = explore(env, c.ensemble, c.cls, max_nodes);
  return check_formula(g, env, f);
}

namespace {

std::string class_summary(const StateClass& s) {
  std::ostringstream os;
  os << "{" << s.members().size() << " state"
     << (s.members().size() == 1 ? "" : "s") << "}";
  return os.str();
}

}  // namespace

std::string to_dot(const SemanticGraph& g,
                   const std::map<Process, std::string>& name_hints) {
  std::ostringstream os;
  os << "digraph semantic {\n  rankdir=TB;\n  node [shape=box, style=rounded];\n";
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    os << "  n" << n << " [label=\""
       << describe(g.nodes[n].ensemble, name_hints) << "\\n"
       << class_summary(g.nodes[n].state) << "\"";
    if (g.frontier.count(static_cast<int>(n))) os << ", style=dashed";
    os << "];\n";
  }
  for (const auto& e : g.edges)
    os << "  n" << e.from << " -> n" << e.to << " [label=\""
       << to_string(e.guard) << " : " << e.action.name << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const SemanticGraph& g,
                    const std::map<Process, std::string>& name_hints) {
  nlohmann::json j;
  j["schema"] = "eens-graph-1";
  j["mode"] = "semantic";
  j["closed"] = g.closed();
  auto nodes = nlohmann::json::array();
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    nlohmann::json jn;
    jn["id"] = n;
    jn["ensemble"] = describe(g.nodes[n].ensemble, name_hints);
    auto members = nlohmann::json::array();
    for (const auto& m : g.nodes[n].state.members())
      members.push_back(nlohmann::json::parse(to_json(m)));
    jn["class"] = members;
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
