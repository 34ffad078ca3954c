#include "eens/action.hpp"

#include <algorithm>
#include <sstream>

#include "eens/error.hpp"

namespace eens {

int ActionModel::event_index(const std::string& name) const {
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> ActionModel::indistinguishable(const AgentId& a,
                                                int e) const {
  auto it = access.find(a);
  if (it == access.end())
    throw SignatureError("action model lacks relation for agent " + a.name);
  std::vector<int> out;
  for (auto pit = it->second.lower_bound({e, 0});
       pit != it->second.end() && pit->first == e; ++pit)
    out.push_back(pit->second);
  return out;
}

std::string canonical_key(const EpistemicAction& e) {
  const auto& m = *e.model;
  std::ostringstream os;
  os << m.events.size() << "@" << e.point << "|";
  for (std::size_t i = 0; i < m.events.size(); ++i)
    os << m.events[i] << "=" << to_string(desugar(m.pre[i])) << ";";
  for (const auto& [a, rel] : m.access) {
    os << a.name << ":";
    for (const auto& [x, y] : rel) os << x << "-" << y << ",";
    os << ";";
  }
  return os.str();
}

std::shared_ptr<const ActionModel> group_announcement(
    const std::set<AgentId>& group, const Formula& f,
    const EnsembleSignature& sig) {
  for (const auto& a : group)
    if (!sig.agents.count(a))
      throw SignatureError("group member '" + a.name + "' is not an agent");
  check_over_signature(f, sig);
  ActionModel m;
  m.events = {"ek", "en"};
  m.pre = {desugar(f), Formula::top()};
  for (const auto& a : sig.agents) {
    auto& rel = m.access[a];
    rel.insert({0, 0});
    rel.insert({1, 1});
    if (!group.count(a)) {
      rel.insert({0, 1});
      rel.insert({1, 0});
    }
  }
  return std::make_shared<const ActionModel>(std::move(m));
}

ChoiceAction lossy_send(const AgentId& a, const AgentId& b, const Formula& f,
                        const EnsembleSignature& sig) {
  if (!agents_of(f, sig).count(a))
    throw SignatureError("lossy send from '" + a.name +
                         "': formula is not an " + a.name + "-formula: " +
                         to_string(f));
  auto m = group_announcement({b}, f, sig);
  return ChoiceAction{{{m, 0}, {m, 1}}};
}

ChoiceAction reliable_send(const AgentId& a, const AgentId& b,
                           const Formula& f, const EnsembleSignature& sig) {
  if (!agents_of(f, sig).count(a))
    throw SignatureError("reliable send from '" + a.name +
                         "': formula is not an " + a.name + "-formula: " +
                         to_string(f));
  auto m = group_announcement({a, b}, f, sig);
  return ChoiceAction{{{m, 0}}};
}

std::set<AgentId> agents_of_action(const EpistemicAction& e,
                                   const EnsembleSignature& sig) {
  return agents_of(e.pre(), sig);
}

std::set<AgentId> agents_of_choice(const ChoiceAction& c,
                                   const EnsembleSignature& sig) {
  std::set<AgentId> acc = sig.agents;
  for (const auto& e : c.alternatives) {
    auto ags = agents_of_action(e, sig);
    std::set<AgentId> next;
    std::set_intersection(acc.begin(), acc.end(), ags.begin(), ags.end(),
                          std::inserter(next, next.begin()));
    acc = std::move(next);
  }
  return acc;
}

const ChoiceAction& ActionInterpretation::at(const ActionSym& n) const {
  auto it = map.find(n);
  if (it == map.end())
    throw SignatureError("no interpretation for action symbol '" + n.name +
                         "'");
  return it->second;
}

std::vector<EpistemicAction> ActionInterpretation::all_actions() const {
  std::vector<EpistemicAction> out;
  std::set<std::string> seen;
  for (const auto& [n, c] : map)
    for (const auto& e : c.alternatives)
      if (seen.insert(canonical_key(e)).second) out.push_back(e);
  return out;
}

std::vector<InterpretationDiagnostic> validate_interpretation(
    const ActionInterpretation& interp, const EnsembleSignature& sig) {
  std::vector<InterpretationDiagnostic> out;
  for (const auto& [a, syms] : sig.action_syms)
    for (const auto& n : syms) {
      auto it = interp.map.find(n);
      if (it == interp.map.end()) {
        out.push_back({n, "no interpretation given"});
        continue;
      }
      if (it->second.alternatives.empty()) {
        out.push_back({n, "choice action must be non-empty"});
        continue;
      }
      if (!agents_of_choice(it->second, sig).count(a))
        out.push_back(
            {n, "owner '" + a.name +
                    "' is not a possible agent of the interpreting action"});
    }
  for (const auto& [n, c] : interp.map) {
    (void)c;
    if (!sig.has_action(n))
      out.push_back({n, "interpretation for a symbol outside the signature"});
  }
  return out;
}

std::vector<std::string> validate_action_model(const ActionModel& m) {
  std::vector<std::string> out;
  int n = static_cast<int>(m.events.size());
  if (n == 0) out.push_back("action model has no events");
  if (static_cast<int>(m.pre.size()) != n)
    out.push_back("precondition function is not total on events");
  for (const auto& [a, rel] : m.access) {
    for (int e = 0; e < n; ++e)
      if (!rel.count({e, e}))
        out.push_back("agent " + a.name + ": missing self-loop at " +
                      m.events[e]);
    for (const auto& [e, f] : rel) {
      if (!rel.count({f, e}))
        out.push_back("agent " + a.name + ": (" + m.events[e] + "," +
                      m.events[f] + ") present without its converse");
      for (const auto& [f2, g] : rel)
        if (f2 == f && !rel.count({e, g}))
          out.push_back("agent " + a.name + ": missing (" + m.events[e] + "," +
                        m.events[g] + ") required by transitivity");
    }
  }
  return out;
}

}  // namespace eens
