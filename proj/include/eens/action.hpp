#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "eens/formula.hpp"

namespace eens {

// Action model: events with per-agent accessibility (equivalences) and a
// precondition formula per event.
struct ActionModel {
  std::vector<std::string> events;  // names; indices are event ids
  std::map<AgentId, std::set<std::pair<int, int>>> access;
  std::vector<Formula> pre;

  int event_index(const std::string& name) const;  // -1 if absent
  // Events an agent cannot distinguish from e (e itself included).
  std::vector<int> indistinguishable(const AgentId& a, int e) const;
};

// Pointed action model.
struct EpistemicAction {
  std::shared_ptr<const ActionModel> model;
  int point = 0;

  const Formula& pre() const { return model->pre[point]; }
  EpistemicAction at(int event) const { return {model, event}; }
};

// Structural identity of a pointed action model; used to key representative
// tables and to deduplicate the actions of an interpretation.
std::string canonical_key(const EpistemicAction& e);

// Finite, non-empty set of epistemic actions; the environment picks the
// alternative.
struct ChoiceAction {
  std::vector<EpistemicAction> alternatives;
};

// Two-event model announcing f to the agents in group: the announcing event
// carries precondition f, the null event carries true, and only agents
// outside the group confuse the two.
std::shared_ptr<const ActionModel> group_announcement(
    const std::set<AgentId>& group, const Formula& f,
    const EnsembleSignature& sig);

// Unreliable transfer of an a-formula f from a to b: the recipient may or
// may not witness the announcement, the sender cannot tell.
ChoiceAction lossy_send(const AgentId& a, const AgentId& b, const Formula& f,
                        const EnsembleSignature& sig);

// Reliable transfer: a single announcement of f witnessed by both.
ChoiceAction reliable_send(const AgentId& a, const AgentId& b,
                           const Formula& f, const EnsembleSignature& sig);

std::set<AgentId> agents_of_action(const EpistemicAction& e,
                                   const EnsembleSignature& sig);
std::set<AgentId> agents_of_choice(const ChoiceAction& c,
                                   const EnsembleSignature& sig);

struct ActionInterpretation {
  std::map<ActionSym, ChoiceAction> map;

  const ChoiceAction& at(const ActionSym& n) const;
  // All distinct pointed actions across all alternatives, keyed canonically.
  std::vector<EpistemicAction> all_actions() const;
};

struct InterpretationDiagnostic {
  ActionSym symbol;
  std::string message;
};

// Empty result iff the interpretation is total on the signature's action
// symbols and every symbol's owner is a possible agent of its action.
std::vector<InterpretationDiagnostic> validate_interpretation(
    const ActionInterpretation& interp, const EnsembleSignature& sig);

// Event relations must be equivalences, like world relations.
std::vector<std::string> validate_action_model(const ActionModel& m);

}  // namespace eens
