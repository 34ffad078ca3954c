#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eens/dynamic_formula.hpp"
#include "eens/process.hpp"

namespace eens {

// Total family of agent processes; each agent must be allowed to run its
// own process.
struct Ensemble {
  std::map<AgentId, Process> family;

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
  friend bool operator<(const Ensemble& a, const Ensemble& b) {
    return a.family < b.family;
  }
};

// Throws unless the family is total on sig's agents and every agent may run
// its process.
void check_ensemble(const Ensemble& e, const EnsembleSignature& sig);

std::string to_string(const Ensemble& e);

struct EnsembleTransition {
  Formula guard;
  ActionSym action;
  Ensemble target;

  friend bool operator==(const EnsembleTransition&,
                         const EnsembleTransition&) = default;
};

// One agent's process steps, the rest stay put.
std::vector<EnsembleTransition> ensemble_derivatives(const Ensemble& e);

// One step of a witness sequence; the empty marker stands for the artificial
// action of tests and of the base case of iteration.
struct GuardedStep {
  Formula guard;
  std::optional<ActionSym> action;  // nullopt = empty step

  friend bool operator==(const GuardedStep&, const GuardedStep&) = default;
  friend auto operator<=>(const GuardedStep&, const GuardedStep&) = default;
};

struct Witness {
  std::vector<GuardedStep> steps;
  Ensemble target;

  friend bool operator==(const Witness&, const Witness&) = default;
};

// Inspection facility: the guard/action sequences certifying that a
// compound action relates e to some successor ensemble, with at most
// `depth` proper (non-empty) steps. Empty steps never count against the
// depth, so iteration over tests could witness forever; sequences are
// additionally capped at depth + 2 * (nodes of act) + 2 total steps to keep
// the result finite.
std::vector<Witness> witnesses(const Ensemble& e, const CompoundAction& act,
                               int depth);

// Conditional transition system generated by the derivative rule alone,
// guards left uninterpreted.
struct SyntacticGraph {
  struct Edge {
    int from;
    Formula guard;
    ActionSym action;
    int to;
  };

  std::vector<Ensemble> nodes;  // node 0 is the root
  std::vector<Edge> edges;
  bool closed = true;  // false when max_nodes stopped the search
};

SyntacticGraph explore_syntactic(const Ensemble& root, int max_nodes = 10000);

// DOT rendering with `guard : action` edge labels; name_hints maps process
// terms to their declared names for compact node labels.
std::string to_dot(const SyntacticGraph& g,
                   const std::map<Process, std::string>& name_hints = {});
std::string to_json(const SyntacticGraph& g,
                    const std::map<Process, std::string>& name_hints = {});

// Pretty form of an ensemble using declared process names where possible.
std::string describe(const Ensemble& e,
                     const std::map<Process, std::string>& name_hints);

}  // namespace eens
