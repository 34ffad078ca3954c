#pragma once

#include <string>
#include <vector>

#include "eens/action.hpp"
#include "eens/explorer.hpp"
#include "eens/kripke.hpp"

namespace eens {

// Non-empty class of epistemic states. Members are kept minimized, renamed
// canonically and deduplicated, so structural equality of classes is
// equality up to bisimulation of members.
class StateClass {
 public:
  // Minimizes, sorts and deduplicates; throws on an empty class.
  static StateClass canonical(std::vector<PointedKripke> members);

  const std::vector<PointedKripke>& members() const { return members_; }
  const std::string& key() const { return key_; }

  friend bool operator==(const StateClass& a, const StateClass& b) {
    return a.key_ == b.key_;
  }

 private:
  StateClass() = default;

  std::vector<PointedKripke> members_;
  std::string key_;
};

// Universal satisfaction over the members.
bool class_satisfies(const StateClass& s, const Formula& f);

// Successor classes under a choice action: one per alternative whose
// precondition holds class-wide. May be empty when nothing is enabled.
std::vector<StateClass> choice_step(const StateClass& s,
                                    const ChoiceAction& c);

struct SemanticEnv {
  using State = StateClass;

  const ActionInterpretation* interp;

  std::string key(const State& s) const { return s.key(); }
  bool satisfies(const State& s, const Formula& f) const {
    return class_satisfies(s, f);
  }
  std::vector<State> step(const State& s, const ActionSym& n) const {
    return choice_step(s, interp->at(n));
  }
};

using SemanticGraph = ConfigGraph<SemanticEnv>;

struct Configuration {
  Ensemble ensemble;
  StateClass cls;
};

// Single transition step of a configuration under an interpretation.
std::vector<std::pair<ActionSym, Configuration>> config_step(
    const Configuration& c, const ActionInterpretation& interp);

SemanticGraph explore_semantic(const Configuration& c,
                               const ActionInterpretation& interp,
                               int max_nodes = 10000);

// Truth of a dynamic formula at the root configuration; Unknown when the
// verdict depends on the unexplored frontier.
TriBool model_check(const Configuration& c, const EnsembleFormula& f,
                    const ActionInterpretation& interp, int max_nodes = 10000);

std::string to_dot(const SemanticGraph& g,
                   const std::map<Process, std::string>& name_hints = {});
std::string to_json(const SemanticGraph& g,
                    const std::map<Process, std::string>& name_hints = {});

}  // namespace eens
