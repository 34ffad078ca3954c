#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eens/action.hpp"
#include "eens/explorer.hpp"
#include "eens/prover.hpp"

namespace eens {

// Knowledge base: the subset of the focus set currently known to hold.
// Top-closed: when `true` is a focus formula it is always a member.
class SymbolicState {
 public:
  SymbolicState() = default;
  // Desugars, checks membership in the focus set and enforces top-closure.
  SymbolicState(std::vector<Formula> members, const FocusSet& focus);

  const std::set<Formula>& members() const { return members_; }
  bool contains(const Formula& f) const { return members_.count(desugar(f)); }
  std::string key() const;

  friend bool operator==(const SymbolicState& a, const SymbolicState& b) {
    return a.members_ == b.members_;
  }
  friend bool operator<(const SymbolicState& a, const SymbolicState& b) {
    return a.members_ < b.members_;
  }

 private:
  std::set<Formula> members_;
};

// Satisfaction of a Boolean-closure formula by membership and decomposition.
// Focus membership takes priority: a negation or conjunction that is itself
// a focus formula is decided by membership, not by its parts. Throws
// FocusError outside bcl(F).
bool sym_satisfies(const SymbolicState& s, const Formula& f,
                   const FocusSet& F);

// Weakest liberal precondition of a pointed action for f, computed by the
// reduction rules (propositions and negations guard with the precondition,
// knowledge recurses through the agent's indistinguishable events) and then
// lightly simplified.
Formula wlp(const EpistemicAction& e, const Formula& f);

// Verified map from actions and focus formulas to Boolean-closure
// representatives of preconditions and wlps.
struct RepresentativeTable {
  struct Entry {
    EpistemicAction action;
    std::string display;  // e.g. "tell12_x1[ek]"
  };

  std::map<std::string, Entry> actions;           // canonical key -> action
  std::map<std::string, Formula> pre_repr;        // canonical key -> rho
  std::map<std::pair<std::string, Formula>, Formula> wlp_repr;
  bool verified = false;

  void set_pre(const EpistemicAction& e, const std::string& display,
               const Formula& rho);
  void set_wlp(const EpistemicAction& e, const std::string& display,
               const Formula& focus_formula, const Formula& rho);

  const Formula& pre_of(const EpistemicAction& e) const;     // CoverageError
  const Formula& wlp_of(const EpistemicAction& e,
                        const Formula& focus_formula) const;  // CoverageError
};

struct TableDiagnostic {
  enum class Kind { MissingPre, MissingWlp, NotInClosure, NotEquivalent };
  Kind kind;
  std::string action;        // display name
  std::optional<Formula> focus_formula;  // absent for precondition entries
  std::string detail;

  std::string describe() const;
};

// Checks, for every alternative of every interpreted action and every focus
// formula, that the stored representative lies in bcl(F) and is logically
// equivalent to the computed precondition / wlp. Marks the table verified
// when clean. Prover faults propagate.
std::vector<TableDiagnostic> verify_table(RepresentativeTable& t,
                                          const ActionInterpretation& interp,
                                          const FocusSet& F,
                                          const Prover& prover);

// Enumerates candidates in disjunctive normal form over focus literals
// (false and true first, then by disjunct count up to size_bound) and
// returns the first candidate the prover confirms equivalent to wlp(e, f).
// A sample pool of small structures prunes candidates before the prover is
// consulted.
std::optional<Formula> search_representative(const EpistemicAction& e,
                                             const Formula& f,
                                             const FocusSet& F,
                                             int size_bound,
                                             const Prover& prover);

// Focus formulas whose stored wlp representative holds in s.
SymbolicState sym_update(const SymbolicState& s, const EpistemicAction& e,
                         const RepresentativeTable& t, const FocusSet& F);

std::vector<SymbolicState> sym_choice_step(const SymbolicState& s,
                                           const ChoiceAction& c,
                                           const RepresentativeTable& t,
                                           const FocusSet& F);

struct SymbolicEnv {
  using State = SymbolicState;

  const ActionInterpretation* interp;
  const RepresentativeTable* table;
  const FocusSet* focus;

  std::string key(const State& s) const { return s.key(); }
  bool satisfies(const State& s, const Formula& f) const {
    return sym_satisfies(s, f, *focus);
  }
  std::vector<State> step(const State& s, const ActionSym& n) const {
    return sym_choice_step(s, interp->at(n), *table, *focus);
  }
};

using SymbolicGraph = ConfigGraph<SymbolicEnv>;

struct SymbolicConfiguration {
  Ensemble ensemble;
  SymbolicState state;
};

// Throws FocusError if a guard of the ensemble leaves bcl(F), listing the
// offending formulas.
void check_guards_in_focus(const Ensemble& e, const FocusSet& F);

std::vector<std::pair<ActionSym, SymbolicConfiguration>> sym_config_step(
    const SymbolicConfiguration& c, const ActionInterpretation& interp,
    const RepresentativeTable& t, const FocusSet& F);

SymbolicGraph explore_symbolic(const SymbolicConfiguration& c,
                               const ActionInterpretation& interp,
                               const RepresentativeTable& t, const FocusSet& F,
                               int max_nodes = 10000);

// Exact: the symbolic state space is finite, so exploration always closes
// within the bound or faults.
bool sym_model_check(const SymbolicConfiguration& c, const EnsembleFormula& f,
                     const ActionInterpretation& interp,
                     const RepresentativeTable& t, const FocusSet& F,
                     int max_nodes = 10000);

std::string to_dot(const SymbolicGraph& g,
                   const std::map<Process, std::string>& name_hints = {});
std::string to_json(const SymbolicGraph& g,
                    const std::map<Process, std::string>& name_hints = {});

}  // namespace eens
