#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eens/action.hpp"
#include "eens/dynamic_formula.hpp"
#include "eens/ensemble.hpp"
#include "eens/semantic_engine.hpp"
#include "eens/symbolic_engine.hpp"

namespace eens {

// A complete problem description: signature, action interpretation,
// ensemble, optional focus/representative data, initial environments and
// named formulas.
struct ProblemSpec {
  EnsembleSignature sig;
  ActionInterpretation interp;

  std::map<std::string, Process> procs;
  std::map<Process, std::string> proc_names;  // reverse map for display

  std::string ensemble_name;
  Ensemble ensemble;

  bool has_focus = false;
  FocusSet focus;

  bool has_table = false;
  RepresentativeTable table;

  std::vector<PointedKripke> init_semantic;  // empty = absent
  std::optional<SymbolicState> init_symbolic;

  std::map<std::string, CompoundAction> cactions;
  std::vector<std::pair<std::string, EnsembleFormula>> formulas;

  const EnsembleFormula& formula_by_name(const std::string& name) const;

  // Resolve "action[event]" to the pointed action it denotes.
  EpistemicAction action_ref(const std::string& symbol,
                             const std::string& event) const;

  Configuration semantic_root() const;           // throws if absent
  SymbolicConfiguration symbolic_root() const;   // throws if absent
};

// Parses a problem description. Errors carry line and column.
ProblemSpec parse_problem(const std::string& text,
                          const std::string& filename = "<input>");

// Standalone parsers for command-line formula arguments.
Formula parse_formula(const std::string& text, const EnsembleSignature& sig);
EnsembleFormula parse_ensemble_formula(const std::string& text,
                                       const ProblemSpec& spec);
CompoundAction parse_compound_action(const std::string& text,
                                     const ProblemSpec& spec);

}  // namespace eens
