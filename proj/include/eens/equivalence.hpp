#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eens/semantic_engine.hpp"
#include "eens/symbolic_engine.hpp"

namespace eens {

struct EquivalenceViolation {
  std::string where;      // configuration pair or state description
  std::string subject;    // formula or action involved
  std::string direction;  // e.g. "semantic->symbolic"
  std::string detail;
};

struct EquivalenceReport {
  long pairs_checked = 0;
  std::vector<EquivalenceViolation> violations;
  std::vector<std::string> skipped;  // e.g. unknown semantic verdicts

  bool ok() const { return violations.empty(); }
};

std::string to_json(const EquivalenceReport& r);

// A class and a knowledge base agree on every focus formula: every member
// satisfies exactly the focus formulas the base contains.
bool f_equivalent(const StateClass& S, const SymbolicState& s,
                  const FocusSet& F);

// Agreement extends from the focus set to its Boolean closure; samples
// random closure formulas and compares member satisfaction with symbolic
// satisfaction.
EquivalenceReport check_bcl_agreement(const StateClass& S,
                                      const SymbolicState& s,
                                      const FocusSet& F, int samples,
                                      unsigned seed = 1);

// Co-explores the two transition systems from F-equivalent roots: every
// semantic step must be matched by a symbolic step with the same action to
// an F-equivalent pair, and conversely. Matching is existential. depth < 0
// runs to closure.
EquivalenceReport check_simulation(const Configuration& sem,
                                   const SymbolicConfiguration& sym,
                                   const ActionInterpretation& interp,
                                   const RepresentativeTable& t,
                                   const FocusSet& F, int depth = -1,
                                   int max_nodes = 10000);

// Model-checks each formula in both engines and records disagreements.
// Unknown semantic verdicts are listed as skipped, never as agreement.
EquivalenceReport differential_check(
    const Configuration& sem, const SymbolicConfiguration& sym,
    const std::vector<std::pair<std::string, EnsembleFormula>>& formulas,
    const ActionInterpretation& interp, const RepresentativeTable& t,
    const FocusSet& F, int max_nodes = 10000);

}  // namespace eens
