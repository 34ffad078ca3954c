#pragma once

#include <random>

#include "eens/action.hpp"
#include "eens/dynamic_formula.hpp"
#include "eens/ensemble.hpp"
#include "eens/formula.hpp"
#include "eens/kripke.hpp"
#include "eens/process.hpp"

namespace eens::testing {

using Rng = std::mt19937;

// Two agents, two propositions, the usual action symbol split.
EnsembleSignature small_signature();

Formula random_formula(Rng& rng, const EnsembleSignature& sig, int depth);

// Boolean combination over the focus members.
Formula random_bcl_formula(Rng& rng, const FocusSet& F, int depth);

PointedKripke random_s5_state(Rng& rng, const EnsembleSignature& sig,
                              int max_worlds);

EpistemicAction random_action(Rng& rng, const EnsembleSignature& sig,
                              int max_events, int pre_depth);

ChoiceAction random_choice_action(Rng& rng, const EnsembleSignature& sig,
                                  int max_alternatives, int max_events,
                                  int pre_depth);

// Closed, guarded process an agent is allowed to run.
Process random_process(Rng& rng, const EnsembleSignature& sig,
                       const AgentId& owner, int depth);

Ensemble random_ensemble(Rng& rng, const EnsembleSignature& sig, int depth);

CompoundAction random_compound_action(Rng& rng, const EnsembleSignature& sig,
                                      const FocusSet& F, int depth);

EnsembleFormula random_ensemble_formula(Rng& rng, const EnsembleSignature& sig,
                                        const FocusSet& F, int box_depth);

}  // namespace eens::testing
