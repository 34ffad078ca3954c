#pragma once

#include <functional>
#include <optional>

#include "eens/formula.hpp"
#include "eens/kripke.hpp"

namespace eens::testing {

// Visits every pointed S5 structure with up to max_worlds worlds over the
// signature (labels, per-agent partitions, point all enumerated). Stops
// early when the visitor returns false.
void for_each_s5_state(const EnsembleSignature& sig, int max_worlds,
                       const std::function<bool(const PointedKripke&)>& visit);

// Exhaustive-search satisfiability: the first model found, if any.
std::optional<PointedKripke> oracle_satisfiable(const Formula& f,
                                                const EnsembleSignature& sig,
                                                int max_worlds);

// Greatest-fixpoint bisimulation between two pointed structures, computed
// naively on the pair graph.
bool naive_bisimilar(const PointedKripke& a, const PointedKripke& b);

}  // namespace eens::testing
