#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eens/formula.hpp"

namespace eens {

struct EpistemicAction;

// Finite Kripke structure with per-agent accessibility relations, expected
// to be equivalences (validate_s5 checks, close_s5 repairs).
struct KripkeStructure {
  std::vector<std::string> worlds;  // names; indices are world ids
  std::map<AgentId, std::set<std::pair<int, int>>> access;
  std::vector<std::set<Prop>> label;

  int world_index(const std::string& name) const;  // -1 if absent
  bool related(const AgentId& a, int w, int v) const;
  std::vector<int> successors(const AgentId& a, int w) const;

  friend bool operator==(const KripkeStructure&,
                         const KripkeStructure&) = default;
};

struct PointedKripke {
  KripkeStructure structure;
  int point = 0;

  friend bool operator==(const PointedKripke&, const PointedKripke&) = default;
};

// Truth of a core or surface formula at a world; K[a] quantifies over the
// a-successors of w. Agents missing from the access map are faulted.
bool satisfies(const KripkeStructure& k, int w, const Formula& f);
bool satisfies(const PointedKripke& s, const Formula& f);

struct S5Violation {
  enum class Kind { Reflexivity, Symmetry, Transitivity };
  Kind kind;
  AgentId agent;
  int w1;
  int w2;

  std::string describe(const KripkeStructure& k) const;
};

std::vector<S5Violation> validate_s5(const KripkeStructure& k);

// Reflexive-symmetric-transitive closure of every access relation.
KripkeStructure close_s5(KripkeStructure k);

// Quotient by the coarsest bisimulation that respects labels and all
// agents' relations, restricted to the part reachable from the point, with
// worlds renamed canonically. Two inputs have equal minimize() images
// exactly when they are bisimilar, so the result doubles as a revisit key.
PointedKripke minimize(const PointedKripke& s);

// Deterministic serialisation of a structure (used for canonical state
// identity after minimize).
std::string canonical_key(const PointedKripke& s);

// Synchronised product with an action model, restricted to the pairs whose
// world satisfies the event's precondition. Empty result if the point's
// precondition fails.
std::optional<PointedKripke> product_update(const PointedKripke& s,
                                            const EpistemicAction& e);

std::string to_json(const PointedKripke& s);
PointedKripke pointed_kripke_from_json(const std::string& text,
                                       bool auto_close = false);

// The actual world is drawn doubly circled.
std::string to_dot(const PointedKripke& s);

}  // namespace eens
