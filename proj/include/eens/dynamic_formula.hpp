#pragma once

#include <memory>
#include <string>

#include "eens/formula.hpp"

namespace eens {

// Regular-expression style combination of agent actions: an action symbol,
// a test on an epistemic formula, choice, sequence, or iteration.
class CompoundAction {
 public:
  enum class Kind { Atom, Test, Choice, Seq, Star };

  CompoundAction() = default;

  static CompoundAction atom(ActionSym n);
  static CompoundAction test(Formula f);
  static CompoundAction choice(CompoundAction a, CompoundAction b);
  static CompoundAction seq(CompoundAction a, CompoundAction b);
  static CompoundAction star(CompoundAction a);

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const;
  const ActionSym& sym() const;
  const Formula& formula() const;
  const CompoundAction& lhs() const;
  const CompoundAction& rhs() const;
  std::size_t hash() const;

  friend bool operator==(const CompoundAction&, const CompoundAction&);
  friend bool operator!=(const CompoundAction& a, const CompoundAction& b) {
    return !(a == b);
  }
  friend bool operator<(const CompoundAction&, const CompoundAction&);

 private:
  struct Node;

  static CompoundAction make(Node n);

  std::shared_ptr<const Node> node_;
};

struct CompoundAction::Node {
  Kind kind;
  ActionSym sym;
  Formula formula;
  CompoundAction lhs;
  CompoundAction rhs;
  std::size_t hash = 0;
};

inline CompoundAction::Kind CompoundAction::kind() const {
  return node_->kind;
}
inline const ActionSym& CompoundAction::sym() const { return node_->sym; }
inline const Formula& CompoundAction::formula() const {
  return node_->formula;
}
inline const CompoundAction& CompoundAction::lhs() const { return node_->lhs; }
inline const CompoundAction& CompoundAction::rhs() const { return node_->rhs; }
inline std::size_t CompoundAction::hash() const {
  return node_ ? node_->hash : 0;
}

std::string to_string(const CompoundAction& a);

// Checks action symbols against the signature and desugars test formulas.
CompoundAction desugar(const CompoundAction& a, const EnsembleSignature& sig);

// Dynamic formula over ensembles: epistemic atoms plus box modalities over
// compound actions. Diamond, or, implication and false are sugar.
class EnsembleFormula {
 public:
  enum class Kind {
    Top,
    Epi,
    Not,
    And,
    Box,
    // surface sugar
    Bottom,
    Or,
    Imp,
    Diamond,
  };

  EnsembleFormula() = default;

  static EnsembleFormula top();
  static EnsembleFormula bottom();
  static EnsembleFormula epi(Formula f);
  static EnsembleFormula lnot(EnsembleFormula f);
  static EnsembleFormula land(EnsembleFormula a, EnsembleFormula b);
  static EnsembleFormula lor(EnsembleFormula a, EnsembleFormula b);
  static EnsembleFormula imp(EnsembleFormula a, EnsembleFormula b);
  static EnsembleFormula box(CompoundAction act, EnsembleFormula f);
  static EnsembleFormula diamond(CompoundAction act, EnsembleFormula f);

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const;
  const Formula& formula() const;
  const CompoundAction& action() const;
  const EnsembleFormula& lhs() const;
  const EnsembleFormula& rhs() const;
  std::size_t hash() const;

  friend bool operator==(const EnsembleFormula&, const EnsembleFormula&);
  friend bool operator!=(const EnsembleFormula& a, const EnsembleFormula& b) {
    return !(a == b);
  }

 private:
  struct Node;

  static EnsembleFormula make(Node n);

  std::shared_ptr<const Node> node_;
};

struct EnsembleFormula::Node {
  Kind kind;
  Formula formula;
  CompoundAction action;
  EnsembleFormula lhs;
  EnsembleFormula rhs;
  std::size_t hash = 0;
};

inline EnsembleFormula::Kind EnsembleFormula::kind() const {
  return node_->kind;
}
inline const Formula& EnsembleFormula::formula() const {
  return node_->formula;
}
inline const CompoundAction& EnsembleFormula::action() const {
  return node_->action;
}
inline const EnsembleFormula& EnsembleFormula::lhs() const {
  return node_->lhs;
}
inline const EnsembleFormula& EnsembleFormula::rhs() const {
  return node_->rhs;
}
inline std::size_t EnsembleFormula::hash() const {
  return node_ ? node_->hash : 0;
}

std::string to_string(const EnsembleFormula& f);

// Desugars to the core kinds (Top, Epi, Not, And, Box) and collapses every
// box-free subtree into a single epistemic atom. The collapse pins down the
// reading under which satisfaction of a formula that happens to be purely
// epistemic is class satisfaction of that formula, not a Boolean
// combination of class verdicts; the two differ on classes whose members
// disagree.
EnsembleFormula normalize(const EnsembleFormula& f);

// True if every test in the formula's actions and every epistemic atom lies
// in the Boolean closure of F. Expects a normalized formula.
bool within_focus(const EnsembleFormula& f, const FocusSet& F);
bool within_focus(const CompoundAction& a, const FocusSet& F);

}  // namespace eens
