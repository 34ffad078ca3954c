#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace eens {

struct AgentId {
  std::string name;
  auto operator<=>(const AgentId&) const = default;
};

struct Prop {
  std::string name;
  auto operator<=>(const Prop&) const = default;
};

struct ActionSym {
  std::string name;
  auto operator<=>(const ActionSym&) const = default;
};

// Immutable epistemic formula AST. The core connectives are Top, Atom, Not,
// And and Knows; the remaining kinds are surface sugar that desugar()
// eliminates. Values are cheap to copy (shared, refcounted nodes) and safe
// to share across threads.
class Formula {
 public:
  enum class Kind {
    Top,
    Atom,
    Not,
    And,
    Knows,
    // surface sugar
    Bottom,        // ~true
    Or,            // ~(~a & ~b)
    Imp,           // ~(a & ~b)
    Maybe,         // ~K[a]~f   ("deems possible")
    KnowsWhether,  // K[a]f | K[a]~f
  };

  Formula() = default;

  static Formula top();
  static Formula bottom();
  static Formula atom(Prop p);
  static Formula lnot(Formula f);
  static Formula land(Formula lhs, Formula rhs);
  static Formula lor(Formula lhs, Formula rhs);
  static Formula imp(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);  // (a -> b) & (b -> a)
  static Formula knows(AgentId a, Formula f);
  static Formula maybe(AgentId a, Formula f);
  static Formula knows_whether(AgentId a, Formula f);

  // Conjunction of a list; empty list yields top.
  static Formula conj(const std::vector<Formula>& fs);

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const;
  const Prop& prop() const;
  const AgentId& agent() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  std::size_t hash() const;
  bool is_core() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node;

  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  Prop prop;      // Atom
  AgentId agent;  // Knows / Maybe / KnowsWhether
  Formula lhs;    // first child
  Formula rhs;    // second child (And / Or / Imp)
  std::size_t hash = 0;
};

inline Formula::Kind Formula::kind() const { return node_->kind; }
inline const Prop& Formula::prop() const { return node_->prop; }
inline const AgentId& Formula::agent() const { return node_->agent; }
inline const Formula& Formula::lhs() const { return node_->lhs; }
inline const Formula& Formula::rhs() const { return node_->rhs; }
inline std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Rewrites all sugar into the five core connectives. Idempotent.
Formula desugar(const Formula& f);

// Minimal-parenthesis printer; re-introduces sugar (false, |, ->, M, KW)
// so that parse(to_string(f)) desugars back to f.
std::string to_string(const Formula& f);

int modal_depth(const Formula& f);
int formula_size(const Formula& f);

// Validity-preserving cleanup: ~~f => f and true-units of &. Nothing else.
Formula simplify_light(const Formula& f);

struct EnsembleSignature {
  std::set<Prop> props;
  std::set<AgentId> agents;
  std::map<AgentId, std::set<ActionSym>> action_syms;

  bool has_action(const ActionSym& n) const;
  // Owning agent of an action symbol; throws SignatureError if unknown.
  AgentId owner(const ActionSym& n) const;
  std::set<ActionSym> all_action_syms() const;

  // Checks pairwise disjointness of the per-agent action symbol sets and
  // that every listed agent is a signature agent.
  void validate() const;
};

// Throws SignatureError if f mentions an agent or proposition that is not
// part of sig.
void check_over_signature(const Formula& f, const EnsembleSignature& sig);

// The agents a for which f is an a-formula (top operator discipline):
// top belongs to every agent, K[a]f to a alone, ~ and & intersect, and a
// bare proposition to none.
std::set<AgentId> agents_of(const Formula& f, const EnsembleSignature& sig);

// A finite set of epistemic formulas, stored desugared; membership is
// structural equality on the core AST.
class FocusSet {
 public:
  FocusSet() = default;
  explicit FocusSet(const std::vector<Formula>& fs);

  void insert(const Formula& f);
  bool contains(const Formula& f) const;
  bool empty() const { return formulas_.empty(); }
  std::size_t size() const { return formulas_.size(); }
  const std::set<Formula>& formulas() const { return formulas_; }

  auto begin() const { return formulas_.begin(); }
  auto end() const { return formulas_.end(); }

 private:
  std::set<Formula> formulas_;
};

// Membership in the Boolean closure of F: members of F, top, and ~/&
// combinations of members. Monotone in F.
bool in_boolean_closure(const Formula& f, const FocusSet& F);

}  // namespace eens
