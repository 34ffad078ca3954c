#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "eens/formula.hpp"

namespace eens {

// Agent behaviour term: inaction, action prefix, guard, choice, and guarded
// recursion.
class Process {
 public:
  enum class Kind { Nil, Prefix, Guard, Choice, Rec, Var };

  Process() = default;

  static Process nil();
  static Process prefix(ActionSym n, Process p);
  static Process guard(Formula f, Process p);
  static Process choice(Process a, Process b);
  static Process rec(std::string var, Process p);
  static Process var(std::string name);

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const;
  const ActionSym& sym() const;
  const Formula& guard_formula() const;
  const std::string& var_name() const;
  const Process& lhs() const;
  const Process& rhs() const;
  std::size_t hash() const;

  friend bool operator==(const Process&, const Process&);
  friend bool operator!=(const Process& a, const Process& b) {
    return !(a == b);
  }
  friend bool operator<(const Process&, const Process&);

 private:
  struct Node;

  static Process make(Node n);

  std::shared_ptr<const Node> node_;
};

struct Process::Node {
  Kind kind;
  ActionSym sym;      // Prefix
  Formula formula;    // Guard
  std::string var;    // Rec / Var
  Process lhs;
  Process rhs;        // Choice
  std::size_t hash = 0;
};

inline Process::Kind Process::kind() const { return node_->kind; }
inline const ActionSym& Process::sym() const { return node_->sym; }
inline const Formula& Process::guard_formula() const {
  return node_->formula;
}
inline const std::string& Process::var_name() const { return node_->var; }
inline const Process& Process::lhs() const { return node_->lhs; }
inline const Process& Process::rhs() const { return node_->rhs; }
inline std::size_t Process::hash() const { return node_ ? node_->hash : 0; }

std::string to_string(const Process& p);

// Free process variables.
std::set<std::string> free_vars(const Process& p);
bool is_closed(const Process& p);

// Every variable occurrence must sit under at least one action prefix
// inside its binder; otherwise unfolding the recursion rule would diverge.
// Returns the offending variables.
std::vector<std::string> unguarded_vars(const Process& p);

// Throws Error unless p is closed and guarded, with action symbols and
// guard formulas drawn from sig.
void check_process(const Process& p, const EnsembleSignature& sig);

// Capture-avoiding substitution of q for free occurrences of var.
Process substitute(const Process& p, const std::string& var, const Process& q);

struct ProcessTransition {
  Formula guard;     // conjoined along the derivation; top when no guard
  ActionSym action;
  Process target;

  friend bool operator==(const ProcessTransition&,
                         const ProcessTransition&) = default;
};

// All conditional transitions of a closed guarded term. Guards accumulate
// outermost-first: [f]([g] n.P) steps with guard f & g. The lone empty
// guard of a bare prefix stays `true` and disappears once a real guard is
// conjoined.
std::vector<ProcessTransition> derivatives(const Process& p);

// Agents allowed to run p: nil and variables allow everyone, a prefix
// restricts to the symbol's owner, a guard restricts to the guard's agents.
std::set<AgentId> agents_of_process(const Process& p,
                                    const EnsembleSignature& sig);

}  // namespace eens
