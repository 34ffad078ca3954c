#pragma once

#include <map>
#include <mutex>
#include <optional>

#include "eens/formula.hpp"
#include "eens/kripke.hpp"

namespace eens {

struct ProverOptions {
  int initial_depth = 6;    // first witness-chain ceiling
  int max_depth = 48;       // deepest ceiling before giving up
  int max_worlds = 4096;    // per-branch world cap
  long max_steps = 4000000; // per-query rule applications
};

enum class Verdict { Sat, Unsat };

struct ProofResult {
  Verdict verdict;
  std::optional<PointedKripke> witness;  // present iff Sat, self-checked
};

// Decision procedure for multi-agent S5 over a finite signature.
//
// Satisfiability is decided by a labelled tableau whose worlds are grouped
// into per-agent equivalence classes: K[a]f is recorded as a constraint on
// the whole a-class of the current world (which yields T, 4 and 5 at once),
// and ~K[a]f adds a fresh class member carrying ~f unless an existing
// member already does. Disjunctions branch with backtracking. Witness
// creation depth is bounded and iteratively deepened; a branch cut off by
// the bound can never produce an Unsat verdict, so at the final ceiling the
// query faults as inconclusive instead of guessing.
class Prover {
 public:
  explicit Prover(EnsembleSignature sig, ProverOptions opt = {})
      : sig_(std::move(sig)), opt_(opt) {}

  // Throws InconclusiveError at the resource ceiling. Sat results carry a
  // finite model that has been re-checked with satisfies().
  ProofResult is_satisfiable(const Formula& f) const;

  bool is_valid(const Formula& f) const;
  bool equivalent(const Formula& f, const Formula& g) const;

  const EnsembleSignature& signature() const { return sig_; }

 private:
  EnsembleSignature sig_;
  ProverOptions opt_;

  mutable std::mutex cache_mutex_;
  mutable std::map<Formula, ProofResult> cache_;
};

}  // namespace eens
