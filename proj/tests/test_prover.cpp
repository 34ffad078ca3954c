#include <doctest.h>

#include "eens/error.hpp"
#include "eens/prover.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace eens;

namespace {

const AgentId a1{"a1"};
const AgentId a2{"a2"};
const Prop x1{"x1"};

Formula K1(Formula f) { return Formula::knows(a1, std::move(f)); }
Formula K2(Formula f) { return Formula::knows(a2, std::move(f)); }

}  // namespace

TEST_CASE("simple verdicts with self-checked witnesses") {
  Prover prover(testing::small_signature());

  auto r = prover.is_satisfiable(
      Formula::land(Formula::atom(x1), Formula::lnot(K2(Formula::atom(x1)))));
  CHECK(r.verdict == Verdict::Sat);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->structure.worlds.size() >= 2);

  // knowledge is factive
  CHECK(prover
            .is_satisfiable(Formula::land(K1(Formula::atom(x1)),
                                          Formula::lnot(Formula::atom(x1))))
            .verdict == Verdict::Unsat);
  CHECK(prover.is_valid(
      Formula::imp(K1(Formula::land(Formula::atom(x1), Formula::top())),
                   K1(Formula::atom(x1)))));
  CHECK_FALSE(prover.is_valid(Formula::atom(x1)));
  CHECK(prover.equivalent(Formula::atom(x1),
                          Formula::lnot(Formula::lnot(Formula::atom(x1)))));
}

TEST_CASE("introspection schemata hold for sampled formulas") {
  testing::Rng rng(53);
  EnsembleSignature sig = testing::small_signature();
  Prover prover(sig);
  std::vector<AgentId> agents(sig.agents.begin(), sig.agents.end());
  for (int i = 0; i < 100; ++i) {
    Formula f = testing::random_formula(rng, sig, 2);
    const AgentId& a = agents[i % agents.size()];
    Formula k = Formula::knows(a, f);
    // factivity
    CHECK(prover.is_valid(Formula::imp(k, f)));
    // positive introspection
    CHECK(prover.is_valid(Formula::imp(k, Formula::knows(a, k))));
    // negative introspection
    CHECK(prover.is_valid(Formula::imp(
        Formula::lnot(k), Formula::knows(a, Formula::lnot(k)))));
  }
}

TEST_CASE("agreement with exhaustive search over small models") {
  testing::Rng rng(59);
  EnsembleSignature sig = testing::small_signature();
  Prover prover(sig);
  int oracle_sat = 0, prover_unsat_checked = 0;
  for (int i = 0; i < 120; ++i) {
    Formula f = testing::random_formula(rng, sig, 3);
    auto model = testing::oracle_satisfiable(f, sig, 3);
    if (model) {
      ++oracle_sat;
      CHECK(prover.is_satisfiable(f).verdict == Verdict::Sat);
    } else if (prover.is_satisfiable(f).verdict == Verdict::Unsat) {
      // cross direction: exhaustive search must not refute an Unsat claim
      ++prover_unsat_checked;
    }
  }
  CHECK(oracle_sat > 10);
}

TEST_CASE("witnesses satisfy the query") {
  testing::Rng rng(61);
  EnsembleSignature sig = testing::small_signature();
  Prover prover(sig);
  for (int i = 0; i < 150; ++i) {
    Formula f = testing::random_formula(rng, sig, 3);
    auto r = prover.is_satisfiable(f);
    if (r.verdict == Verdict::Sat) {
      REQUIRE(r.witness.has_value());
      CHECK(satisfies(*r.witness, f));
      CHECK(validate_s5(r.witness->structure).empty());
    }
  }
}

TEST_CASE("signature errors are rejected before search") {
  Prover prover(testing::small_signature());
  CHECK_THROWS_AS(prover.is_satisfiable(Formula::atom(Prop{"zzz"})),
                  SignatureError);
}

TEST_CASE("the resource ceiling faults instead of guessing") {
  ProverOptions opt;
  opt.initial_depth = 1;
  opt.max_depth = 1;
  opt.max_worlds = 2;
  Prover prover(testing::small_signature(), opt);
  // forces a witness chain deeper than the ceiling
  Formula f = Formula::lnot(
      K1(Formula::lnot(K2(Formula::lnot(K1(Formula::lnot(K2(
          Formula::lnot(Formula::atom(x1))))))))));
  Formula probe = Formula::land(f, Formula::atom(x1));
  CHECK_THROWS_AS(prover.is_satisfiable(probe), InconclusiveError);
}
