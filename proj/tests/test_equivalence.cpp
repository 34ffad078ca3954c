#include <doctest.h>

#include <fstream>
#include <sstream>

#include "eens/equivalence.hpp"
#include "eens/problem.hpp"
#include "support/gen.hpp"

using namespace eens;

namespace {

const AgentId a1{"a1"};
const AgentId a2{"a2"};
const Prop x1{"x1"};

Formula K1(Formula f) { return Formula::knows(a1, std::move(f)); }

ProblemSpec load_bt() {
  std::ifstream in(std::string(EENS_MODELS_DIR) + "/bit_transmission.eens");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), "bit_transmission.eens");
}

// Pool states bucketed by which focus formulas they satisfy; classes built
// within one bucket are equivalent to the bucket's knowledge base.
std::map<std::set<Formula>, std::vector<PointedKripke>> fingerprint_pool(
    testing::Rng& rng, const EnsembleSignature& sig, const FocusSet& F,
    int count) {
  std::map<std::set<Formula>, std::vector<PointedKripke>> buckets;
  for (int i = 0; i < count; ++i) {
    PointedKripke s = testing::random_s5_state(rng, sig, 4);
    std::set<Formula> print;
    for (const auto& f : F)
      if (satisfies(s, f)) print.insert(f);
    buckets[print].push_back(std::move(s));
  }
  return buckets;
}

}  // namespace

TEST_CASE("equivalence at the focus level") {
  ProblemSpec spec = load_bt();
  StateClass S = spec.semantic_root().cls;
  SymbolicState s = *spec.init_symbolic;
  CHECK(f_equivalent(S, s, spec.focus));

  // dropping a known formula breaks it
  SymbolicState smaller({K1(Formula::atom(x1))}, spec.focus);
  CHECK_FALSE(f_equivalent(S, smaller, spec.focus));

  // over the single focus formula it holds with the singleton base
  FocusSet single({K1(Formula::atom(x1))});
  SymbolicState just_k1({K1(Formula::atom(x1))}, single);
  CHECK(f_equivalent(S, just_k1, single));
  SymbolicState nothing({}, single);
  CHECK_FALSE(f_equivalent(S, nothing, single));
}

TEST_CASE("equivalent pairs agree on the whole Boolean closure") {
  ProblemSpec spec = load_bt();
  testing::Rng rng(101);
  auto buckets = fingerprint_pool(rng, spec.sig, spec.focus, 300);
  int tested = 0;
  for (auto& [print, states] : buckets) {
    if (states.size() < 2) continue;
    StateClass S = StateClass::canonical(states);
    SymbolicState s(std::vector<Formula>(print.begin(), print.end()),
                    spec.focus);
    REQUIRE(f_equivalent(S, s, spec.focus));
    EquivalenceReport r = check_bcl_agreement(S, s, spec.focus, 60, 5);
    CHECK(r.ok());
    tested += 1;
  }
  CHECK(tested >= 3);
}

TEST_CASE("a corrupted knowledge base produces a violation") {
  ProblemSpec spec = load_bt();
  StateClass S = spec.semantic_root().cls;
  // toggle one focus formula
  std::vector<Formula> members;
  for (const auto& f : spec.init_symbolic->members()) members.push_back(f);
  members.push_back(K1(Formula::lnot(Formula::atom(x1))));
  SymbolicState corrupted(members, spec.focus);
  CHECK_FALSE(f_equivalent(S, corrupted, spec.focus));
  EquivalenceReport r = check_bcl_agreement(S, corrupted, spec.focus, 80, 11);
  CHECK_FALSE(r.ok());
}

TEST_CASE("the two engines simulate each other step by step") {
  ProblemSpec spec = load_bt();
  EquivalenceReport r =
      check_simulation(spec.semantic_root(), spec.symbolic_root(), spec.interp,
                       spec.table, spec.focus, /*depth=*/-1);
  for (const auto& v : r.violations)
    MESSAGE(v.where, " ", v.subject, " ", v.direction, " ", v.detail);
  CHECK(r.ok());
  CHECK(r.pairs_checked > 3);
}

TEST_CASE("one-step updates preserve equivalence") {
  ProblemSpec spec = load_bt();
  StateClass S = spec.semantic_root().cls;
  SymbolicState s = *spec.init_symbolic;
  REQUIRE(f_equivalent(S, s, spec.focus));

  for (const char* event : {"ek", "en"}) {
    EpistemicAction act = spec.action_ref("tell12_x1", event);
    if (!class_satisfies(S, act.pre())) continue;
    std::vector<PointedKripke> updated;
    for (const auto& m : S.members())
      updated.push_back(*product_update(m, act));
    StateClass S2 = StateClass::canonical(updated);
    SymbolicState s2 = sym_update(s, act, spec.table, spec.focus);
    CHECK(f_equivalent(S2, s2, spec.focus));
  }
}

TEST_CASE("equivalent roots with nothing enabled give an empty report") {
  ProblemSpec spec = load_bt();
  Ensemble idle;
  idle.family[a1] = Process::nil();
  idle.family[a2] = Process::nil();
  Configuration sem{idle, spec.semantic_root().cls};
  SymbolicConfiguration sym{idle, *spec.init_symbolic};
  EquivalenceReport r = check_simulation(sem, sym, spec.interp, spec.table,
                                         spec.focus, -1);
  CHECK(r.ok());
}

TEST_CASE("differential verdicts agree on the declared formulas") {
  ProblemSpec spec = load_bt();
  EquivalenceReport r =
      differential_check(spec.semantic_root(), spec.symbolic_root(),
                         spec.formulas, spec.interp, spec.table, spec.focus);
  for (const auto& v : r.violations)
    MESSAGE(v.subject, ": ", v.detail);
  CHECK(r.ok());
  CHECK(r.skipped.empty());
  CHECK(r.pairs_checked == static_cast<long>(spec.formulas.size()));
}

TEST_CASE("symbolic satisfaction is blind to equivalent reformulations") {
  // bases that arise as partners of real classes satisfy either of two
  // logically equivalent closure formulas alike
  ProblemSpec spec = load_bt();
  Prover prover(spec.sig);
  testing::Rng rng(103);
  auto buckets = fingerprint_pool(rng, spec.sig, spec.focus, 120);
  int agreements = 0;
  for (auto& [print, states] : buckets) {
    (void)states;
    SymbolicState s(std::vector<Formula>(print.begin(), print.end()),
                    spec.focus);
    for (int i = 0; i < 8; ++i) {
      Formula b1 = testing::random_bcl_formula(rng, spec.focus, 2);
      Formula b2 = desugar(Formula::lnot(Formula::lnot(b1)));
      Formula b3 = desugar(Formula::land(b1, Formula::top()));
      if (!prover.equivalent(b1, b2) || !prover.equivalent(b1, b3)) continue;
      bool v = sym_satisfies(s, b1, spec.focus);
      CHECK(sym_satisfies(s, b2, spec.focus) == v);
      CHECK(sym_satisfies(s, b3, spec.focus) == v);
      ++agreements;
    }
  }
  CHECK(agreements > 20);
}

TEST_CASE("reports serialise to json") {
  EquivalenceReport r;
  r.pairs_checked = 2;
  r.violations.push_back({"somewhere", "f", "dir", "detail"});
  std::string j = to_json(r);
  CHECK(j.find("\"ok\": false") != std::string::npos);
  CHECK(j.find("somewhere") != std::string::npos);
}
