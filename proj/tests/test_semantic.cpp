#include <doctest.h>

#include <fstream>
#include <sstream>

#include "eens/equivalence.hpp"
#include "eens/problem.hpp"
#include "eens/semantic_engine.hpp"
#include "support/gen.hpp"

using namespace eens;

namespace {

const AgentId a1{"a1"};
const AgentId a2{"a2"};
const Prop x1{"x1"};

Formula K1(Formula f) { return Formula::knows(a1, std::move(f)); }
Formula K2(Formula f) { return Formula::knows(a2, std::move(f)); }

ProblemSpec load_bt() {
  std::ifstream in(std::string(EENS_MODELS_DIR) + "/bit_transmission.eens");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), "bit_transmission.eens");
}

PointedKripke est0() {
  PointedKripke s;
  s.structure.worlds = {"w0", "w1"};
  s.structure.label = {{x1}, {}};
  s.structure.access[a1] = {{0, 0}, {1, 1}};
  s.structure.access[a2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  s.point = 0;
  return s;
}

PointedKripke est0_flipped() {
  PointedKripke s = est0();
  s.structure.label = {{}, {x1}};
  return s;
}

// One world where everyone knows everything about the bit.
PointedKripke common_knowledge_state() {
  PointedKripke s;
  s.structure.worlds = {"w0"};
  s.structure.label = {{x1}};
  s.structure.access[a1] = {{0, 0}};
  s.structure.access[a2] = {{0, 0}};
  s.point = 0;
  return s;
}

}  // namespace

TEST_CASE("class satisfaction quantifies over all members") {
  StateClass uniform = StateClass::canonical({est0()});
  CHECK(class_satisfies(uniform, Formula::top()));
  CHECK(class_satisfies(uniform, K1(Formula::atom(x1))));

  StateClass mixed = StateClass::canonical({est0(), est0_flipped()});
  CHECK(class_satisfies(mixed, Formula::top()));
  CHECK_FALSE(class_satisfies(mixed, K1(Formula::atom(x1))));
  CHECK(class_satisfies(mixed,
                        Formula::knows_whether(a1, Formula::atom(x1))));

  CHECK_THROWS_AS(StateClass::canonical({}), Error);
}

TEST_CASE("a lossy announcement forks the class") {
  EnsembleSignature sig = testing::small_signature();
  StateClass s = StateClass::canonical({est0()});
  ChoiceAction lossy = lossy_send(a1, a2, K1(Formula::atom(x1)), sig);
  auto succs = choice_step(s, lossy);
  REQUIRE(succs.size() == 2);
  // one branch teaches a2 the bit, the other does not
  bool taught = false, missed = false;
  for (const auto& c : succs) {
    taught = taught || class_satisfies(c, K2(Formula::atom(x1)));
    missed = missed || class_satisfies(c, Formula::lnot(K2(Formula::atom(x1))));
  }
  CHECK(taught);
  CHECK(missed);
}

TEST_CASE("disabled alternatives contribute nothing") {
  EnsembleSignature sig = testing::small_signature();
  StateClass s = StateClass::canonical({est0()});
  ChoiceAction impossible =
      reliable_send(a1, a2, K1(Formula::lnot(Formula::atom(x1))), sig);
  CHECK(choice_step(s, impossible).empty());
}

TEST_CASE("choice steps move members pointwise") {
  // every member of a successor class is the update of some member, and
  // members of enabled classes step into the class successor
  testing::Rng rng(79);
  EnsembleSignature sig = testing::small_signature();
  int class_steps = 0;
  for (int i = 0; i < 150; ++i) {
    std::vector<PointedKripke> pool;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < n; ++j)
      pool.push_back(testing::random_s5_state(rng, sig, 3));
    StateClass s = StateClass::canonical(pool);
    ChoiceAction c = testing::random_choice_action(rng, sig, 3, 3, 2);

    for (const auto& alt : c.alternatives) {
      if (!class_satisfies(s, alt.pre())) continue;
      ++class_steps;
      StateClass succ = StateClass::canonical([&] {
        std::vector<PointedKripke> ms;
        for (const auto& m : s.members()) ms.push_back(*product_update(m, alt));
        return ms;
      }());
      // zig: each member's own step lands inside the class successor
      for (const auto& m : s.members()) {
        auto u = product_update(m, alt);
        REQUIRE(u.has_value());
        std::string key = canonical_key(minimize(*u));
        bool inside = false;
        for (const auto& sm : succ.members())
          inside = inside || canonical_key(sm) == key;
        CHECK(inside);
      }
      // zag: each successor member is some member's update
      for (const auto& sm : succ.members()) {
        bool from_member = false;
        for (const auto& m : s.members()) {
          auto u = product_update(m, alt);
          if (u && canonical_key(minimize(*u)) == canonical_key(sm))
            from_member = true;
        }
        CHECK(from_member);
      }
    }
  }
  CHECK(class_steps > 30);
}

TEST_CASE("enabled actions at the protocol start") {
  ProblemSpec spec = load_bt();
  Configuration root = spec.semantic_root();
  auto steps = config_step(root, spec.interp);
  std::set<std::string> actions;
  for (const auto& [n, c] : steps) actions.insert(n.name);
  CHECK(actions == std::set<std::string>{"tell12_x1"});
}

TEST_CASE("a mixed class can take no transition") {
  ProblemSpec spec = load_bt();
  Configuration mixed{spec.ensemble,
                      StateClass::canonical({est0(), est0_flipped()})};
  CHECK(config_step(mixed, spec.interp).empty());
}

TEST_CASE("acknowledged classes enable ack and stop") {
  ProblemSpec spec = load_bt();
  Configuration sure{spec.ensemble,
                     StateClass::canonical({common_knowledge_state()})};
  auto steps = config_step(sure, spec.interp);
  std::set<std::string> actions;
  for (const auto& [n, c] : steps) actions.insert(n.name);
  CHECK(actions == std::set<std::string>{"ack21_x1", "stop"});
}

TEST_CASE("exploration closes on the bit transmission protocol") {
  ProblemSpec spec = load_bt();
  SemanticGraph g = explore_semantic(spec.semantic_root(), spec.interp, 500);
  CHECK(g.closed());
  CHECK(g.nodes.size() > 4);
  CHECK(g.nodes.size() < 100);

  // determinism: a second run yields the identical graph
  SemanticGraph h = explore_semantic(spec.semantic_root(), spec.interp, 500);
  REQUIRE(g.nodes.size() == h.nodes.size());
  REQUIRE(g.edges.size() == h.edges.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(g.nodes[i].ensemble == h.nodes[i].ensemble);
    CHECK(g.nodes[i].state.key() == h.nodes[i].state.key());
  }
}

TEST_CASE("node identity ignores member ordering and duplication") {
  ProblemSpec spec = load_bt();
  std::vector<PointedKripke> members = spec.init_semantic;
  std::vector<PointedKripke> shuffled(members.rbegin(), members.rend());
  shuffled.push_back(members.front());  // duplicate one member
  Configuration c1{spec.ensemble, StateClass::canonical(members)};
  Configuration c2{spec.ensemble, StateClass::canonical(shuffled)};
  CHECK(c1.cls == c2.cls);
  SemanticGraph g1 = explore_semantic(c1, spec.interp, 500);
  SemanticGraph g2 = explore_semantic(c2, spec.interp, 500);
  CHECK(g1.nodes.size() == g2.nodes.size());
  CHECK(g1.edges.size() == g2.edges.size());
}

TEST_CASE("a halted ensemble explores to a single node") {
  ProblemSpec spec = load_bt();
  Ensemble idle;
  idle.family[a1] = Process::nil();
  idle.family[a2] = Process::nil();
  Configuration c{idle, spec.semantic_root().cls};
  SemanticGraph g = explore_semantic(c, spec.interp, 10);
  CHECK(g.closed());
  CHECK(g.nodes.size() == 1);
  CHECK(g.edges.empty());
}

TEST_CASE("compound relations over the explored graph") {
  ProblemSpec spec = load_bt();
  SemanticGraph g = explore_semantic(spec.semantic_root(), spec.interp, 500);
  SemanticEnv env{&spec.interp};

  // a trivial test is the identity
  auto id = compound_relation(g, env, CompoundAction::test(Formula::top()));
  CHECK(id.size() == g.nodes.size());
  for (const auto& [i, j] : id) CHECK(i == j);

  // iterating all actions reaches everything from the root
  CompoundAction some = spec.cactions.at("some");
  auto star = compound_relation(g, env, CompoundAction::star(some));
  std::set<int> reached;
  for (const auto& [i, j] : star)
    if (i == 0) reached.insert(j);
  CHECK(reached.size() == g.nodes.size());

  // stopping halts the sender and leaves the receiver
  auto stop = compound_relation(
      g, env, CompoundAction::atom(ActionSym{"stop"}));
  for (const auto& [i, j] : stop)
    CHECK(g.nodes[j].ensemble.family.at(a1) == Process::nil());
}

TEST_CASE("boxes over anything hold trivially") {
  ProblemSpec spec = load_bt();
  EnsembleFormula f = EnsembleFormula::box(spec.cactions.at("some"),
                                           EnsembleFormula::top());
  CHECK(model_check(spec.semantic_root(), f, spec.interp) == TriBool::True);
}

TEST_CASE("verdicts touching the frontier are unknown") {
  ProblemSpec spec = load_bt();
  EnsembleFormula f = EnsembleFormula::box(
      CompoundAction::star(spec.cactions.at("some")),
      EnsembleFormula::epi(Formula::top()));
  // budget of one node: the root itself stays unexpanded
  CHECK(model_check(spec.semantic_root(), f, spec.interp, 1) ==
        TriBool::Unknown);
  // but a definite refutation needs no closure
  EnsembleFormula g = EnsembleFormula::lnot(EnsembleFormula::epi(
      K1(Formula::atom(x1))));
  CHECK(model_check(spec.semantic_root(), g, spec.interp, 1) ==
        TriBool::False);
}

TEST_CASE("configuration truth decomposes into members on uniform runs") {
  ProblemSpec spec = load_bt();
  testing::Rng rng(83);
  Configuration root = spec.semantic_root();
  SemanticEnv env{&spec.interp};
  SemanticGraph whole_graph = explore(env, root.ensemble, root.cls, 2000);
  REQUIRE(whole_graph.closed());
  std::vector<SemanticGraph> member_graphs;
  for (const auto& m : root.cls.members()) {
    member_graphs.push_back(
        explore(env, root.ensemble, StateClass::canonical({m}), 2000));
    REQUIRE(member_graphs.back().closed());
  }
  for (int i = 0; i < 60; ++i) {
    EnsembleFormula f = normalize(
        testing::random_ensemble_formula(rng, spec.sig, spec.focus, 2));
    TriBool whole = check_formula(whole_graph, env, f);
    REQUIRE(whole != TriBool::Unknown);
    bool all = true;
    for (const auto& g : member_graphs) {
      TriBool v = check_formula(g, env, f);
      REQUIRE(v != TriBool::Unknown);
      all = all && v == TriBool::True;
    }
    CHECK((whole == TriBool::True) == all);
  }
}
