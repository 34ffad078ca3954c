#include <doctest.h>

#include "eens/action.hpp"
#include "eens/error.hpp"
#include "eens/kripke.hpp"
#include "support/gen.hpp"

using namespace eens;

namespace {

const AgentId a1{"a1"};
const AgentId a2{"a2"};
const Prop x1{"x1"};

Formula K1(Formula f) { return Formula::knows(a1, std::move(f)); }

}  // namespace

TEST_CASE("group announcement wires the confusion edges") {
  EnsembleSignature sig = testing::small_signature();
  auto m = group_announcement({a2}, K1(Formula::atom(x1)), sig);
  REQUIRE(m->events.size() == 2);
  CHECK(m->pre[0] == desugar(K1(Formula::atom(x1))));
  CHECK(m->pre[1] == Formula::top());
  // outside the group: cannot tell the events apart
  CHECK(m->access.at(a1).count({0, 1}));
  CHECK(m->access.at(a1).count({1, 0}));
  // inside the group: distinguishes them
  CHECK_FALSE(m->access.at(a2).count({0, 1}));
  CHECK(validate_action_model(*m).empty());

  // full-group announcement separates the events for everyone
  auto full = group_announcement(sig.agents, Formula::atom(x1), sig);
  CHECK_FALSE(full->access.at(a1).count({0, 1}));
  CHECK_FALSE(full->access.at(a2).count({0, 1}));
  CHECK(validate_action_model(*full).empty());

  // the null event has no information content
  CHECK(agents_of_action({m, 1}, sig) == sig.agents);
  CHECK(agents_of_action({m, 0}, sig) == std::set<AgentId>{a1});
}

TEST_CASE("lossy send offers both outcomes over one model") {
  EnsembleSignature sig = testing::small_signature();
  ChoiceAction c = lossy_send(a1, a2, K1(Formula::atom(x1)), sig);
  REQUIRE(c.alternatives.size() == 2);
  CHECK(c.alternatives[0].model == c.alternatives[1].model);
  CHECK(c.alternatives[0].point != c.alternatives[1].point);
  CHECK(agents_of_choice(c, sig) == std::set<AgentId>{a1});
  // a bare proposition is no agent's formula
  CHECK_THROWS_AS(lossy_send(a1, a2, Formula::atom(x1), sig), SignatureError);
}

TEST_CASE("reliable send is a singleton both parties witness") {
  EnsembleSignature sig = testing::small_signature();
  Formula kw = Formula::knows_whether(a2, Formula::atom(x1));
  ChoiceAction c = reliable_send(a2, a1, kw, sig);
  REQUIRE(c.alternatives.size() == 1);
  const EpistemicAction& e = c.alternatives[0];
  CHECK(e.model->events[e.point] == "ek");
  // neither participant confuses delivery with loss
  CHECK_FALSE(e.model->access.at(a1).count({0, 1}));
  CHECK_FALSE(e.model->access.at(a2).count({0, 1}));
  CHECK(agents_of_choice(c, sig) == std::set<AgentId>{a2});
}

TEST_CASE("interpretation validation") {
  EnsembleSignature sig = testing::small_signature();
  ActionInterpretation interp;
  interp.map[ActionSym{"m1"}] = lossy_send(a1, a2, K1(Formula::atom(x1)), sig);
  interp.map[ActionSym{"m2"}] =
      ChoiceAction{{{group_announcement(sig.agents, Formula::top(), sig), 0}}};
  interp.map[ActionSym{"n1"}] =
      reliable_send(a2, a1, Formula::knows_whether(a2, Formula::atom(x1)),
                    sig);
  CHECK(validate_interpretation(interp, sig).empty());

  // ownership mismatch: n1 belongs to a2 but the action is a1's
  ActionInterpretation bad = interp;
  bad.map[ActionSym{"n1"}] = lossy_send(a1, a2, K1(Formula::atom(x1)), sig);
  auto diags = validate_interpretation(bad, sig);
  REQUIRE(diags.size() == 1);
  CHECK(diags.front().symbol == ActionSym{"n1"});

  // totality
  ActionInterpretation partial = interp;
  partial.map.erase(ActionSym{"m2"});
  diags = validate_interpretation(partial, sig);
  REQUIRE(diags.size() == 1);
  CHECK(diags.front().symbol == ActionSym{"m2"});
}

TEST_CASE("canonical keys separate points but join equal models") {
  EnsembleSignature sig = testing::small_signature();
  ChoiceAction c = lossy_send(a1, a2, K1(Formula::atom(x1)), sig);
  ChoiceAction c2 = lossy_send(a1, a2, K1(Formula::atom(x1)), sig);
  CHECK(canonical_key(c.alternatives[0]) == canonical_key(c2.alternatives[0]));
  CHECK(canonical_key(c.alternatives[0]) != canonical_key(c.alternatives[1]));

  ActionInterpretation interp;
  interp.map[ActionSym{"m1"}] = c;
  interp.map[ActionSym{"m2"}] = c2;  // same actions again
  CHECK(interp.all_actions().size() == 2);
}
