#include <map>

#include "doctest.h"
#include "generators.hpp"
#include "mcas/action.hpp"
#include "mcas/errors.hpp"
#include "mcas/state.hpp"
#include "oracle.hpp"

using namespace mcas;

namespace {

EnvState state_of(std::initializer_list<std::pair<const char*, const char*>> kv) {
  EnvState s;
  for (const auto& [id, value] : kv) s.set(PropertyId(id), value);
  return s;
}

PropertyPattern eq(const char* id, const char* value) {
  return PropertyPattern{PropertyId(id), std::string(value)};
}

}  // namespace

TEST_CASE("property ids validate segments and compare by segment list") {
  CHECK(PropertyId("PC1.processes.agents.agent1").segment_count() == 4);
  CHECK(PropertyId("PC1.processes").head() == "PC1");
  CHECK(PropertyId("a.b").segment(1) == "b");
  CHECK(PropertyId("a.b") == PropertyId("a.b"));
  CHECK(PropertyId("a.b") != PropertyId("a.c"));
  CHECK_FALSE(PropertyId::try_parse("").has_value());
  CHECK_FALSE(PropertyId::try_parse("a..b").has_value());
  CHECK_FALSE(PropertyId::try_parse(".a").has_value());
  CHECK_FALSE(PropertyId::try_parse("a.").has_value());
  CHECK_THROWS_AS(PropertyId("x..y"), std::invalid_argument);

  CHECK(PropertyId("WS.logs.error").has_prefix(PropertyId("WS")));
  CHECK(PropertyId("WS.logs.error").has_prefix(PropertyId("WS.logs")));
  CHECK_FALSE(PropertyId("WS").has_prefix(PropertyId("WS")));
  CHECK_FALSE(PropertyId("WSX.logs").has_prefix(PropertyId("WS")));
}

TEST_CASE("precondition: disjunction of conjunctions") {
  // p1..p9 with the ids of the worked example: p4 is bound to id2, p2 to id4.
  const EnvState s = state_of({{"n.id1", "v1"},
                               {"n.id3", "v3"},
                               {"n.id2", "v4"},
                               {"n.id4", "v2"},
                               {"n.id9", "v9"}});
  ActionSpec a;
  a.pre = {{eq("n.id3", "v3")}, {eq("n.id2", "v4"), eq("n.id10", "v10")}};
  CHECK(precondition_satisfied(s, a));  // first alternative matches

  ActionSpec unmatched;
  unmatched.pre = {{eq("n.id3", "nope")}, {eq("n.id10", "v10")}};
  CHECK_FALSE(precondition_satisfied(s, unmatched));

  ActionSpec empty_conjunction;
  empty_conjunction.pre = {Conjunction{}};
  CHECK(precondition_satisfied(EnvState{}, empty_conjunction));
  CHECK(precondition_satisfied(s, empty_conjunction));

  ActionSpec no_alternatives;  // bootstrap actions are always applicable
  CHECK(precondition_satisfied(EnvState{}, no_alternatives));

  ActionSpec wildcard;
  wildcard.pre = {{PropertyPattern{PropertyId("n.id9"), std::nullopt}}};
  CHECK(precondition_satisfied(s, wildcard));
  CHECK_FALSE(precondition_satisfied(EnvState{}, wildcard));
}

TEST_CASE("apply_action: the worked replace/delete example") {
  const EnvState s = state_of({{"n.id1", "v1"},
                               {"n.id3", "v3"},
                               {"n.id2", "v4"},
                               {"n.id4", "v2"},
                               {"n.id9", "v9"}});
  ActionSpec a;
  a.name = "action1";
  a.pre = {{eq("n.id3", "v3")}, {eq("n.id2", "v4"), eq("n.id10", "v10")}};
  a.post = {
      Property{PropertyId("n.id4"), PropertyValue::absent()},   // deletes p2
      Property{PropertyId("n.id2"), PropertyValue::text("v14")},  // replaces p4
      Property{PropertyId("n.id11"), PropertyValue::text("v11")},
  };

  const EnvState next = apply_action(s, a);
  const EnvState expected = state_of({{"n.id1", "v1"},
                                      {"n.id3", "v3"},
                                      {"n.id9", "v9"},
                                      {"n.id2", "v14"},
                                      {"n.id11", "v11"}});
  CHECK(next == expected);
  CHECK_FALSE(next.contains(PropertyId("n.id4")));  // deleted, not re-added
  // input untouched
  CHECK(s.contains(PropertyId("n.id4")));
  CHECK(*s.find(PropertyId("n.id2")) == "v4");
}

TEST_CASE("apply_action: privilege-escalation style union") {
  const EnvState s = state_of(
      {{"agents.x.privilege_level", "root"},
       {"agents.x.accessed_text_editor", "Vim"},
       {"agents.x.bashrc_known_filepath", "/home/user/.bashrc"},
       {"host.os", "linux"}});
  ActionSpec a;
  a.pre = {{eq("agents.x.privilege_level", "root"),
            eq("agents.x.accessed_text_editor", "Vim"),
            eq("agents.x.bashrc_known_filepath", "/home/user/.bashrc")}};
  a.post = {Property{PropertyId("host.bashrc_modified_by_x"),
                     PropertyValue::text("true")}};
  const EnvState next = apply_action(s, a);
  CHECK(next.size() == s.size() + 1);
  CHECK(*next.find(PropertyId("host.bashrc_modified_by_x")) == "true");
}

TEST_CASE("apply_action: empty post is identity; gate violations throw") {
  const EnvState s = state_of({{"n.a", "1"}});
  ActionSpec noop;
  CHECK(apply_action(s, noop) == s);

  ActionSpec gated;
  gated.name = "gated";
  gated.pre = {{eq("n.missing", "x")}};
  CHECK_THROWS_AS(apply_action(s, gated), PreconditionUnsatisfied);
}

TEST_CASE("pure deletions are idempotent") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    EnvState s = gen::state(rng);
    ActionSpec a = gen::action(rng, s);
    for (auto& p : a.post) p.value = PropertyValue::absent();
    a.pre.clear();  // keep it applicable after the first application
    const EnvState once = apply_action(s, a);
    const EnvState twice = apply_action(once, a);
    CHECK(once == twice);
  }
}

TEST_CASE("transition semantics agree with the brute-force oracle") {
  Rng rng(7);
  int applicable = 0;
  for (int i = 0; i < 4000; ++i) {
    const EnvState s = gen::state(rng);
    const ActionSpec a = gen::action(rng, s);
    const bool expected = oracle::precondition(s, a);
    REQUIRE(precondition_satisfied(s, a) == expected);
    if (expected) {
      ++applicable;
      REQUIRE(oracle::to_map(apply_action(s, a)) == oracle::apply(s, a));
    }
  }
  // the generator must keep producing applicable instances for this test to
  // mean anything
  CHECK(applicable > 1000);
}

TEST_CASE("post id bookkeeping: ids(next) = (ids(s) - ids(post)) + kept ids") {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    const EnvState s = gen::state(rng);
    ActionSpec a = gen::action(rng, s);
    a.pre.clear();
    const EnvState next = apply_action(s, a);

    std::set<PropertyId> expected_ids;
    std::set<PropertyId> post_ids;
    for (const auto& p : a.post) post_ids.insert(p.id);
    for (const auto& [id, value] : s) {
      if (post_ids.count(id) == 0) expected_ids.insert(id);
    }
    for (const auto& p : a.post) {
      if (!p.value.is_absent()) expected_ids.insert(p.id);
    }
    std::set<PropertyId> actual_ids;
    for (const auto& [id, value] : next) actual_ids.insert(id);
    REQUIRE(actual_ids == expected_ids);

    // deterministic and pure
    REQUIRE(apply_action(s, a) == next);
  }
}

TEST_CASE("state digest is order-independent and content-sensitive") {
  EnvState a;
  a.set(PropertyId("n.x"), "1");
  a.set(PropertyId("n.y"), "2");
  EnvState b;
  b.set(PropertyId("n.y"), "2");
  b.set(PropertyId("n.x"), "1");
  CHECK(a.digest() == b.digest());
  b.set(PropertyId("n.y"), "3");
  CHECK(a.digest() != b.digest());
  CHECK(EnvState{}.digest() == kFnvOffsetBasis);
}
