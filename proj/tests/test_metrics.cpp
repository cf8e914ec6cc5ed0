#include "doctest.h"
#include "mcas/errors.hpp"
#include "mcas/gallium.hpp"
#include "mcas/metrics.hpp"
#include "mcas/scenario.hpp"

using namespace mcas;

namespace {

EnvState initial_state(const ScenarioSpec& spec) {
  EnvState s;
  for (const auto& node : spec.nodes) {
    for (const auto& p : node.properties) s.set(p.id, p.value.str());
  }
  return s;
}

ScenarioSpec two_node_fixture() {
  ScenarioSpec spec;
  spec.name = "fixture";
  spec.max_cycles = 5;
  NodeSpec a;
  a.id = "A";
  a.properties = {Property{PropertyId("A.active"), PropertyValue::text("true")}};
  NodeSpec b;
  b.id = "B";
  b.properties = {Property{PropertyId("B.active"), PropertyValue::text("true")}};
  spec.nodes = {a, b};
  spec.metrics = {"active_node_count", "lateral_move_count",
                  "compromised_node_count"};
  spec.eval.weights[0] = {0.0, 0.0, 0.0};
  spec.eval.weights[1] = {0.0, 0.0, 0.0};
  return spec;
}

}  // namespace

TEST_CASE("gallium initial metrics") {
  const ScenarioSpec spec = build_gallium();
  const EnvState s = initial_state(spec);
  const MetricVector m = compute_metrics(spec, s, {});
  REQUIRE(m.names == spec.metrics);
  // order: attacker_goal_progress, active_node_count, lateral_move_count,
  // compromised_node_count
  CHECK(m.values[0] == 0.0);
  CHECK(m.values[1] == 15.0);
  CHECK(m.values[2] == 0.0);
  CHECK(m.values[3] == 0.0);
}

TEST_CASE("empty state: all counts zero, goal progress zero") {
  const ScenarioSpec spec = build_gallium();
  const MetricVector m = compute_metrics(spec, EnvState{}, {});
  for (double v : m.values) CHECK(v == 0.0);
}

TEST_CASE("lateral moves and compromised nodes count markers") {
  const ScenarioSpec spec = two_node_fixture();
  EnvState s = initial_state(spec);
  MetricVector m = compute_metrics(spec, s, {});
  CHECK(m.values == std::vector<double>{2.0, 0.0, 0.0});

  s.set(PropertyId("B.compromised_by.red"), "true");
  m = compute_metrics(spec, s, {});
  CHECK(m.values == std::vector<double>{2.0, 1.0, 1.0});

  // second marker on the same node: one more move, same node count
  s.set(PropertyId("B.compromised_by.blue"), "true");
  m = compute_metrics(spec, s, {});
  CHECK(m.values == std::vector<double>{2.0, 2.0, 1.0});

  s.set(PropertyId("A.compromised_by.red"), "true");
  s.set(PropertyId("A.active"), "false");
  m = compute_metrics(spec, s, {});
  CHECK(m.values == std::vector<double>{1.0, 3.0, 2.0});
}

TEST_CASE("goal progress is the best alternative's satisfied conjunct count") {
  ScenarioSpec spec = two_node_fixture();
  spec.attacker_goal = {
      {PropertyPattern{PropertyId("A.flag"), std::string("x")},
       PropertyPattern{PropertyId("B.flag"), std::string("y")}},
      {PropertyPattern{PropertyId("A.other"), std::nullopt}},
  };
  spec.metrics = {"attacker_goal_progress"};
  spec.eval.weights[0] = {0.0};
  spec.eval.weights[1] = {0.0};

  EnvState s;
  CHECK(compute_metrics(spec, s, {}).values[0] == 0.0);
  s.set(PropertyId("A.flag"), "x");
  CHECK(compute_metrics(spec, s, {}).values[0] == 1.0);
  s.set(PropertyId("B.flag"), "y");
  CHECK(compute_metrics(spec, s, {}).values[0] == 2.0);
  // monotone under adding satisfied conjuncts
  s.set(PropertyId("A.other"), "anything");
  CHECK(compute_metrics(spec, s, {}).values[0] == 2.0);
}

TEST_CASE("unknown metric names are rejected") {
  ScenarioSpec spec = two_node_fixture();
  spec.metrics = {"entropy"};
  CHECK_THROWS_AS(compute_metrics(spec, EnvState{}, {}), UnknownMetric);
}

TEST_CASE("eval_rewards: affine map and dimension checks") {
  MetricVector m;
  m.names = {"m1", "m2"};
  m.values = {3.0, 4.0};

  EvalConfig zero;
  zero.weights = {std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 0.0}};
  CHECK(eval_rewards(m, zero) == RewardPair{0.0, 0.0});

  EvalConfig identity_like;
  identity_like.weights = {std::vector<double>{1.0, 0.0},
                           std::vector<double>{0.0, 1.0}};
  CHECK(eval_rewards(m, identity_like) == RewardPair{3.0, 4.0});

  EvalConfig biased;
  biased.weights = {std::vector<double>{2.0, -1.0},
                    std::vector<double>{0.5, 0.5}};
  biased.bias = {1.0, -1.0};
  const RewardPair r = eval_rewards(m, biased);
  CHECK(r.attacker == doctest::Approx(2 * 3 - 4 + 1));
  CHECK(r.defender == doctest::Approx(0.5 * 3 + 0.5 * 4 - 1));

  EvalConfig wrong;
  wrong.weights = {std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}};
  CHECK_THROWS_AS(eval_rewards(m, wrong), DimensionMismatch);
}

TEST_CASE("eval_rewards is linear with zero bias") {
  EvalConfig config;
  config.weights = {std::vector<double>{0.5, -2.0, 3.0},
                    std::vector<double>{1.0, 1.0, 1.0}};
  MetricVector m1{{"a", "b", "c"}, {1.0, 2.0, 3.0}};
  MetricVector m2{{"a", "b", "c"}, {-4.0, 0.5, 2.0}};
  for (double alpha : {0.0, 1.0, -2.5}) {
    for (double beta : {1.0, 0.25}) {
      MetricVector mix{{"a", "b", "c"}, {}};
      for (int i = 0; i < 3; ++i) {
        mix.values.push_back(alpha * m1.values[i] + beta * m2.values[i]);
      }
      const RewardPair lhs = eval_rewards(mix, config);
      const RewardPair r1 = eval_rewards(m1, config);
      const RewardPair r2 = eval_rewards(m2, config);
      CHECK(lhs.attacker ==
            doctest::Approx(alpha * r1.attacker + beta * r2.attacker));
      CHECK(lhs.defender ==
            doctest::Approx(alpha * r1.defender + beta * r2.defender));
    }
  }
}

TEST_CASE("gallium eval: goal state pays the attacker more than the start") {
  const ScenarioSpec spec = build_gallium();
  const EnvState start = initial_state(spec);
  EnvState done = start;
  done.set(PropertyId("DB.data.exfiltrated"), "true");
  done.set(PropertyId("PS.spyware.installed"), "true");
  const RewardPair at_start = eval_rewards(compute_metrics(spec, start, {}), spec.eval);
  const RewardPair at_goal = eval_rewards(compute_metrics(spec, done, {}), spec.eval);
  CHECK(at_goal.attacker > at_start.attacker);
}
