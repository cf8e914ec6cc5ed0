#include <set>

#include "doctest.h"
#include "mcas/environment.hpp"
#include "mcas/gallium.hpp"
#include "mcas/scenario.hpp"
#include "mcas/search.hpp"

using namespace mcas;

namespace {

std::vector<std::unique_ptr<Behavior>> battle_behaviors(
    const ScenarioSpec& spec, bool defenders_passive) {
  std::vector<std::unique_ptr<Behavior>> out;
  for (const AgentSpec& agent : spec.agents) {
    if (defenders_passive && agent.team == Team::Defender) {
      out.push_back(std::make_unique<PassBehavior>());
    } else {
      out.push_back(make_behavior(agent));
    }
  }
  return out;
}

EpisodeLog play(const ScenarioSpec& spec, bool defenders_passive,
                std::uint64_t seed) {
  auto behaviors = battle_behaviors(spec, defenders_passive);
  std::vector<Behavior*> raw;
  for (auto& b : behaviors) raw.push_back(b.get());
  return run_episode(spec, raw, seed);
}

}  // namespace

TEST_CASE("topology: 15 nodes in 5 subnets, attackers and defenders placed") {
  const ScenarioSpec spec = build_gallium();
  CHECK(spec.nodes.size() == 15);

  std::set<std::string> subnets;
  for (const NodeSpec& node : spec.nodes) {
    bool found = false;
    for (const Property& p : node.properties) {
      if (p.id.str() == node.id + ".subnet") {
        subnets.insert(p.value.str());
        found = true;
      }
    }
    CHECK_MESSAGE(found, "node without subnet: ", node.id);
  }
  CHECK(subnets == std::set<std::string>{"Outside", "DMZ", "ACC", "MAR", "SRV"});

  CHECK(spec.find_agent("attacker1")->home_node == "At1");
  CHECK(spec.find_agent("attacker2")->home_node == "At2");
  CHECK(spec.find_agent("defender1")->home_node == "WS");
  CHECK(spec.find_agent("defender2")->home_node == "DB");
}

TEST_CASE("action roster: 30 actions, shared attacker pool") {
  const ScenarioSpec spec = build_gallium();
  CHECK(spec.actions.size() == 30);
  CHECK(spec.find_agent("attacker1")->action_ids.size() == 26);
  CHECK(spec.find_agent("attacker2")->action_ids.size() == 26);
  CHECK(spec.find_agent("defender1")->action_ids.size() == 2);
  CHECK(spec.find_agent("defender2")->action_ids.size() == 2);
}

TEST_CASE("gallium validates cleanly and its goal is closure-reachable") {
  for (const ScenarioSpec& spec : {build_gallium(), build_gallium_marl()}) {
    const auto diagnostics = validate(spec);
    CHECK_FALSE(has_errors(diagnostics));
    for (const auto& d : diagnostics) {
      CHECK(d.code != "goal-unreachable");
    }
  }
  CHECK(validate(build_toy()).empty());
}

TEST_CASE("shortest attacker path length is 16") {
  const auto path = shortest_goal_path(build_gallium());
  REQUIRE(path.has_value());
  CHECK(path->size() == 16);
  // 16 *different* actions
  std::set<std::string> distinct;
  for (const auto& step : *path) distinct.insert(step.action);
  CHECK(distinct.size() == 16);
}

TEST_CASE("DT battle: passive defenders lose every seeded episode") {
  const ScenarioSpec spec = build_gallium();
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 31337ULL}) {
    const EpisodeLog log = play(spec, /*defenders_passive=*/true, seed);
    CHECK(log.terminal == TerminationStatus::AttackerGoalReached);
    CHECK(log.cycles == 8);
    CHECK(log.attacker_path_length() == 16);
  }
}

TEST_CASE("DT battle: active defenders block the goal entirely") {
  const ScenarioSpec spec = build_gallium();
  for (std::uint64_t seed : {0ULL, 7ULL, 1234ULL}) {
    const EpisodeLog log = play(spec, /*defenders_passive=*/false, seed);
    CHECK(log.terminal == TerminationStatus::MaxCyclesReached);
    CHECK(log.cycles == spec.max_cycles);
    CHECK_FALSE(log.success());
  }
}

TEST_CASE("defenders react through their own observations") {
  const ScenarioSpec spec = build_gallium();
  const EpisodeLog log = play(spec, false, 3);
  // the WS defender must have fired its quarantine at least once
  bool quarantined = false;
  bool pam = false;
  for (const StepRecord& r : log.records) {
    if (r.agent == "defender1" && r.action == "ws_quarantine_webshell" &&
        r.applied) {
      quarantined = true;
    }
    if (r.agent == "defender2" &&
        r.action == "db_privileged_account_management" && r.applied) {
      pam = true;
    }
  }
  CHECK(quarantined);
  CHECK(pam);
}

TEST_CASE("toy: validates, goal in 3, random agent can win or lose") {
  const ScenarioSpec toy = build_toy();
  CHECK(validate(toy).empty());
  const auto path = shortest_goal_path(toy);
  REQUIRE(path.has_value());
  CHECK(path->size() == 3);

  int wins = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto behaviors = battle_behaviors(toy, false);
    std::vector<Behavior*> raw;
    for (auto& b : behaviors) raw.push_back(b.get());
    wins += run_episode(toy, raw, seed).success() ? 1 : 0;
  }
  // exact probability is about 0.169; anywhere clearly inside (0, 1) works
  CHECK(wins > 5);
  CHECK(wins < 100);
}
