#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcas/scenario.hpp"

namespace mcas {

/// Default node-expansion budget for shortest_goal_path.
inline constexpr std::uint64_t kDefaultSearchBudget = 2'000'000;

struct GoalPathStep {
  std::string agent;   // an attacker allowed to play the action
  std::string action;

  bool operator==(const GoalPathStep&) const = default;
};

/// Breadth-first search over environment states (memoized by state digest)
/// using only attacker-playable actions, defenders inactive. Returns a
/// minimum-length applicable action sequence reaching the attacker goal.
/// Absent means unreachable or budget exhausted; the two are not
/// distinguishable.
std::optional<std::vector<GoalPathStep>> shortest_goal_path(
    const ScenarioSpec& spec, std::uint64_t budget = kDefaultSearchBudget);

}  // namespace mcas
