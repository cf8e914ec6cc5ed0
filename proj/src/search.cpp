#include "mcas/search.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "mcas/action.hpp"
#include "mcas/errors.hpp"
#include "mcas/log.hpp"

namespace mcas {

namespace {

struct SearchEdge {
  std::uint64_t parent;
  std::size_t action_index;
};

}  // namespace

std::optional<std::vector<GoalPathStep>> shortest_goal_path(
    const ScenarioSpec& spec, std::uint64_t budget) {
  // Attacker-playable actions, declaration order, with the first allowed
  // attacker recorded as the performer.
  std::vector<std::size_t> attacker_actions;
  std::vector<std::string> performer;
  for (std::size_t i = 0; i < spec.actions.size(); ++i) {
    for (const AgentSpec& agent : spec.agents) {
      if (agent.team == Team::Attacker && spec.actions[i].allows(agent.id)) {
        attacker_actions.push_back(i);
        performer.push_back(agent.id);
        break;
      }
    }
  }

  EnvState initial;
  for (const NodeSpec& node : spec.nodes) {
    for (const Property& p : node.properties) initial.set(p.id, p.value.str());
  }

  auto reconstruct = [&](std::uint64_t leaf,
                         const std::unordered_map<std::uint64_t, SearchEdge>&
                             edges) {
    std::vector<GoalPathStep> path;
    std::uint64_t cursor = leaf;
    while (true) {
      const auto it = edges.find(cursor);
      if (it == edges.end()) break;
      const std::size_t action_pos = it->second.action_index;
      path.push_back(GoalPathStep{performer[action_pos],
                                  spec.actions[attacker_actions[action_pos]].name});
      cursor = it->second.parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  if (satisfied(spec.attacker_goal, initial)) {
    return std::vector<GoalPathStep>{};
  }

  std::deque<EnvState> frontier;
  std::unordered_map<std::uint64_t, SearchEdge> edges;  // digest -> parent edge
  std::unordered_map<std::uint64_t, bool> seen;
  const std::uint64_t root = initial.digest();
  seen.emplace(root, true);
  frontier.push_back(std::move(initial));

  std::uint64_t expanded = 0;
  while (!frontier.empty()) {
    if (expanded >= budget) {
      log_info("shortest_goal_path: budget of ", budget,
               " expansions exhausted");
      return std::nullopt;
    }
    EnvState state = std::move(frontier.front());
    frontier.pop_front();
    ++expanded;
    const std::uint64_t from = state.digest();

    for (std::size_t pos = 0; pos < attacker_actions.size(); ++pos) {
      const ActionSpec& action = spec.actions[attacker_actions[pos]];
      if (!precondition_satisfied(state, action)) continue;
      EnvState next = apply_action(state, action);
      const std::uint64_t digest = next.digest();
      if (seen.count(digest)) continue;
      seen.emplace(digest, true);
      edges.emplace(digest, SearchEdge{from, pos});
      if (satisfied(spec.attacker_goal, next)) {
        auto path = reconstruct(digest, edges);
        log_info("shortest_goal_path: length ", path.size(), " after ",
                 expanded, " expansions");
        return path;
      }
      frontier.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

}  // namespace mcas
