#include "mcas/metrics.hpp"

#include <algorithm>
#include <set>
#include <string_view>

#include "mcas/errors.hpp"
#include "mcas/scenario.hpp"

namespace mcas {

namespace {

double active_node_count(const ScenarioSpec& spec, const EnvState& state) {
  int active = 0;
  for (const NodeSpec& node : spec.nodes) {
    const std::string* value = state.find(PropertyId(node.id + ".active"));
    // A node counts as active when its active property is bound to anything
    // but "false"; a node with no such property reports nothing.
    if (value != nullptr && *value != "false") ++active;
  }
  return active;
}

bool is_compromise_marker(const PropertyId& id) {
  return id.segment_count() >= 3 && id.segment(1) == "compromised_by";
}

double lateral_move_count(const EnvState& state) {
  int moves = 0;
  for (const auto& [id, value] : state) {
    if (is_compromise_marker(id)) ++moves;
  }
  return moves;
}

double compromised_node_count(const EnvState& state) {
  std::set<std::string_view> nodes;
  for (const auto& [id, value] : state) {
    if (is_compromise_marker(id)) nodes.insert(id.head());
  }
  return static_cast<double>(nodes.size());
}

double attacker_goal_progress(const ScenarioSpec& spec, const EnvState& state) {
  std::size_t best = 0;
  for (const Conjunction& alt : spec.attacker_goal) {
    std::size_t hit = 0;
    for (const PropertyPattern& pattern : alt) {
      if (pattern.matches(state)) ++hit;
    }
    best = std::max(best, hit);
  }
  return static_cast<double>(best);
}

}  // namespace

const std::vector<std::string>& builtin_metric_names() {
  static const std::vector<std::string> names{
      "active_node_count",
      "lateral_move_count",
      "compromised_node_count",
      "attacker_goal_progress",
  };
  return names;
}

bool is_builtin_metric(const std::string& name) {
  const auto& names = builtin_metric_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

MetricVector compute_metrics(const ScenarioSpec& spec, const EnvState& state,
                             std::span<const std::string> /*joint_action*/) {
  MetricVector out;
  out.names = spec.metrics;
  out.values.reserve(spec.metrics.size());
  for (const std::string& name : spec.metrics) {
    if (name == "active_node_count") {
      out.values.push_back(active_node_count(spec, state));
    } else if (name == "lateral_move_count") {
      out.values.push_back(lateral_move_count(state));
    } else if (name == "compromised_node_count") {
      out.values.push_back(compromised_node_count(state));
    } else if (name == "attacker_goal_progress") {
      out.values.push_back(attacker_goal_progress(spec, state));
    } else {
      throw UnknownMetric("unknown metric '" + name + "'");
    }
  }
  return out;
}

RewardPair eval_rewards(const MetricVector& metrics, const EvalConfig& config) {
  const std::size_t n = metrics.values.size();
  for (const auto& row : config.weights) {
    if (row.size() != n) {
      throw DimensionMismatch("eval weights expect " +
                              std::to_string(row.size()) + " metrics, got " +
                              std::to_string(n));
    }
  }
  RewardPair rewards{config.bias[0], config.bias[1]};
  for (std::size_t i = 0; i < n; ++i) {
    rewards.attacker += config.weights[0][i] * metrics.values[i];
    rewards.defender += config.weights[1][i] * metrics.values[i];
  }
  return rewards;
}

}  // namespace mcas
