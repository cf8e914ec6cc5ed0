#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mcas/state.hpp"

namespace mcas {

struct ScenarioSpec;

/// Named metric values; dimension and name order are fixed per scenario.
struct MetricVector {
  std::vector<std::string> names;
  std::vector<double> values;

  bool operator==(const MetricVector&) const = default;
};

/// One team reward per side; the same scalar is delivered to every member of
/// the team.
struct RewardPair {
  double attacker = 0.0;
  double defender = 0.0;

  bool operator==(const RewardPair&) const = default;
};

/// Affine reward map: rewards = weights * metrics + bias.
/// weights[0]/bias[0] is the attacker row, [1] the defender row.
struct EvalConfig {
  std::array<std::vector<double>, 2> weights;
  std::array<double, 2> bias{0.0, 0.0};

  bool operator==(const EvalConfig&) const = default;
};

/// Built-in metric names understood by compute_metrics.
///   active_node_count      nodes whose `<node>.active` is bound and not
///                          "false"
///   lateral_move_count     distinct `<node>.compromised_by.*` ids
///   compromised_node_count distinct nodes with a compromised_by property
///   attacker_goal_progress satisfied conjunct count of the best goal
///                          alternative
const std::vector<std::string>& builtin_metric_names();
bool is_builtin_metric(const std::string& name);

/// Evaluates the scenario's configured metric list on a state and last joint
/// action. Throws UnknownMetric for names outside the built-in set.
MetricVector compute_metrics(const ScenarioSpec& scenario, const EnvState& state,
                             std::span<const std::string> joint_action);

/// Throws DimensionMismatch when a weight row disagrees with the metric
/// dimension.
RewardPair eval_rewards(const MetricVector& metrics, const EvalConfig& config);

}  // namespace mcas
