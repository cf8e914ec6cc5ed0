#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mcas/observation.hpp"
#include "mcas/rng.hpp"
#include "mcas/scenario.hpp"

namespace mcas {

/// Tabular action-value store keyed by (observation key, action name);
/// missing entries read as 0. std::map keeps every iteration order and the
/// JSON export canonical.
class QTable {
 public:
  using Row = std::map<std::string, double>;

  double value(ObservationKey key, const std::string& action) const;
  void set(ObservationKey key, const std::string& action, double v);
  /// Max over the stored row; 0 when the row is empty or missing.
  double row_max(ObservationKey key) const;

  const std::map<ObservationKey, Row>& rows() const { return rows_; }
  std::size_t entry_count() const;
  bool operator==(const QTable&) const = default;

 private:
  std::map<ObservationKey, Row> rows_;
};

/// One-step bootstrapped update:
///   Q(s,a) <- Q(s,a) + alpha * (r + gamma * max_b Q(s',b) - Q(s,a))
/// Touches no entry other than (s, a).
void q_update(QTable& table, ObservationKey s, const std::string& a, double r,
              ObservationKey s_next, double alpha, double gamma);

/// Canonical JSON (sorted keys) round-trip for reproducible evaluation runs.
std::string qtable_to_json(const QTable& table);
QTable qtable_from_json(std::string_view text);

/// Linear schedule: start -> end over the first `decay_episodes` episodes,
/// then flat at end.
double epsilon_at(const QLearningConfig& config, int episode,
                  int decay_episodes);

/// A behavior selects the next action from the observations and reward
/// returned on the agent's previous turn. Instances own their mutable state
/// (Q table, last transition) and belong to a single environment at a time.
class Behavior {
 public:
  virtual ~Behavior() = default;

  virtual const std::string& choose(const Observation& observation,
                                    double last_reward, Rng& rng) = 0;

  /// Episode boundaries. `finish_episode` delivers the terminal-cycle reward
  /// so learners can close out their last transition.
  virtual void begin_episode() {}
  virtual void finish_episode(double /*final_reward*/) {}
};

/// Uniform over the agent's action_ids (never `pass`).
class RandomBehavior final : public Behavior {
 public:
  explicit RandomBehavior(std::vector<std::string> action_ids);
  const std::string& choose(const Observation&, double, Rng& rng) override;

 private:
  std::vector<std::string> action_ids_;
};

/// Walks predicate nodes against the observation; leaves name the action.
/// Deterministic: equal observations yield equal actions.
class DecisionTreeBehavior final : public Behavior {
 public:
  explicit DecisionTreeBehavior(DecisionTree tree);
  const std::string& choose(const Observation& observation, double,
                            Rng&) override;

 private:
  DecisionTree tree_;
  std::string pass_ = std::string(kPassAction);
};

/// Always `pass`; stands in for inactive agents.
class PassBehavior final : public Behavior {
 public:
  const std::string& choose(const Observation&, double, Rng&) override {
    return pass_;
  }

 private:
  std::string pass_ = std::string(kPassAction);
};

/// Epsilon-greedy over the Q row of the encoded observation, ties broken by
/// lowest action index. When learning is enabled the behavior applies the
/// one-step update online as rewards arrive.
class QLearningBehavior final : public Behavior {
 public:
  QLearningBehavior(QLearningConfig config, std::vector<std::string> action_ids);

  const std::string& choose(const Observation& observation, double last_reward,
                            Rng& rng) override;
  void begin_episode() override;
  void finish_episode(double final_reward) override;

  void set_epsilon(double epsilon) { epsilon_ = epsilon; }
  double epsilon() const { return epsilon_; }
  void set_learning(bool enabled) { learning_ = enabled; }

  const QTable& table() const { return table_; }
  QTable& table() { return table_; }
  const QLearningConfig& config() const { return config_; }

 private:
  const std::string& greedy(ObservationKey key) const;

  QLearningConfig config_;
  std::vector<std::string> action_ids_;
  QTable table_;
  double epsilon_ = 0.0;
  bool learning_ = true;
  bool has_last_ = false;
  ObservationKey last_key_ = 0;
  std::string last_action_;
};

/// Instantiates the configured behavior for one agent.
std::unique_ptr<Behavior> make_behavior(const AgentSpec& agent);

}  // namespace mcas
