#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcas/behavior.hpp"
#include "mcas/metrics.hpp"
#include "mcas/observation.hpp"
#include "mcas/rng.hpp"
#include "mcas/scenario.hpp"

namespace mcas {

enum class TerminationStatus { Running, AttackerGoalReached, MaxCyclesReached };

std::string_view termination_name(TerminationStatus status);

/// Result of one agent turn.
struct StepOutcome {
  bool applied = false;  // false = no-op turn (pass, failed pre, failed roll)
  std::uint64_t new_state_digest = 0;
  Observation observation;  // the acting agent's view of the new state
  /// Present only on the last agent's turn of a cycle.
  std::optional<RewardPair> cycle_rewards;
  TerminationStatus terminal = TerminationStatus::Running;
};

/// Runs the agent-environment cycle: agents act once each, in declaration
/// order; rewards are computed once per full cycle from the post-cycle state
/// and delivered to every team member on its next turn; termination (attacker
/// goal, cycle budget) is checked when a cycle completes.
///
/// One instance is single-threaded. Instances are independent; training
/// sweeps run one instance per episode with seeds derived as
/// seed + episode_index.
class Environment {
 public:
  /// Throws InvalidScenario when validation yields Error diagnostics.
  explicit Environment(ScenarioSpec spec);

  struct ResetResult {
    EnvState state;
    std::vector<Observation> observations;  // one per agent, agent order
  };

  /// Rebuilds the initial state from the scenario nodes, zeroes rewards and
  /// deterministically seeds the success-roll stream.
  ResetResult reset(std::uint64_t seed);

  /// Plays one turn. `agent_cursor` must equal current_agent_index().
  /// An inapplicable or failed-roll action is a no-op, not an error.
  /// Throws OutOfTurn, UnknownAction, ActionNotAllowedForAgent.
  StepOutcome step(std::size_t agent_cursor, const std::string& chosen_action);

  const ScenarioSpec& scenario() const { return spec_; }
  const EnvState& state() const { return state_; }
  std::size_t current_agent_index() const { return cursor_; }
  /// Completed cycles.
  int cycle() const { return cycle_; }
  TerminationStatus status() const { return status_; }

  /// The observation returned at the end of the agent's previous turn (or at
  /// reset). This is what the agent's behavior decides on.
  const Observation& last_observation(std::size_t agent_index) const;
  /// Team component of the rewards computed at the end of the previous full
  /// cycle; zero before the first cycle completes.
  double delivered_reward(std::size_t agent_index) const;
  const RewardPair& last_cycle_rewards() const { return last_rewards_; }

 private:
  ScenarioSpec spec_;
  EnvState state_;
  std::size_t cursor_ = 0;
  int cycle_ = 0;
  TerminationStatus status_ = TerminationStatus::Running;
  Rng rng_{0};
  RewardPair last_rewards_;
  std::vector<std::string> cycle_actions_;  // joint action of the open cycle
  std::vector<Observation> last_obs_;
};

/// One turn in an episode log. Reward fields are zero except on the last
/// agent's record of each cycle, which carries that cycle's team rewards.
struct StepRecord {
  int cycle = 0;  // 1-based
  std::string agent;
  std::string action;
  bool applied = false;
  double att_reward = 0.0;
  double def_reward = 0.0;
  TerminationStatus terminal = TerminationStatus::Running;

  bool operator==(const StepRecord&) const = default;
};

struct AgentEpisodeStats {
  std::string agent;
  Team team = Team::Attacker;
  double episode_return = 0.0;  // sum of the team's cycle rewards
  int path_length = 0;          // distinct non-pass actions applied
  bool success = false;         // episode-level: attacker goal reached

  bool operator==(const AgentEpisodeStats&) const = default;
};

struct EpisodeLog {
  int episode = 0;
  std::vector<StepRecord> records;  // cycle-major, agent-order-minor
  TerminationStatus terminal = TerminationStatus::Running;
  int cycles = 0;
  std::vector<AgentEpisodeStats> stats;  // agent order

  bool success() const {
    return terminal == TerminationStatus::AttackerGoalReached;
  }
  /// Sum of the attacker agents' path lengths.
  int attacker_path_length() const;

  bool operator==(const EpisodeLog&) const = default;
};

/// Plays one full episode with one behavior per agent (agent order).
/// Behaviors receive the reward delivery contract described above and their
/// finish_episode hook at termination. Deterministic given (scenario, seed)
/// for deterministic behaviors; behavior RNG streams are derived from the
/// seed per agent.
EpisodeLog run_episode(const ScenarioSpec& spec,
                       const std::vector<Behavior*>& behaviors,
                       std::uint64_t seed, int episode_index = 0);

/// Line-delimited export, one record per line:
/// {"episode":..,"cycle":..,"agent":..,"action":..,"applied":..,
///  "att_reward":..,"def_reward":..,"terminal":".."}
std::string episode_to_jsonl(const EpisodeLog& log);

/// Header for summary CSV rows (one row per episode, per-agent return/path
/// columns in agent order).
std::string summary_csv_header(const ScenarioSpec& spec);
std::string summary_csv_row(const EpisodeLog& log);

}  // namespace mcas
